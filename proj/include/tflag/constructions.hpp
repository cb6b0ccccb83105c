#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "tflag/rational.hpp"
#include "tflag/theory.hpp"

namespace tflag {

/// Coordinates of the Turan-Brown-Kostochka orgraph. `parts[a]` lists the
/// x with (a, x) a vertex; the symmetric form uses the same S for all parts.
struct KostochkaSpec {
  std::array<std::vector<Rational>, 3> parts;

  static KostochkaSpec symmetric(const std::vector<Rational>& s);
  /// Throws InvalidSpecError on duplicate coordinates within a part or on
  /// x + y = 0 for any two coordinates (x = y included).
  void validate() const;
  int size() const;
};

/// Orgraph on Z3 x S: (a,x) -> (b,y) iff x+y < 0 and b = a+1, or x+y > 0 and
/// b = a-1. Vertex (a, x_i) gets index offset(a) + i.
Model gamma_k(const KostochkaSpec& spec);
Model gamma_k(const std::vector<Rational>& s);

/// 3-graph whose edges are the triples containing an isolated vertex or a
/// vertex of out-degree 2. Works for any size.
Model fdf_hypergraph(const Model& orgraph);

/// Edge density of fdf_hypergraph(g), computed without building it.
Rational density_fdf(const Model& orgraph);

/// K_{m,m} with every edge oriented by one bit of a std::mt19937_64 stream
/// seeded with `seed`: the top bit of each draw, pairs in row-major order.
Model random_bipartite_orientation(int m, std::uint64_t seed);

/// Discretization of the measure of the example2 construction: cell midpoints of a grid of
/// step 1/(3m), shifted by delta0/(10m), on the three coordinate intervals.
/// Part sizes are proportional to the interval lengths.
KostochkaSpec example2_spec(const Rational& delta0, int m);
Model example2_orgraph(const Rational& delta0, int m);

/// For every nonadjacent pair t1, t2 and distinct v, w with t1->v->t2->w->t1,
/// the pair v, w is adjacent.
bool verify_c4_lemma(const Model& orgraph);

struct DensityReport {
  std::string construction;
  int n = 0;
  Rational fdf_density;  // density of pi^FDF(rho3)
  bool c4_free = false;
  /// Exact evaluations of level <= 3 elements: delta_rho, delta_K3, P3bar,
  /// f, delta, avg_delta_alpha_sq, rho, K3.
  std::map<std::string, Rational> values;
  /// Goodman and Lovasz-Simonovits/Fisher bounds with slack 3/n.
  bool goodman_holds = false;
  bool fisher_holds = false;
};

DensityReport density_report(const std::string& construction, const Model& orgraph);
nlohmann::json report_to_json(const DensityReport& report);

}  // namespace tflag
