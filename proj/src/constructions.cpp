#include "tflag/constructions.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "tflag/catalog.hpp"
#include "tflag/errors.hpp"
#include "tflag/flags.hpp"
#include "tflag/interpretations.hpp"
#include "tflag/parallel.hpp"

namespace tflag {

namespace {

bool fdf_triple(const Model& g, int a, int b, int c) {
  const int t[3] = {a, b, c};
  for (int i = 0; i < 3; ++i) {
    const int v = t[i], x = t[(i + 1) % 3], y = t[(i + 2) % 3];
    if (g.edge(v, x) && g.edge(v, y)) return true;
    if (!g.adjacent(v, x) && !g.adjacent(v, y)) return true;
  }
  return false;
}

void require_orgraph(const Model& g) {
  if (g.theory() != TheoryId::FDF && g.theory() != TheoryId::FDFStar) {
    throw InvalidModelError("expected an orgraph");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Gamma_K

KostochkaSpec KostochkaSpec::symmetric(const std::vector<Rational>& s) {
  KostochkaSpec spec;
  for (auto& part : spec.parts) part = s;
  return spec;
}

void KostochkaSpec::validate() const {
  std::vector<Rational> all;
  for (const auto& part : parts) {
    std::set<Rational> seen;
    for (const Rational& x : part) {
      if (!seen.insert(x).second) throw InvalidSpecError("duplicate coordinate " + to_string(x));
      all.push_back(x);
    }
  }
  // x + y = 0 for some pair  <=>  some x equals -y; x = y = 0 included
  std::set<Rational> values(all.begin(), all.end());
  for (const Rational& x : values) {
    if (values.contains(-x)) {
      throw InvalidSpecError("coordinates " + to_string(x) + " and " + to_string(Rational(-x)) +
                             " sum to zero");
    }
  }
}

int KostochkaSpec::size() const {
  return static_cast<int>(parts[0].size() + parts[1].size() + parts[2].size());
}

Model gamma_k(const KostochkaSpec& spec) {
  spec.validate();
  std::vector<std::pair<int, Rational>> verts;
  for (int a = 0; a < 3; ++a) {
    for (const Rational& x : spec.parts[a]) verts.emplace_back(a, x);
  }
  const int n = static_cast<int>(verts.size());
  Model g(TheoryId::FDF, n);
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      const auto& [a, x] = verts[u];
      const auto& [b, y] = verts[v];
      const int sum_sign = sgn(Rational(x + y));
      if ((sum_sign < 0 && b == (a + 1) % 3) || (sum_sign > 0 && b == (a + 2) % 3)) g.add_edge(u, v);
    }
  }
  return g;
}

Model gamma_k(const std::vector<Rational>& s) { return gamma_k(KostochkaSpec::symmetric(s)); }

// ---------------------------------------------------------------------------
// FDF densities

Model fdf_hypergraph(const Model& g) {
  require_orgraph(g);
  const int n = g.size();
  Model out(TheoryId::Turan, n);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c)
        if (fdf_triple(g, a, b, c)) out.add_triple(a, b, c);
  return out;
}

Rational density_fdf(const Model& g) {
  require_orgraph(g);
  const int n = g.size();
  if (n < 3) throw SizeLimitError("FDF density needs at least 3 vertices");
  std::vector<std::uint64_t> per_first(static_cast<std::size_t>(n), 0);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t ai) {
    const int a = static_cast<int>(ai);
    std::uint64_t count = 0;
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c)
        if (fdf_triple(g, a, b, c)) ++count;
    per_first[ai] = count;
  });
  mpz_class edges = 0;
  for (auto c : per_first) edges += static_cast<unsigned long>(c);
  Rational r(edges, binomial(n, 3));
  r.canonicalize();
  return r;
}

// ---------------------------------------------------------------------------
// Random orientations and the example2 construction

Model random_bipartite_orientation(int m, std::uint64_t seed) {
  if (m < 1) throw InvalidSpecError("bipartite side must have at least one vertex");
  std::mt19937_64 rng(seed);
  Model g(TheoryId::FDF, 2 * m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if ((rng() >> 63) != 0) {
        g.add_edge(i, m + j);
      } else {
        g.add_edge(m + j, i);
      }
    }
  }
  return g;
}

KostochkaSpec example2_spec(const Rational& delta0, int m) {
  if (delta0 <= 0 || delta0 >= Rational(1, 3)) throw InvalidSpecError("delta0 must lie in (0, 1/3)");
  if (m < 2) throw InvalidSpecError("m must be at least 2");
  const Rational sixth(1, 6);
  const Rational half_d = delta0 / 2;
  const std::array<std::pair<Rational, Rational>, 3> intervals = {
      std::pair<Rational, Rational>{-sixth + half_d, sixth - half_d},
      std::pair<Rational, Rational>{-sixth - half_d, sixth},
      std::pair<Rational, Rational>{-sixth, sixth + half_d}};
  const Rational h = Rational(1, 3 * m);
  const Rational dither = delta0 / (10 * m);
  KostochkaSpec spec;
  for (int a = 0; a < 3; ++a) {
    const auto& [lo, hi] = intervals[a];
    const Rational cells = (hi - lo) / h;
    const mpz_class count = cells.get_num() / cells.get_den();  // floor, cells > 0
    for (long i = 0; i < count.get_si(); ++i) {
      Rational x = lo + (Rational(i) + Rational(1, 2)) * h + dither;
      x.canonicalize();
      spec.parts[a].push_back(x);
    }
  }
  spec.validate();
  return spec;
}

Model example2_orgraph(const Rational& delta0, int m) { return gamma_k(example2_spec(delta0, m)); }

bool verify_c4_lemma(const Model& g) {
  require_orgraph(g);
  const int n = g.size();
  for (int t1 = 0; t1 < n; ++t1)
    for (int t2 = 0; t2 < n; ++t2) {
      if (t1 == t2 || g.adjacent(t1, t2)) continue;
      for (int v = 0; v < n; ++v) {
        if (v == t1 || v == t2 || !g.edge(t1, v) || !g.edge(v, t2)) continue;
        for (int w = 0; w < n; ++w) {
          if (w == v || w == t1 || w == t2) continue;
          if (g.edge(t2, w) && g.edge(w, t1) && !g.adjacent(v, w)) return false;
        }
      }
    }
  return true;
}

// ---------------------------------------------------------------------------
// Reports

DensityReport density_report(const std::string& construction, const Model& g) {
  require_orgraph(g);
  DensityReport r;
  r.construction = construction;
  r.n = g.size();
  r.fdf_density = density_fdf(g);
  r.c4_free = !has_induced_c4(g);

  namespace el = elements;
  const auto oe = [](const AlgebraElement& a) { return pi(InterpretationId::OE, a); };
  const std::map<std::string, AlgebraElement> targets = {
      {"rho", oe(el::rho())},
      {"K3", oe(el::K3())},
      {"P3bar", oe(el::P3bar())},
      {"delta_rho", oe(el::delta_rho())},
      {"delta_K3", oe(el::delta_K3())},
      {"f", oe(el::f())},
      {"delta", el::delta()},
      {"avg_delta_alpha_sq", average(el::delta_alpha() * el::delta_alpha())},
  };
  const auto basis = FlagBasis::get(FlagType::empty(TheoryId::FDF), 3);
  mpz_class total;
  const auto counts = flag_counts(*basis, g, total);
  for (const auto& [name, element] : targets) {
    const AlgebraElement lifted = lift(element, 3);
    Rational v = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      if (counts[i] != 0) v += lifted[i] * mpz_class(static_cast<unsigned long>(counts[i]));
    }
    r.values[name] = v / total;
  }
  const Rational slack(3, g.size());
  const Rational& dr = r.values["delta_rho"];
  const Rational& dk = r.values["delta_K3"];
  r.goodman_holds = dk <= Rational(5, 3) * dr - 2 * dr * dr + slack;
  if (dr < 0) {
    r.fisher_holds = true;
  } else {
    // dk <= dr + (sqrt6/3) dr^{3/2} + slack, squared on the nonnegative side
    const Rational lhs = dk - dr - slack;
    r.fisher_holds = lhs <= 0 || lhs * lhs <= Rational(2, 3) * dr * dr * dr;
  }
  return r;
}

nlohmann::json report_to_json(const DensityReport& r) {
  nlohmann::json j;
  j["construction"] = r.construction;
  j["n"] = r.n;
  j["fdf_density"] = to_string(r.fdf_density);
  j["fdf_density_approx"] = r.fdf_density.get_d();
  j["c4_free"] = r.c4_free;
  nlohmann::json values = nlohmann::json::object();
  for (const auto& [name, v] : r.values) {
    values[name] = to_string(v);
    values[name + "_approx"] = v.get_d();
  }
  j["values"] = values;
  j["goodman_bound_holds"] = r.goodman_holds;
  j["fisher_bound_holds"] = r.fisher_holds;
  return j;
}

}  // namespace tflag
