#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tflag {

enum class TheoryId : std::uint8_t { Graph, FDF, Turan, GraphStar, FDFStar, TuranStar };

inline constexpr int kColors = 3;
inline constexpr int kMaxCanonicalSize = 8;

class Model;

/// Signature and axioms of one of the six relational theories.
///
/// Structural axioms (symmetry, antisymmetry, the colour partition) are
/// enforced by Model itself; `forbidden` lists uncoloured models that may not
/// occur as induced substructures.
struct Theory {
  TheoryId id;
  std::string_view name;     // CLI spelling, e.g. "graphstar"
  std::string_view display;  // e.g. "GraphStar"
  int arity;                 // 2 for (or)graphs, 3 for 3-graphs
  bool directed;
  bool colored;
  std::vector<Model> forbidden;
};

const Theory& theory(TheoryId id);
TheoryId parse_theory(std::string_view name);
std::string_view theory_name(TheoryId id);
TheoryId uncolored(TheoryId id);
TheoryId with_colors(TheoryId id);

/// Finite structure of one of the theories: a binary or ternary relation on
/// vertices 0..n-1, plus a Z3 colour per vertex for starred theories.
///
/// For Graph the binary relation is symmetric; for FDF it is the arc relation
/// u -> v; for Turan it is a fully symmetric set of triples.
class Model {
 public:
  Model();
  Model(TheoryId theory, int n);

  TheoryId theory() const { return theory_; }
  int size() const { return n_; }

  /// Graph: adjacency. FDF: arc u -> v.
  bool edge(int u, int v) const { return rel_[static_cast<std::size_t>(u) * n_ + v] != 0; }
  /// Either orientation.
  bool adjacent(int u, int v) const { return edge(u, v) || edge(v, u); }
  bool triple(int u, int v, int w) const {
    return rel_[(static_cast<std::size_t>(u) * n_ + v) * n_ + w] != 0;
  }
  /// -1 for uncoloured theories.
  int color(int v) const { return colors_.empty() ? -1 : colors_[v]; }
  bool colored() const { return !colors_.empty(); }

  void add_edge(int u, int v);
  void remove_edge(int u, int v);
  void add_triple(int u, int v, int w);
  void set_color(int v, int c);

  /// Throws InvalidModelError if a structural axiom fails (missing colour, ...).
  void check_structure() const;
  /// Structural axioms plus absence of forbidden induced substructures.
  bool satisfies_axioms() const;

  /// Relation tuples in listing order: Graph (u<v), FDF arcs (u,v), Turan (u<v<w).
  std::vector<std::vector<int>> tuples() const;
  int relation_count() const;

  friend bool operator==(const Model&, const Model&) = default;

 private:
  void check_vertex(int v) const;

  TheoryId theory_;
  int n_;
  std::vector<std::uint8_t> rel_;
  std::vector<std::int8_t> colors_;
};

/// Encoding of a structure on at most kMaxCanonicalSize vertices. The
/// canonical code of a flag is the lexicographic minimum of this encoding over
/// the admissible relabelings of its free vertices.
struct Code {
  std::array<std::uint8_t, 72> bytes{};
  friend auto operator<=>(const Code&, const Code&) = default;
};

struct CodeHash {
  std::size_t operator()(const Code& c) const noexcept;
};

/// Encoding of the substructure of `m` induced by `order`, with order[p]
/// placed at position p; `fixed` is recorded as the labelled prefix length.
Code encode(const Model& m, std::span<const int> order, int fixed);
Code encode(const Model& m, int fixed = 0);

struct CanonicalForm {
  Model model;  // relabelled structure; vertices 0..fixed-1 unchanged
  Code code;
  std::uint64_t automorphisms;  // label-fixing automorphisms
};

/// Canonical form keeping vertices 0..fixed-1 in place (the labelled prefix
/// of a flag) and permuting the rest. Colours are never permuted.
CanonicalForm canonical_form(const Model& m, int fixed = 0);

/// Canonical representative and automorphism group order. Throws
/// InvalidModelError if the model violates its theory's axioms and
/// SizeLimitError above kMaxCanonicalSize vertices.
std::pair<Model, std::uint64_t> canonicalize(const Model& m);

/// One representative per isomorphism class, in increasing code order.
std::vector<Model> enumerate_models(TheoryId theory, int n);

/// All canonical extensions of `base` (whose vertices all stay labelled) to
/// `n` vertices, in increasing code order. Used for flag bases.
std::vector<CanonicalForm> enumerate_extensions(const Model& base, int n);

/// Induced substructure on `vertices`, in the given order; colours inherited.
Model induced(const Model& m, std::span<const int> vertices);
Model induced(const Model& m, std::initializer_list<int> vertices);

/// Same structure with colours dropped and theory switched to its uncoloured base.
Model strip_colors(const Model& m);

/// Vertex v of `m` becomes vertex perm[v].
Model permuted(const Model& m, std::span<const int> perm);

/// True iff some vertex subset induces a copy of `pattern`. Colours are
/// ignored when the pattern is uncoloured.
bool contains_induced(const Model& m, const Model& pattern);

/// Direct test for an induced directed 4-cycle; works for any size.
bool has_induced_c4(const Model& orgraph);

namespace named {

Model empty(TheoryId theory, int n);
Model directed_cycle(int n);
Model transitive_tournament(int n);
Model complete_graph(int n);
Model graph_path(int n);
Model empty_3graph(int n);

/// The seven 3-vertex orgraphs.
Model orgraph_i3();       // no arcs
Model orgraph_p3bar();    // one arc
Model orgraph_out_star(); // one vertex with out-degree 2
Model orgraph_in_star();  // one vertex with in-degree 2
Model orgraph_path();     // 0 -> 1 -> 2
Model orgraph_transitive();
Model orgraph_cycle();

}  // namespace named

}  // namespace tflag
