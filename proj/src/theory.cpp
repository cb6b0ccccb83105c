#include "tflag/theory.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstring>
#include <map>
#include <numeric>
#include <string>

#include "tflag/errors.hpp"

namespace tflag {

namespace {

constexpr std::size_t kColorOffset = 2;
constexpr std::size_t kRelationOffset = kColorOffset + kMaxCanonicalSize;

std::vector<Theory> build_registry() {
  std::vector<Theory> r;
  Model c4 = named::directed_cycle(4);
  Model i34 = named::empty_3graph(4);
  r.push_back({TheoryId::Graph, "graph", "Graph", 2, false, false, {}});
  r.push_back({TheoryId::FDF, "fdf", "FDF", 2, true, false, {c4}});
  r.push_back({TheoryId::Turan, "turan", "Turan", 3, false, false, {i34}});
  r.push_back({TheoryId::GraphStar, "graphstar", "GraphStar", 2, false, true, {}});
  r.push_back({TheoryId::FDFStar, "fdfstar", "FDFStar", 2, true, true, {c4}});
  r.push_back({TheoryId::TuranStar, "turanstar", "TuranStar", 3, false, true, {i34}});
  return r;
}

bool is_directed(TheoryId t) { return t == TheoryId::FDF || t == TheoryId::FDFStar; }
bool is_ternary(TheoryId t) { return t == TheoryId::Turan || t == TheoryId::TuranStar; }
bool is_colored(TheoryId t) {
  return t == TheoryId::GraphStar || t == TheoryId::FDFStar || t == TheoryId::TuranStar;
}

// Iterates all k-subsets of {0..n-1} in lexicographic order.
template <class F>
void for_each_subset(int n, int k, F&& fn) {
  if (k > n || k < 0) return;
  std::vector<int> s(static_cast<std::size_t>(k));
  std::iota(s.begin(), s.end(), 0);
  while (true) {
    fn(std::span<const int>(s));
    int i = k - 1;
    while (i >= 0 && s[i] == n - k + i) --i;
    if (i < 0) return;
    ++s[i];
    for (int j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
  }
}

std::uint64_t vertex_invariant(const Model& m, int v, int fixed) {
  const int n = m.size();
  std::uint64_t inv = static_cast<std::uint64_t>(m.color(v) + 1);
  for (int i = 0; i < fixed; ++i) {
    std::uint64_t state = 0;
    if (is_ternary(m.theory())) {
      // number of triples through both v and labelled vertex i
      for (int w = 0; w < n; ++w) state += (w != v && w != i && m.triple(v, i, w)) ? 1 : 0;
    } else {
      state = m.edge(i, v) ? 1 : (m.edge(v, i) ? 2 : 0);
    }
    inv = (inv << 3) | std::min<std::uint64_t>(state, 7);
  }
  std::uint64_t out = 0, in = 0;
  if (is_ternary(m.theory())) {
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (a != v && b != v && m.triple(v, a, b)) ++out;
  } else {
    for (int w = 0; w < n; ++w) {
      if (w == v) continue;
      out += m.edge(v, w) ? 1 : 0;
      in += m.edge(w, v) ? 1 : 0;
    }
  }
  inv = (inv << 6) | out;
  inv = (inv << 4) | in;
  return inv;
}

}  // namespace

// ---------------------------------------------------------------------------
// Theory registry

const Theory& theory(TheoryId id) {
  static const std::vector<Theory> registry = build_registry();
  return registry[static_cast<std::size_t>(id)];
}

TheoryId parse_theory(std::string_view name) {
  std::string s;
  for (char c : name) {
    if (c == '*') {
      s += "star";
    } else if (c != '_' && c != '-') {
      s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  for (int i = 0; i < 6; ++i) {
    const auto id = static_cast<TheoryId>(i);
    if (theory(id).name == s) return id;
  }
  throw SchemaError("unknown theory '" + std::string(name) + "'");
}

std::string_view theory_name(TheoryId id) { return theory(id).name; }

TheoryId uncolored(TheoryId id) {
  switch (id) {
    case TheoryId::GraphStar: return TheoryId::Graph;
    case TheoryId::FDFStar: return TheoryId::FDF;
    case TheoryId::TuranStar: return TheoryId::Turan;
    default: return id;
  }
}

TheoryId with_colors(TheoryId id) {
  switch (id) {
    case TheoryId::Graph: return TheoryId::GraphStar;
    case TheoryId::FDF: return TheoryId::FDFStar;
    case TheoryId::Turan: return TheoryId::TuranStar;
    default: return id;
  }
}

// ---------------------------------------------------------------------------
// Model

Model::Model() : Model(TheoryId::Graph, 0) {}

Model::Model(TheoryId theory, int n) : theory_(theory), n_(n) {
  if (n < 0) throw IndexError("negative vertex count");
  const std::size_t cells = is_ternary(theory) ? static_cast<std::size_t>(n) * n * n
                                                : static_cast<std::size_t>(n) * n;
  rel_.assign(cells, 0);
  if (is_colored(theory)) colors_.assign(static_cast<std::size_t>(n), -1);
}

void Model::check_vertex(int v) const {
  if (v < 0 || v >= n_) {
    throw IndexError("vertex " + std::to_string(v) + " out of range for model on " +
                     std::to_string(n_) + " vertices");
  }
}

void Model::add_edge(int u, int v) {
  if (is_ternary(theory_)) throw InvalidModelError("3-graphs have no binary edges");
  check_vertex(u);
  check_vertex(v);
  if (u == v) throw InvalidModelError("loops are not allowed");
  if (is_directed(theory_)) {
    if (edge(v, u)) throw InvalidModelError("orgraphs cannot contain both u->v and v->u");
    rel_[static_cast<std::size_t>(u) * n_ + v] = 1;
  } else {
    rel_[static_cast<std::size_t>(u) * n_ + v] = 1;
    rel_[static_cast<std::size_t>(v) * n_ + u] = 1;
  }
}

void Model::remove_edge(int u, int v) {
  check_vertex(u);
  check_vertex(v);
  rel_[static_cast<std::size_t>(u) * n_ + v] = 0;
  if (!is_directed(theory_)) rel_[static_cast<std::size_t>(v) * n_ + u] = 0;
}

void Model::add_triple(int u, int v, int w) {
  if (!is_ternary(theory_)) throw InvalidModelError("only 3-graphs have triples");
  check_vertex(u);
  check_vertex(v);
  check_vertex(w);
  if (u == v || v == w || u == w) throw InvalidModelError("3-graph edges need distinct vertices");
  const int t[3] = {u, v, w};
  int p[3] = {0, 1, 2};
  do {
    rel_[(static_cast<std::size_t>(t[p[0]]) * n_ + t[p[1]]) * n_ + t[p[2]]] = 1;
  } while (std::next_permutation(p, p + 3));
}

void Model::set_color(int v, int c) {
  if (!is_colored(theory_)) throw InvalidModelError("theory has no colours");
  check_vertex(v);
  if (c < 0 || c >= kColors) throw InvalidModelError("colour must be in Z3");
  colors_[v] = static_cast<std::int8_t>(c);
}

void Model::check_structure() const {
  for (int v = 0; v < n_; ++v) {
    if (colored() && colors_[v] < 0) {
      throw InvalidModelError("vertex " + std::to_string(v) + " has no colour");
    }
  }
  if (is_ternary(theory_)) return;
  for (int u = 0; u < n_; ++u) {
    if (edge(u, u)) throw InvalidModelError("loop at vertex " + std::to_string(u));
    for (int v = u + 1; v < n_; ++v) {
      if (is_directed(theory_) && edge(u, v) && edge(v, u)) {
        throw InvalidModelError("2-cycle between " + std::to_string(u) + " and " + std::to_string(v));
      }
      if (!is_directed(theory_) && edge(u, v) != edge(v, u)) {
        throw InvalidModelError("asymmetric graph edge");
      }
    }
  }
}

bool Model::satisfies_axioms() const {
  try {
    check_structure();
  } catch (const InvalidModelError&) {
    return false;
  }
  const auto& th = tflag::theory(theory_);
  for (const Model& f : th.forbidden) {
    if (th.directed && f == named::directed_cycle(4)) {
      if (has_induced_c4(*this)) return false;
    } else if (contains_induced(*this, f)) {
      return false;
    }
  }
  return true;
}

std::vector<std::vector<int>> Model::tuples() const {
  std::vector<std::vector<int>> out;
  if (is_ternary(theory_)) {
    for (int u = 0; u < n_; ++u)
      for (int v = u + 1; v < n_; ++v)
        for (int w = v + 1; w < n_; ++w)
          if (triple(u, v, w)) out.push_back({u, v, w});
  } else if (is_directed(theory_)) {
    for (int u = 0; u < n_; ++u)
      for (int v = 0; v < n_; ++v)
        if (edge(u, v)) out.push_back({u, v});
  } else {
    for (int u = 0; u < n_; ++u)
      for (int v = u + 1; v < n_; ++v)
        if (edge(u, v)) out.push_back({u, v});
  }
  return out;
}

int Model::relation_count() const { return static_cast<int>(tuples().size()); }

// ---------------------------------------------------------------------------
// Codes and canonical forms

std::size_t CodeHash::operator()(const Code& c) const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  for (std::uint8_t b : c.bytes) {
    h ^= b;
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

Code encode(const Model& m, std::span<const int> order, int fixed) {
  const int n = static_cast<int>(order.size());
  if (n > kMaxCanonicalSize) {
    throw SizeLimitError("structures above " + std::to_string(kMaxCanonicalSize) +
                         " vertices cannot be encoded");
  }
  Code c;
  c.bytes[0] = static_cast<std::uint8_t>(n);
  c.bytes[1] = static_cast<std::uint8_t>(fixed);
  for (int p = 0; p < n; ++p) c.bytes[kColorOffset + p] = static_cast<std::uint8_t>(m.color(order[p]) + 1);
  std::size_t at = kRelationOffset;
  if (is_ternary(m.theory())) {
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q)
        for (int r = q + 1; r < n; ++r) c.bytes[at++] = m.triple(order[p], order[q], order[r]) ? 1 : 0;
  } else if (is_directed(m.theory())) {
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q)
        c.bytes[at++] = m.edge(order[p], order[q]) ? 1 : (m.edge(order[q], order[p]) ? 2 : 0);
  } else {
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) c.bytes[at++] = m.edge(order[p], order[q]) ? 1 : 0;
  }
  return c;
}

Code encode(const Model& m, int fixed) {
  std::vector<int> order(static_cast<std::size_t>(m.size()));
  std::iota(order.begin(), order.end(), 0);
  return encode(m, order, fixed);
}

CanonicalForm canonical_form(const Model& m, int fixed) {
  const int n = m.size();
  if (n > kMaxCanonicalSize) {
    throw SizeLimitError("canonical forms are limited to " + std::to_string(kMaxCanonicalSize) +
                         " vertices, got " + std::to_string(n));
  }
  if (fixed < 0 || fixed > n) throw IndexError("labelled prefix out of range");

  // Free vertices sorted by invariant; only permutations inside equal-invariant
  // cells can reach the minimum.
  std::vector<std::pair<std::uint64_t, int>> inv;
  for (int v = fixed; v < n; ++v) inv.emplace_back(vertex_invariant(m, v, fixed), v);
  std::sort(inv.begin(), inv.end());

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.begin() + fixed, 0);
  std::vector<std::pair<int, int>> cells;  // [begin, end) positions in order
  for (std::size_t i = 0; i < inv.size(); ++i) {
    order[fixed + i] = inv[i].second;
    if (i == 0 || inv[i].first != inv[i - 1].first) {
      cells.emplace_back(fixed + static_cast<int>(i), fixed + static_cast<int>(i) + 1);
    } else {
      cells.back().second += 1;
    }
  }
  for (auto [b, e] : cells) std::sort(order.begin() + b, order.begin() + e);

  Code best = encode(m, order, fixed);
  std::vector<int> best_order = order;
  std::uint64_t count = 1;
  while (true) {
    int c = static_cast<int>(cells.size()) - 1;
    for (; c >= 0; --c) {
      auto [b, e] = cells[c];
      if (std::next_permutation(order.begin() + b, order.begin() + e)) break;
    }
    if (c < 0) break;
    Code code = encode(m, order, fixed);
    if (code < best) {
      best = code;
      best_order = order;
      count = 1;
    } else if (code == best) {
      ++count;
    }
  }

  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int p = 0; p < n; ++p) perm[best_order[p]] = p;
  return {permuted(m, perm), best, count};
}

std::pair<Model, std::uint64_t> canonicalize(const Model& m) {
  if (m.size() > kMaxCanonicalSize) {
    throw SizeLimitError("canonicalize supports at most " + std::to_string(kMaxCanonicalSize) +
                         " vertices");
  }
  m.check_structure();
  if (!m.satisfies_axioms()) {
    throw InvalidModelError("model contains a forbidden induced substructure of theory " +
                            std::string(theory(m.theory()).display));
  }
  auto cf = canonical_form(m, 0);
  return {std::move(cf.model), cf.automorphisms};
}

// ---------------------------------------------------------------------------
// Substructures

Model induced(const Model& m, std::span<const int> vertices) {
  const int k = static_cast<int>(vertices.size());
  for (int v : vertices) {
    if (v < 0 || v >= m.size()) {
      throw IndexError("vertex " + std::to_string(v) + " out of range for model on " +
                       std::to_string(m.size()) + " vertices");
    }
  }
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (vertices[i] == vertices[j]) throw IndexError("repeated vertex in subset");

  Model out(m.theory(), k);
  for (int i = 0; i < k; ++i) {
    if (m.colored()) out.set_color(i, m.color(vertices[i]));
  }
  if (is_ternary(m.theory())) {
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        for (int l = j + 1; l < k; ++l)
          if (m.triple(vertices[i], vertices[j], vertices[l])) out.add_triple(i, j, l);
  } else {
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        if (i != j && m.edge(vertices[i], vertices[j]) && !out.edge(i, j)) out.add_edge(i, j);
  }
  return out;
}

Model induced(const Model& m, std::initializer_list<int> vertices) {
  return induced(m, std::span<const int>(vertices.begin(), vertices.size()));
}

Model strip_colors(const Model& m) {
  Model out(uncolored(m.theory()), m.size());
  for (const auto& t : m.tuples()) {
    if (t.size() == 3) {
      out.add_triple(t[0], t[1], t[2]);
    } else {
      out.add_edge(t[0], t[1]);
    }
  }
  return out;
}

Model permuted(const Model& m, std::span<const int> perm) {
  const int n = m.size();
  if (static_cast<int>(perm.size()) != n) throw IndexError("permutation size mismatch");
  Model out(m.theory(), n);
  for (int v = 0; v < n; ++v) {
    if (m.colored()) out.set_color(perm[v], m.color(v));
  }
  for (const auto& t : m.tuples()) {
    if (t.size() == 3) {
      out.add_triple(perm[t[0]], perm[t[1]], perm[t[2]]);
    } else {
      out.add_edge(perm[t[0]], perm[t[1]]);
    }
  }
  return out;
}

bool contains_induced(const Model& m, const Model& pattern) {
  if (uncolored(m.theory()) != uncolored(pattern.theory())) {
    throw FlagTypeError("pattern and model have different signatures");
  }
  const int k = pattern.size();
  if (k > m.size()) return false;
  const bool ignore_colors = !pattern.colored();
  const Model target = ignore_colors ? strip_colors(pattern) : pattern;
  const Code want = canonical_form(target, 0).code;
  bool found = false;
  for_each_subset(m.size(), k, [&](std::span<const int> s) {
    if (found) return;
    Model sub = induced(m, s);
    if (ignore_colors && sub.colored()) sub = strip_colors(sub);
    if (canonical_form(sub, 0).code == want) found = true;
  });
  return found;
}

bool has_induced_c4(const Model& g) {
  if (!is_directed(g.theory())) throw FlagTypeError("directed 4-cycles need an orgraph");
  const int n = g.size();
  const std::size_t words = (static_cast<std::size_t>(n) + 63) / 64;
  using Row = std::vector<std::uint64_t>;
  std::vector<Row> out(n, Row(words, 0)), in(n, Row(words, 0)), adj(n, Row(words, 0));
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (g.edge(u, v)) {
        out[u][v / 64] |= 1ULL << (v % 64);
        in[v][u / 64] |= 1ULL << (u % 64);
        adj[u][v / 64] |= 1ULL << (v % 64);
        adj[v][u / 64] |= 1ULL << (u % 64);
      }
  // t1 -> v -> t2 -> w -> t1 with t1,t2 and v,w non-adjacent
  Row mid(words), back(words);
  for (int t1 = 0; t1 < n; ++t1) {
    for (int t2 = 0; t2 < n; ++t2) {
      if (t1 == t2 || g.adjacent(t1, t2)) continue;
      bool any_back = false;
      for (std::size_t i = 0; i < words; ++i) {
        mid[i] = out[t1][i] & in[t2][i];
        back[i] = out[t2][i] & in[t1][i];
        any_back = any_back || back[i] != 0;
      }
      if (!any_back) continue;
      for (std::size_t i = 0; i < words; ++i) {
        for (std::uint64_t bits = mid[i]; bits != 0; bits &= bits - 1) {
          const int v = static_cast<int>(i * 64) + std::countr_zero(bits);
          for (std::size_t j = 0; j < words; ++j) {
            if ((back[j] & ~adj[v][j]) != 0) return true;
          }
        }
      }
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

bool new_vertex_ok(const Model& m, int v, const Theory& th) {
  for (const Model& pattern : th.forbidden) {
    const int k = pattern.size();
    if (k > m.size()) continue;
    const Code want = canonical_form(pattern, 0).code;
    bool bad = false;
    for_each_subset(v, k - 1, [&](std::span<const int> s) {
      if (bad) return;
      std::vector<int> verts(s.begin(), s.end());
      verts.push_back(v);
      Model sub = induced(m, verts);
      if (sub.colored()) sub = strip_colors(sub);
      if (canonical_form(sub, 0).code == want) bad = true;
    });
    if (bad) return false;
  }
  return true;
}

// All ways of attaching vertex n-1 to a structure on n-1 vertices.
void for_each_attachment(const Model& base, const Theory& th, auto&& fn) {
  const int old_n = base.size();
  const int n = old_n + 1;
  std::vector<std::vector<int>> slots;  // tuples of old vertices completing a relation
  int states = 2;
  if (th.arity == 3) {
    for (int a = 0; a < old_n; ++a)
      for (int b = a + 1; b < old_n; ++b) slots.push_back({a, b});
  } else {
    for (int a = 0; a < old_n; ++a) slots.push_back({a});
    if (th.directed) states = 3;
  }
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < slots.size(); ++i) total *= static_cast<std::uint64_t>(states);
  const int color_choices = th.colored ? kColors : 1;

  for (std::uint64_t pattern = 0; pattern < total; ++pattern) {
    Model m(base.theory(), n);
    for (int v = 0; v < old_n; ++v) {
      if (base.colored()) m.set_color(v, base.color(v));
    }
    for (const auto& t : base.tuples()) {
      if (t.size() == 3) {
        m.add_triple(t[0], t[1], t[2]);
      } else {
        m.add_edge(t[0], t[1]);
      }
    }
    std::uint64_t p = pattern;
    for (const auto& slot : slots) {
      const int s = static_cast<int>(p % static_cast<std::uint64_t>(states));
      p /= static_cast<std::uint64_t>(states);
      if (s == 0) continue;
      if (th.arity == 3) {
        m.add_triple(slot[0], slot[1], old_n);
      } else if (s == 1) {
        m.add_edge(slot[0], old_n);
      } else {
        m.add_edge(old_n, slot[0]);
      }
    }
    for (int c = 0; c < color_choices; ++c) {
      if (th.colored) m.set_color(old_n, c);
      fn(m);
    }
  }
}

}  // namespace

std::vector<CanonicalForm> enumerate_extensions(const Model& base, int n) {
  const int fixed = base.size();
  if (n > kMaxCanonicalSize) {
    throw SizeLimitError("enumeration supports at most " + std::to_string(kMaxCanonicalSize) +
                         " vertices, got " + std::to_string(n));
  }
  if (n < fixed) throw SizeLimitError("level below the size of the type");
  base.check_structure();
  if (!base.satisfies_axioms()) throw InvalidModelError("type violates the theory axioms");
  const Theory& th = theory(base.theory());

  std::map<Code, CanonicalForm> layer;
  {
    auto cf = canonical_form(base, fixed);
    layer.emplace(cf.code, std::move(cf));
  }
  for (int size = fixed + 1; size <= n; ++size) {
    std::map<Code, CanonicalForm> next;
    for (const auto& [code, cf] : layer) {
      for_each_attachment(cf.model, th, [&](const Model& m) {
        if (!new_vertex_ok(m, size - 1, th)) return;
        auto ext = canonical_form(m, fixed);
        if (!next.contains(ext.code)) next.emplace(ext.code, std::move(ext));
      });
    }
    layer = std::move(next);
  }
  std::vector<CanonicalForm> out;
  out.reserve(layer.size());
  for (auto& [code, cf] : layer) out.push_back(std::move(cf));
  return out;
}

std::vector<Model> enumerate_models(TheoryId theory_id, int n) {
  if (n < 0 || n > kMaxCanonicalSize) {
    throw SizeLimitError("model enumeration is limited to 0 <= n <= " +
                         std::to_string(kMaxCanonicalSize) + ", got " + std::to_string(n));
  }
  std::vector<Model> out;
  for (auto& cf : enumerate_extensions(Model(theory_id, 0), n)) out.push_back(std::move(cf.model));
  return out;
}

// ---------------------------------------------------------------------------
// Named structures

namespace named {

Model empty(TheoryId theory, int n) { return Model(theory, n); }

Model directed_cycle(int n) {
  Model m(TheoryId::FDF, n);
  for (int v = 0; v < n; ++v) m.add_edge(v, (v + 1) % n);
  return m;
}

Model transitive_tournament(int n) {
  Model m(TheoryId::FDF, n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) m.add_edge(u, v);
  return m;
}

Model complete_graph(int n) {
  Model m(TheoryId::Graph, n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) m.add_edge(u, v);
  return m;
}

Model graph_path(int n) {
  Model m(TheoryId::Graph, n);
  for (int v = 0; v + 1 < n; ++v) m.add_edge(v, v + 1);
  return m;
}

Model empty_3graph(int n) { return Model(TheoryId::Turan, n); }

Model orgraph_i3() { return Model(TheoryId::FDF, 3); }

Model orgraph_p3bar() {
  Model m(TheoryId::FDF, 3);
  m.add_edge(0, 1);
  return m;
}

Model orgraph_out_star() {
  Model m(TheoryId::FDF, 3);
  m.add_edge(0, 1);
  m.add_edge(0, 2);
  return m;
}

Model orgraph_in_star() {
  Model m(TheoryId::FDF, 3);
  m.add_edge(1, 0);
  m.add_edge(2, 0);
  return m;
}

Model orgraph_path() {
  Model m(TheoryId::FDF, 3);
  m.add_edge(0, 1);
  m.add_edge(1, 2);
  return m;
}

Model orgraph_transitive() { return transitive_tournament(3); }

Model orgraph_cycle() { return directed_cycle(3); }

}  // namespace named

}  // namespace tflag
