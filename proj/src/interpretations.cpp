#include "tflag/interpretations.hpp"

#include <algorithm>
#include <cctype>

#include "tflag/errors.hpp"
#include "tflag/parallel.hpp"

namespace tflag {

namespace {

Model erase_orientation(const Model& m, TheoryId to) {
  Model out(to, m.size());
  for (int v = 0; v < m.size(); ++v) {
    if (out.colored()) out.set_color(v, m.color(v));
  }
  for (int u = 0; u < m.size(); ++u)
    for (int v = u + 1; v < m.size(); ++v)
      if (m.adjacent(u, v)) out.add_edge(u, v);
  return out;
}

Model fdf_rule(const Model& g) {
  const int n = g.size();
  Model out(TheoryId::Turan, n);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c) {
        const int t[3] = {a, b, c};
        bool edge = false;
        for (int i = 0; i < 3 && !edge; ++i) {
          const int v = t[i], x = t[(i + 1) % 3], y = t[(i + 2) % 3];
          if (g.edge(v, x) && g.edge(v, y)) edge = true;
          if (!g.adjacent(v, x) && !g.adjacent(v, y)) edge = true;
        }
        if (edge) out.add_triple(a, b, c);
      }
  return out;
}

// Colour of a free vertex relative to the labelled pair (c1, c2) = (0, 1).
int introduced_color(const Model& f, int v) {
  const bool e1 = f.adjacent(0, v);
  const bool e2 = f.adjacent(1, v);
  if (e1 == e2) return 0;
  return e2 ? 1 : 2;
}

Model color_rule(const Model& f, TheoryId to) {
  const int n = f.size();
  std::vector<int> rest;
  for (int v = 2; v < n; ++v) rest.push_back(v);
  Model sub = induced(f, rest);
  Model out(to, n - 2);
  for (int i = 0; i < n - 2; ++i) out.set_color(i, introduced_color(f, rest[i]));
  for (const auto& t : sub.tuples()) out.add_edge(t[0], t[1]);
  return out;
}

Model arc_model() {
  Model m(TheoryId::FDF, 2);
  m.add_edge(0, 1);
  return m;
}

Model edge_model() {
  Model m(TheoryId::Graph, 2);
  m.add_edge(0, 1);
  return m;
}

std::vector<Interpretation> build() {
  std::vector<Interpretation> r;
  const auto none = [](TheoryId t) { return FlagType::empty(t); };
  r.push_back({InterpretationId::FDF, "FDF", none(TheoryId::Turan), none(TheoryId::FDF), 0, fdf_rule});
  r.push_back({InterpretationId::OE, "OE", none(TheoryId::Graph), none(TheoryId::FDF), 0,
               [](const Model& m) { return erase_orientation(m, TheoryId::Graph); }});
  r.push_back({InterpretationId::OEStar, "OEStar", none(TheoryId::GraphStar), none(TheoryId::FDFStar), 0,
               [](const Model& m) { return erase_orientation(m, TheoryId::GraphStar); }});
  r.push_back({InterpretationId::CE_Graph, "CE_Graph", none(TheoryId::Graph), none(TheoryId::GraphStar), 0,
               strip_colors});
  r.push_back({InterpretationId::CE_FDF, "CE_FDF", none(TheoryId::FDF), none(TheoryId::FDFStar), 0,
               strip_colors});
  r.push_back({InterpretationId::C, "C", none(TheoryId::GraphStar), FlagType(edge_model()), 2,
               [](const Model& m) { return color_rule(m, TheoryId::GraphStar); }});
  r.push_back({InterpretationId::OC, "OC", none(TheoryId::FDFStar), FlagType(arc_model()), 2,
               [](const Model& m) { return color_rule(m, TheoryId::FDFStar); }});
  r.push_back({InterpretationId::OE_A, "OE_A", FlagType(edge_model()), FlagType(arc_model()), 0,
               [](const Model& m) { return erase_orientation(m, TheoryId::Graph); }});
  return r;
}

const std::vector<Interpretation>& registry() {
  static const std::vector<Interpretation> r = build();
  return r;
}

std::string fold(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '_' || c == '-') continue;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

}  // namespace

const Interpretation& interpretation(InterpretationId id) { return registry()[static_cast<std::size_t>(id)]; }

const Interpretation& interpretation(std::string_view name) {
  for (const auto& i : registry()) {
    if (fold(i.name) == fold(name)) return i;
  }
  throw SchemaError("unknown interpretation '" + std::string(name) + "'");
}

const std::vector<InterpretationId>& all_interpretations() {
  static const std::vector<InterpretationId> ids = {
      InterpretationId::FDF,    InterpretationId::OE,     InterpretationId::OEStar, InterpretationId::CE_Graph,
      InterpretationId::CE_FDF, InterpretationId::C,      InterpretationId::OC,     InterpretationId::OE_A};
  return ids;
}

FlagType edge_type() { return interpretation(InterpretationId::C).target_type; }
FlagType arc_type() { return interpretation(InterpretationId::OC).target_type; }

Model interpret_model(const Interpretation& interp, const Model& target) {
  const FlagType& tt = interp.target_type;
  if (target.theory() != tt.theory()) {
    throw InvalidModelError(interp.name + " expects a " + std::string(theory(tt.theory()).display) + " structure");
  }
  target.check_structure();
  if (!target.satisfies_axioms()) throw InvalidModelError("structure violates the target theory axioms");
  const int k = tt.size();
  if (target.size() < k) throw InvalidModelError("structure is smaller than the target type");
  std::vector<int> prefix;
  for (int i = 0; i < k; ++i) prefix.push_back(i);
  if (!(encode(target, prefix, k) == tt.code())) {
    throw InvalidModelError("labelled vertices do not induce the target type of " + interp.name);
  }
  return interp.rule(target);
}

AlgebraElement pi(const Interpretation& interp, const AlgebraElement& a) {
  if (!(a.type() == interp.source_type)) {
    throw FlagTypeError("element type does not match the source of " + interp.name);
  }
  AlgebraElement out(interp.target_type, a.level() + interp.shift);
  const FlagBasis& target = out.basis();
  parallel_for(target.size(), [&](std::size_t i) {
    const Model src = interp.rule(target.flag(i));
    const auto idx = a.basis().index_of(src);
    if (!idx) throw Error("interpretation " + interp.name + " produced a structure outside its source theory");
    out[i] = a[*idx];
  });
  return out;
}

AlgebraElement pi(InterpretationId id, const AlgebraElement& a) { return pi(interpretation(id), a); }

DiagramReport verify_commutative_diagram(int level) {
  return verify_commutative_diagram(level, interpretation(InterpretationId::C), interpretation(InterpretationId::OC));
}

DiagramReport verify_commutative_diagram(int level, const Interpretation& c, const Interpretation& oc) {
  DiagramReport report;
  report.level = level;
  if (level < 2 || level > kMaxCanonicalSize) throw SizeLimitError("diagram level out of range");
  const auto basis = FlagBasis::get(FlagType::empty(TheoryId::GraphStar), level - 2);
  const Interpretation& oe_a = interpretation(InterpretationId::OE_A);
  const Interpretation& oe_star = interpretation(InterpretationId::OEStar);
  for (std::size_t i = 0; i < basis->size(); ++i) {
    AlgebraElement b(basis);
    b[i] = 1;
    const AlgebraElement left = pi(oe_a, pi(c, b));
    const AlgebraElement right = pi(oc, pi(oe_star, b));
    ++report.checked;
    if (!(left == right)) {
      report.passed = false;
      report.witness = basis->flag(i);
      for (std::size_t j = 0; j < left.size(); ++j) {
        if (left[j] != right[j]) {
          report.detail = "A-flag " + std::to_string(j) + ": " + to_string(left[j]) + " vs " + to_string(right[j]);
          break;
        }
      }
      return report;
    }
  }
  return report;
}

}  // namespace tflag
