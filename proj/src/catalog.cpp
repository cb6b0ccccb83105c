#include "tflag/catalog.hpp"

#include <functional>
#include <map>

#include "tflag/errors.hpp"
#include "tflag/interpretations.hpp"

namespace tflag::elements {

namespace {

Model graph(int n, std::initializer_list<std::pair<int, int>> edges) {
  Model m(TheoryId::Graph, n);
  for (auto [u, v] : edges) m.add_edge(u, v);
  return m;
}

Model colored(int n, std::initializer_list<int> colors, std::initializer_list<std::pair<int, int>> edges) {
  Model m(TheoryId::GraphStar, n);
  int v = 0;
  for (int c : colors) m.set_color(v++, c);
  for (auto [a, b] : edges) m.add_edge(a, b);
  return m;
}

AlgebraElement of(const Model& m) { return AlgebraElement::of_model(m); }

AlgebraElement graph_constant(const Rational& x) {
  return AlgebraElement::constant(FlagType::empty(TheoryId::Graph), x);
}

}  // namespace

AlgebraElement rho() { return of(graph(2, {{0, 1}})); }
AlgebraElement nu() { return of(graph(2, {})); }
AlgebraElement K3() { return of(named::complete_graph(3)); }
AlgebraElement P3() { return of(named::graph_path(3)); }
AlgebraElement P3bar() { return of(graph(3, {{0, 1}})); }
AlgebraElement I3() { return of(graph(3, {})); }
AlgebraElement delta_rho() { return graph_constant(Rational(2, 3)) - rho(); }
AlgebraElement delta_K3() { return graph_constant(Rational(2, 9)) - K3(); }
AlgebraElement f() { return Rational(1, 2) * (delta_K3() - delta_rho() - P3bar()); }

FlagType one_type(TheoryId theory) { return FlagType(Model(theory, 1)); }
FlagType non_edge_type() { return FlagType(graph(2, {})); }

AlgebraElement e() { return AlgebraElement::of_flag(graph(2, {{0, 1}}), one_type(TheoryId::Graph)); }
AlgebraElement K3E() { return AlgebraElement::of_flag(named::complete_graph(3), edge_type()); }
AlgebraElement K4E() { return AlgebraElement::of_flag(named::complete_graph(4), edge_type()); }
AlgebraElement P3N() { return AlgebraElement::of_flag(graph(3, {{0, 2}, {1, 2}}), non_edge_type()); }
AlgebraElement I3N() { return AlgebraElement::of_flag(graph(3, {}), non_edge_type()); }

AlgebraElement f2() {
  static const AlgebraElement value = [] {
    const AlgebraElement variance = average(e() * e()) - rho() * rho();
    const AlgebraElement h = P3N() - Rational(2) * I3N();
    return Rational(4) * variance + average(h * h);
  }();
  return value;
}

AlgebraElement alpha() {
  Model arc(TheoryId::FDF, 2);
  arc.add_edge(0, 1);
  return AlgebraElement::of_flag(arc, one_type(TheoryId::FDF));
}

AlgebraElement delta_alpha() { return Rational(1, 3) - alpha(); }

AlgebraElement fdf_edge() {
  Model t(TheoryId::Turan, 3);
  t.add_triple(0, 1, 2);
  return pi(InterpretationId::FDF, of(t));
}

AlgebraElement delta() { return Rational(4, 9) - fdf_edge(); }

AlgebraElement p(int a) { return of(colored(1, {a}, {})); }
AlgebraElement rho_ab(int a, int b) { return of(colored(2, {a, b}, {{0, 1}})); }
AlgebraElement nu_ab(int a, int b) { return of(colored(2, {a, b}, {})); }

AlgebraElement kappa() {
  return rho_ab(0, 0) + rho_ab(1, 1) + rho_ab(2, 2) + nu_ab(0, 1) + nu_ab(0, 2) + nu_ab(1, 2);
}
AlgebraElement kappa_tilde() { return rho_ab(1, 1) + rho_ab(2, 2) + nu_ab(1, 2); }
AlgebraElement kappa_prime() { return nu_ab(0, 1) + nu_ab(0, 2) + nu_ab(1, 2); }
AlgebraElement delta0() { return Rational(1, 3) - p(0); }
AlgebraElement q() { return p(0) * p(1) + p(0) * p(2) + p(1) * p(2); }
AlgebraElement f1() { return Rational(4, 9) - Rational(4) * (q() * q()); }

AlgebraElement ce(const AlgebraElement& graph_element) { return pi(InterpretationId::CE_Graph, graph_element); }

AlgebraElement optimality_gap() {
  static const AlgebraElement value = ce(average(pi(InterpretationId::C, kappa()))) - kappa() * ce(rho());
  return value;
}

namespace {

using Builder = std::function<AlgebraElement()>;

const std::map<std::string, Builder>& graph_names() {
  static const std::map<std::string, Builder> names = {
      {"rho", rho},       {"nu", nu},         {"K3", K3},           {"P3", P3},
      {"P3bar", P3bar},   {"I3", I3},         {"delta_rho", delta_rho}, {"delta_K3", delta_K3},
      {"f", f},           {"f2", f2},         {"e", e},             {"K3E", K3E},
      {"K4E", K4E},       {"P3N", P3N},       {"I3N", I3N}};
  return names;
}

const std::map<std::string, Builder>& fdf_names() {
  static const std::map<std::string, Builder> names = {
      {"alpha", alpha}, {"delta_alpha", delta_alpha}, {"rho3", fdf_edge}, {"delta", delta}};
  return names;
}

std::map<std::string, Builder> star_names() {
  std::map<std::string, Builder> names = {
      {"kappa", kappa},   {"kappa_tilde", kappa_tilde}, {"kappa_prime", kappa_prime},
      {"delta0", delta0}, {"q", q},                     {"f1", f1},
      {"opt", optimality_gap}};
  for (int a = 0; a < 3; ++a) {
    names["p" + std::to_string(a)] = [a] { return p(a); };
    for (int b = a; b < 3; ++b) {
      const std::string suffix = std::to_string(a) + std::to_string(b);
      names["rho" + suffix] = [a, b] { return rho_ab(a, b); };
      names["nu" + suffix] = [a, b] { return nu_ab(a, b); };
    }
  }
  return names;
}

bool is_type0(const AlgebraElement& a) { return a.type().size() == 0; }

}  // namespace

AlgebraElement named_element(TheoryId theory, std::string_view name) {
  const std::string key(name);
  switch (theory) {
    case TheoryId::Graph:
      if (auto it = graph_names().find(key); it != graph_names().end()) return it->second();
      break;
    case TheoryId::FDF:
      if (auto it = fdf_names().find(key); it != fdf_names().end()) return it->second();
      if (auto it = graph_names().find(key); it != graph_names().end()) {
        const AlgebraElement g = it->second();
        if (is_type0(g)) return pi(InterpretationId::OE, g);
      }
      break;
    case TheoryId::GraphStar: {
      const auto star = star_names();
      if (auto it = star.find(key); it != star.end()) return it->second();
      if (auto it = graph_names().find(key); it != graph_names().end()) {
        const AlgebraElement g = it->second();
        if (is_type0(g)) return ce(g);
      }
      break;
    }
    case TheoryId::Turan:
      if (key == "rho3") {
        Model t(TheoryId::Turan, 3);
        t.add_triple(0, 1, 2);
        return of(t);
      }
      break;
    default:
      break;
  }
  throw SchemaError("no element named '" + key + "' in theory " + std::string(tflag::theory(theory).display));
}

std::vector<std::string> element_names(TheoryId theory) {
  std::vector<std::string> out;
  auto add_type0_graph = [&] {
    for (const auto& [name, build] : graph_names()) {
      if (is_type0(build())) out.push_back(name);
    }
  };
  switch (theory) {
    case TheoryId::Graph:
      for (const auto& [name, build] : graph_names()) out.push_back(name);
      break;
    case TheoryId::FDF:
      for (const auto& [name, build] : fdf_names()) out.push_back(name);
      add_type0_graph();
      break;
    case TheoryId::GraphStar:
      for (const auto& [name, build] : star_names()) out.push_back(name);
      add_type0_graph();
      break;
    case TheoryId::Turan:
      out.push_back("rho3");
      break;
    default:
      break;
  }
  return out;
}

}  // namespace tflag::elements
