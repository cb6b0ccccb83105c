#include "doctest.h"

#include <random>

#include "oracle.hpp"
#include "tflag/errors.hpp"
#include "tflag/interpretations.hpp"

using namespace tflag;

namespace {

AlgebraElement model_element(const Model& m) { return AlgebraElement::of_model(m); }

AlgebraElement random_element(std::mt19937_64& rng, const FlagType& type, int level) {
  AlgebraElement a(type, level);
  std::uniform_int_distribution<int> c(-4, 4);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = Rational(c(rng)) / 3;
  return a;
}

}  // namespace

TEST_CASE("interpret_model examples") {
  Model arc(TheoryId::FDF, 2);
  arc.add_edge(0, 1);
  const Model rho = interpret_model(interpretation(InterpretationId::OE), arc);
  CHECK(rho.theory() == TheoryId::Graph);
  CHECK(rho.edge(0, 1));

  const auto& fdf = interpretation(InterpretationId::FDF);
  CHECK(interpret_model(fdf, named::orgraph_out_star()).triple(0, 1, 2));
  CHECK(interpret_model(fdf, named::orgraph_i3()).triple(0, 1, 2));
  CHECK(interpret_model(fdf, named::orgraph_p3bar()).triple(0, 1, 2));
  CHECK(interpret_model(fdf, named::orgraph_transitive()).triple(0, 1, 2));
  CHECK_FALSE(interpret_model(fdf, named::orgraph_cycle()).triple(0, 1, 2));
  CHECK_FALSE(interpret_model(fdf, named::orgraph_in_star()).triple(0, 1, 2));
  CHECK_FALSE(interpret_model(fdf, named::orgraph_path()).triple(0, 1, 2));
  CHECK_THROWS_AS(interpret_model(fdf, named::directed_cycle(4)), InvalidModelError);
}

TEST_CASE("colour introduction") {
  // c1 = 0, c2 = 1; vertex 2 adjacent to c2 only, 3 to c1 only, 4 to both, 5 to none
  Model f(TheoryId::Graph, 6);
  f.add_edge(0, 1);
  f.add_edge(1, 2);
  f.add_edge(0, 3);
  f.add_edge(0, 4);
  f.add_edge(1, 4);
  f.add_edge(2, 3);
  const Model m = interpret_model(interpretation(InterpretationId::C), f);
  REQUIRE(m.size() == 4);
  CHECK(m.color(0) == 1);
  CHECK(m.color(1) == 2);
  CHECK(m.color(2) == 0);
  CHECK(m.color(3) == 0);
  CHECK(m.edge(0, 1));
  CHECK(m.relation_count() == 1);
  Model not_edge(TheoryId::Graph, 3);
  CHECK_THROWS_AS(interpret_model(interpretation(InterpretationId::C), not_edge), InvalidModelError);
}

TEST_CASE("pi of named elements") {
  const Model rho3 = named::empty_3graph(3);
  Model t(TheoryId::Turan, 3);
  t.add_triple(0, 1, 2);
  const auto image = pi(InterpretationId::FDF, model_element(t));
  const auto expected = model_element(named::orgraph_i3()) + model_element(named::orgraph_p3bar()) +
                        model_element(named::orgraph_out_star()) + model_element(named::orgraph_transitive());
  CHECK(image == expected);
  CHECK(pi(InterpretationId::FDF, model_element(rho3)) ==
        model_element(named::orgraph_in_star()) + model_element(named::orgraph_path()) +
            model_element(named::orgraph_cycle()));

  Model arc(TheoryId::FDF, 2);
  arc.add_edge(0, 1);
  Model edge(TheoryId::Graph, 2);
  edge.add_edge(0, 1);
  CHECK(pi(InterpretationId::OE, model_element(edge)) == model_element(arc));

  // all colourings of an edge: three monochromatic and three bichromatic classes
  const auto ce = pi(InterpretationId::CE_Graph, model_element(edge));
  int ones = 0;
  for (std::size_t i = 0; i < ce.size(); ++i) {
    const Model& m = ce.basis().flag(i);
    CHECK(ce[i] == (m.edge(0, 1) ? 1 : 0));
    ones += m.edge(0, 1) ? 1 : 0;
  }
  CHECK(ones == 6);
  CHECK_THROWS_AS(pi(InterpretationId::FDF, model_element(edge)), FlagTypeError);
}

TEST_CASE("interpretations are algebra homomorphisms") {
  std::mt19937_64 rng(17);
  for (InterpretationId id : all_interpretations()) {
    const auto& I = interpretation(id);
    const int k = I.source_type.size();
    for (int trial = 0; trial < 7; ++trial) {
      const int la = k + 1 + trial % 2;
      const int lb = k + 1;
      if (la + lb - k + I.shift > 6) continue;
      const auto a = random_element(rng, I.source_type, la);
      const auto b = random_element(rng, I.source_type, lb);
      CHECK(pi(I, a * b) == pi(I, a) * pi(I, b));
      CHECK(pi(I, a + b) == pi(I, a) + pi(I, b));
    }
  }
}

TEST_CASE("FDF hypergraphs of C4-free orgraphs are Turan") {
  const auto& fdf = interpretation(InterpretationId::FDF);
  const Model i34 = named::empty_3graph(4);
  for (int n = 4; n <= 6; ++n) {
    for (const Model& g : enumerate_models(TheoryId::FDF, n)) {
      CHECK_FALSE(contains_induced(interpret_model(fdf, g), i34));
    }
  }
}

TEST_CASE("colour erasure conserves evaluations") {
  std::mt19937_64 rng(23);
  const auto a = random_element(rng, FlagType::empty(TheoryId::Graph), 3);
  const auto ca = pi(InterpretationId::CE_Graph, a);
  for (int trial = 0; trial < 10; ++trial) {
    const Model g = oracle::random_colored_graph(rng, 7);
    CHECK(evaluate(ca, g) == evaluate(a, strip_colors(g)));
  }
}

TEST_CASE("commutative diagram") {
  for (int level : {2, 3, 4}) {
    const auto report = verify_commutative_diagram(level);
    CHECK(report.passed);
    CHECK(report.checked > 0);
  }
  Interpretation broken = interpretation(InterpretationId::C);
  broken.rule = [](const Model& f) {
    Model m = interpretation(InterpretationId::C).rule(f);
    for (int v = 0; v < m.size(); ++v) {
      if (m.color(v) != 0) m.set_color(v, 3 - m.color(v));
    }
    return m;
  };
  const auto report = verify_commutative_diagram(3, broken, interpretation(InterpretationId::OC));
  CHECK_FALSE(report.passed);
  CHECK(report.witness.has_value());
}
