#include "doctest.h"

#include <random>

#include "oracle.hpp"
#include "tflag/errors.hpp"
#include "tflag/flags.hpp"

using namespace tflag;

namespace {

Model graph(int n, std::initializer_list<std::pair<int, int>> edges) {
  Model m(TheoryId::Graph, n);
  for (auto [u, v] : edges) m.add_edge(u, v);
  return m;
}

Model orgraph(int n, std::initializer_list<std::pair<int, int>> arcs) {
  Model m(TheoryId::FDF, n);
  for (auto [u, v] : arcs) m.add_edge(u, v);
  return m;
}

const Rational& coeff(const AlgebraElement& a, const Model& m) {
  auto idx = a.basis().index_of(m);
  REQUIRE(idx.has_value());
  return a[*idx];
}

}  // namespace

TEST_CASE("lift of the edge to level 3") {
  const auto rho = AlgebraElement::of_model(graph(2, {{0, 1}}));
  const auto l = lift(rho, 3);
  CHECK(coeff(l, graph(3, {})) == 0);
  CHECK(coeff(l, graph(3, {{0, 1}})) == Rational(1, 3));
  CHECK(coeff(l, graph(3, {{0, 1}, {1, 2}})) == Rational(2, 3));
  CHECK(coeff(l, named::complete_graph(3)) == 1);
  CHECK(lift(rho, 2) == rho);
}

TEST_CASE("lift of the unit is the sum of all basis flags") {
  const auto one = AlgebraElement::constant(FlagType::empty(TheoryId::FDF), 1);
  const auto l = lift(one, 4);
  CHECK(l.size() == 41);
  for (std::size_t i = 0; i < l.size(); ++i) CHECK(l[i] == 1);
}

TEST_CASE("flag densities") {
  const FlagType one(Model(TheoryId::Graph, 1));
  const Flag e(graph(2, {{0, 1}}), one);
  const Flag k3(named::complete_graph(3), one);
  CHECK(flag_density(e, k3) == 1);
  CHECK(flag_density(e, e) == 1);
  const FlagType none = FlagType::empty(TheoryId::Graph);
  CHECK(flag_density(Flag(graph(2, {{0, 1}}), none), Flag(named::graph_path(3), none)) == Rational(2, 3));
  const FlagType fdf_one(Model(TheoryId::FDF, 1));
  CHECK_THROWS_AS(flag_density(e, Flag(orgraph(2, {{0, 1}}), fdf_one)), FlagTypeError);
}

TEST_CASE("labelled flags are checked against their type") {
  const FlagType edge_type(graph(2, {{0, 1}}));
  const std::vector<int> theta{0, 2};
  CHECK_THROWS_AS(Flag(graph(3, {{0, 1}}), theta, edge_type), FlagTypeError);
  const Flag ok(graph(3, {{0, 2}}), theta, edge_type);
  CHECK(ok.model().edge(0, 1));
}

TEST_CASE("alpha squared") {
  const FlagType one(Model(TheoryId::FDF, 1));
  const auto alpha = AlgebraElement::of_flag(orgraph(2, {{0, 1}}), one);
  const auto sq = alpha * alpha;
  CHECK(sq.level() == 3);
  for (std::size_t i = 0; i < sq.size(); ++i) {
    const Model& f = sq.basis().flag(i);
    const bool out2 = f.edge(0, 1) && f.edge(0, 2);
    CHECK(sq[i] == (out2 ? 1 : 0));
  }
}

TEST_CASE("averaging of delta_alpha") {
  const FlagType one(Model(TheoryId::FDF, 1));
  const auto alpha = AlgebraElement::of_flag(orgraph(2, {{0, 1}}), one);
  const auto delta_alpha = Rational(1, 3) - alpha;
  const auto rho = AlgebraElement::of_model(orgraph(2, {{0, 1}}));
  const auto delta_rho = Rational(2, 3) - rho;
  CHECK(average(delta_alpha) == Rational(1, 2) * delta_rho);
}

TEST_CASE("main expression expands exactly") {
  const FlagType one(Model(TheoryId::FDF, 1));
  const auto alpha = AlgebraElement::of_flag(orgraph(2, {{0, 1}}), one);
  const auto delta_alpha = Rational(1, 3) - alpha;
  const auto rho = AlgebraElement::of_model(orgraph(2, {{0, 1}}));
  const auto m = [](const Model& x) { return AlgebraElement::of_model(x); };
  const auto rho3 = m(named::orgraph_i3()) + m(named::orgraph_p3bar()) + m(named::orgraph_out_star()) +
                    m(named::orgraph_transitive());
  const auto k3 = m(named::orgraph_transitive()) + m(named::orgraph_cycle());
  const auto delta = Rational(4, 9) - rho3;
  const auto rhs = Rational(1, 2) * ((Rational(2, 9) - k3) - (Rational(2, 3) - rho) - m(named::orgraph_p3bar())) -
                   Rational(3) * average(delta_alpha * delta_alpha);
  CHECK(delta == rhs);
}

TEST_CASE("F1 F2 product in a coloured two-vertex type") {
  Model base(TheoryId::FDFStar, 2);
  base.set_color(0, 1);
  base.set_color(1, 2);
  const FlagType sigma(base);
  auto flag_with = [&](int color, int from) {
    Model m(TheoryId::FDFStar, 3);
    m.set_color(0, 1);
    m.set_color(1, 2);
    m.set_color(2, color);
    m.add_edge(from, 2);
    return m;
  };
  const auto f1 = AlgebraElement::of_flag(flag_with(1, 1), sigma);
  const auto f2 = AlgebraElement::of_flag(flag_with(2, 0), sigma);
  auto g = [&](int variant) {
    Model m(TheoryId::FDFStar, 4);
    m.set_color(0, 1);
    m.set_color(1, 2);
    m.set_color(2, 1);  // v1
    m.set_color(3, 2);  // v2
    m.add_edge(1, 2);
    m.add_edge(0, 3);
    if (variant == 1) m.add_edge(3, 2);
    if (variant == 2) m.add_edge(2, 3);
    return AlgebraElement::of_flag(m, sigma);
  };
  CHECK(f1 * f2 == Rational(1, 2) * (g(0) + g(1) + g(2)));
}

TEST_CASE("densities of one level sum to one") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const Model g = oracle::random_graph(rng, 6);
    for (int n = 0; n <= 4; ++n) {
      const auto one = lift(AlgebraElement::constant(FlagType::empty(TheoryId::Graph), 1), n);
      Rational total = 0;
      for (std::size_t i = 0; i < one.size(); ++i) {
        const Rational d = oracle::density(one.basis().flag(i), g, 0);
        CHECK(evaluate(AlgebraElement::of_model(one.basis().flag(i)), g) == d);
        total += d;
      }
      CHECK(total == 1);
    }
  }
}

TEST_CASE("lift keeps evaluations") {
  std::mt19937_64 rng(5);
  const FlagType none = FlagType::empty(TheoryId::GraphStar);
  for (int trial = 0; trial < 4; ++trial) {
    AlgebraElement a(none, 3);
    std::uniform_int_distribution<int> c(-5, 5);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = Rational(c(rng)) / 7;
    const Model g = oracle::random_colored_graph(rng, 7);
    const Rational base = evaluate(a, g);
    CHECK(evaluate(lift(a, 4), g) == base);
    CHECK(evaluate(lift(a, 5), g) == base);
  }
}

TEST_CASE("product is close to the product of evaluations") {
  std::mt19937_64 rng(3);
  const FlagType one(Model(TheoryId::FDF, 1));
  const auto alpha = AlgebraElement::of_flag(orgraph(2, {{0, 1}}), one);
  const auto delta_alpha = Rational(1, 3) - alpha;
  const auto rho = AlgebraElement::of_model(orgraph(2, {{0, 1}}));
  for (int trial = 0; trial < 3; ++trial) {
    Model g = oracle::random_acyclic_orgraph(rng, 60);
    const Rational slack(5, 60);
    auto close = [&](const AlgebraElement& a, const AlgebraElement& b) {
      Rational diff = evaluate(a * b, g) - evaluate(a, g) * evaluate(b, g);
      return abs(diff) <= slack;
    };
    CHECK(close(rho, rho));
    CHECK(close(alpha, alpha));
    CHECK(close(delta_alpha, delta_alpha));
  }
}

TEST_CASE("averaging agrees with brute-force labelling") {
  const FlagType edge_type(graph(2, {{0, 1}}));
  const FlagType one(Model(TheoryId::Graph, 1));
  const auto five = enumerate_models(TheoryId::Graph, 5);
  for (const FlagType* sigma : {&one, &edge_type}) {
    const auto basis = FlagBasis::get(*sigma, 3);
    const int k = sigma->size();
    for (std::size_t fi = 0; fi < basis->size(); ++fi) {
      AlgebraElement f(basis);
      f[fi] = 1;
      const auto avg = average(f);
      for (const Model& g : five) {
        // average over injective labelings theta of p(F; (G, theta))
        Rational sum = 0;
        long labelings = 0;
        for (int a = 0; a < 5; ++a) {
          for (int b = 0; b < 5; ++b) {
            if (k == 1 && b > 0) break;
            if (k == 2 && a == b) continue;
            ++labelings;
            std::vector<int> order{a};
            if (k == 2) order.push_back(b);
            for (int v = 0; v < 5; ++v)
              if (std::find(order.begin(), order.end(), v) == order.end()) order.push_back(v);
            const Model lg = oracle::sub(g, order);
            if (k == 2 && !lg.edge(0, 1)) continue;
            sum += oracle::density(basis->flag(fi), lg, k);
          }
        }
        CHECK(evaluate(avg, g) == sum / labelings);
      }
    }
  }
}

TEST_CASE("partial averaging keeps the chosen labels") {
  const FlagType edge_type(graph(2, {{0, 1}}));
  const FlagType one(Model(TheoryId::Graph, 1));
  const auto triangle = AlgebraElement::of_flag(named::complete_graph(3), edge_type);
  const std::vector<int> keep{0};
  const auto avg = average(triangle, keep);
  CHECK(avg.type() == one);
  // root of K3 with one more labelled neighbour among two free vertices
  CHECK(coeff(avg, named::complete_graph(3)) == 1);
  const std::vector<int> bad{0, 0};
  CHECK_THROWS_AS(average(triangle, bad), FlagTypeError);
}

TEST_CASE("evaluate rejects small or mistyped models") {
  const auto k3 = AlgebraElement::of_model(named::complete_graph(3));
  CHECK_THROWS_AS(evaluate(k3, graph(2, {{0, 1}})), EvaluationError);
  CHECK(evaluate(AlgebraElement::of_model(graph(2, {{0, 1}})),
                 graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}})) == Rational(1, 2));
  const FlagType edge_type(graph(2, {{0, 1}}));
  const auto e = AlgebraElement::of_flag(named::complete_graph(3), edge_type);
  CHECK_THROWS_AS(evaluate(e, graph(3, {{1, 2}})), EvaluationError);
}

TEST_CASE("flag bases respect level bounds") {
  CHECK_THROWS_AS(FlagBasis::get(FlagType::empty(TheoryId::Graph), 9), SizeLimitError);
  const FlagType edge_type(graph(2, {{0, 1}}));
  const FlagType non_edge(graph(2, {}));
  CHECK(FlagBasis::get(edge_type, 3)->size() == 4);
  CHECK(FlagBasis::get(non_edge, 3)->size() == 4);
}
