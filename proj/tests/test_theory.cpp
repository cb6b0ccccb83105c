#include "doctest.h"

#include <numeric>
#include <random>
#include <set>

#include "oracle.hpp"
#include "tflag/errors.hpp"
#include "tflag/theory.hpp"

using namespace tflag;

namespace {

std::vector<int> random_perm(std::mt19937_64& rng, int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

Model random_model(std::mt19937_64& rng, TheoryId theory, int n) {
  switch (theory) {
    case TheoryId::Graph:
      return oracle::random_graph(rng, n);
    case TheoryId::GraphStar:
      return oracle::random_colored_graph(rng, n);
    case TheoryId::FDF:
      return oracle::random_orgraph(rng, n);
    default: {
      Model t(TheoryId::Turan, n);
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
          for (int c = b + 1; c < n; ++c)
            if (rng() & 1) t.add_triple(a, b, c);
      return t;
    }
  }
}

bool has_independent_4set(const Model& t) {
  const int n = t.size();
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c)
        for (int d = c + 1; d < n; ++d)
          if (!t.triple(a, b, c) && !t.triple(a, b, d) && !t.triple(a, c, d) && !t.triple(b, c, d)) return true;
  return false;
}

bool has_c4_brute(const Model& g) {
  const int n = g.size();
  std::vector<int> s(4);
  for (s[0] = 0; s[0] < n; ++s[0])
    for (s[1] = 0; s[1] < n; ++s[1])
      for (s[2] = 0; s[2] < n; ++s[2])
        for (s[3] = 0; s[3] < n; ++s[3]) {
          if (std::set<int>(s.begin(), s.end()).size() != 4) continue;
          bool cycle = true;
          for (int i = 0; i < 4 && cycle; ++i) {
            cycle = g.edge(s[i], s[(i + 1) % 4]) && !g.adjacent(s[i], s[(i + 2) % 4]);
          }
          if (cycle) return true;
        }
  return false;
}

// Labelled models on n vertices satisfying the axioms, by direct enumeration.
long labelled_count(TheoryId theory, int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
  long count = 0;
  switch (theory) {
    case TheoryId::Graph:
      return 1L << pairs.size();
    case TheoryId::GraphStar: {
      long colorings = 1;
      for (int i = 0; i < n; ++i) colorings *= 3;
      return colorings << pairs.size();
    }
    case TheoryId::FDF: {
      long states = 1;
      for (std::size_t i = 0; i < pairs.size(); ++i) states *= 3;
      for (long code = 0; code < states; ++code) {
        Model g(TheoryId::FDF, n);
        long c = code;
        for (auto [u, v] : pairs) {
          if (c % 3 == 1) g.add_edge(u, v);
          if (c % 3 == 2) g.add_edge(v, u);
          c /= 3;
        }
        if (!has_c4_brute(g)) ++count;
      }
      return count;
    }
    default: {
      std::vector<std::array<int, 3>> triples;
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
          for (int c = b + 1; c < n; ++c) triples.push_back({a, b, c});
      for (long mask = 0; mask < (1L << triples.size()); ++mask) {
        Model t(TheoryId::Turan, n);
        for (std::size_t i = 0; i < triples.size(); ++i)
          if (mask >> i & 1) t.add_triple(triples[i][0], triples[i][1], triples[i][2]);
        if (!has_independent_4set(t)) ++count;
      }
      return count;
    }
  }
}

}  // namespace

TEST_CASE("model counts") {
  CHECK(enumerate_models(TheoryId::Graph, 0).size() == 1);
  CHECK(enumerate_models(TheoryId::Graph, 3).size() == 4);
  CHECK(enumerate_models(TheoryId::Graph, 4).size() == 11);
  CHECK(enumerate_models(TheoryId::FDF, 3).size() == 7);
  CHECK(enumerate_models(TheoryId::FDF, 4).size() == 41);
  CHECK(enumerate_models(TheoryId::FDF, 5).size() == 559);
  CHECK(enumerate_models(TheoryId::GraphStar, 4).size() == 357);
  CHECK(enumerate_models(TheoryId::Turan, 4).size() == 4);
  CHECK_THROWS_AS(enumerate_models(TheoryId::Graph, kMaxCanonicalSize + 1), SizeLimitError);
  CHECK_THROWS_AS(enumerate_models(TheoryId::Graph, -1), SizeLimitError);
}

TEST_CASE("enumerated models satisfy the axioms") {
  for (int n = 0; n <= 6; ++n) {
    for (const Model& g : enumerate_models(TheoryId::FDF, n)) {
      CHECK(g.satisfies_axioms());
      CHECK_FALSE(contains_induced(g, named::directed_cycle(4)));
    }
  }
  for (const Model& t : enumerate_models(TheoryId::Turan, 5)) CHECK_FALSE(has_independent_4set(t));
}

TEST_CASE("enumeration is stable") {
  CHECK(enumerate_models(TheoryId::FDF, 5) == enumerate_models(TheoryId::FDF, 5));
  CHECK(enumerate_models(TheoryId::GraphStar, 3) == enumerate_models(TheoryId::GraphStar, 3));
}

TEST_CASE("no two enumerated models are isomorphic") {
  for (TheoryId t : {TheoryId::Graph, TheoryId::FDF, TheoryId::GraphStar}) {
    const auto models = enumerate_models(t, 4);
    for (std::size_t i = 0; i < models.size(); ++i)
      for (std::size_t j = i + 1; j < models.size(); ++j) CHECK_FALSE(oracle::isomorphic(models[i], models[j]));
  }
}

TEST_CASE("canonical form is invariant under relabelling") {
  std::mt19937_64 rng(31);
  for (TheoryId theory : {TheoryId::Graph, TheoryId::FDF, TheoryId::GraphStar, TheoryId::Turan}) {
    for (int n = 1; n <= 6; ++n) {
      int mismatches = 0;
      for (int trial = 0; trial < 1000; ++trial) {
        Model g = random_model(rng, theory, n);
        if (!g.satisfies_axioms()) continue;
        const Model h = permuted(g, random_perm(rng, n));
        if (canonicalize(g).first != canonicalize(h).first) ++mismatches;
      }
      INFO(theory_name(theory) << " n=" << n);
      CHECK(mismatches == 0);
    }
  }
}

TEST_CASE("orbit counting matches labelled enumeration") {
  for (TheoryId theory : {TheoryId::Graph, TheoryId::FDF, TheoryId::GraphStar, TheoryId::Turan}) {
    const int top = theory == TheoryId::GraphStar ? 4 : 5;
    for (int n = 1; n <= top; ++n) {
      long factorial = 1;
      for (int i = 2; i <= n; ++i) factorial *= i;
      long orbits = 0;
      for (const Model& m : enumerate_models(theory, n)) {
        const auto aut = canonicalize(m).second;
        CHECK(static_cast<int>(aut) == oracle::automorphisms(m));
        orbits += factorial / static_cast<long>(aut);
      }
      INFO(theory_name(theory) << " n=" << n);
      CHECK(orbits == labelled_count(theory, n));
    }
  }
}

TEST_CASE("automorphism examples") {
  CHECK(canonicalize(named::directed_cycle(3)).second == 3);
  CHECK(canonicalize(named::empty(TheoryId::Graph, 3)).second == 6);
  Model arc(TheoryId::FDF, 2);
  arc.add_edge(0, 1);
  CHECK(canonicalize(arc).second == 1);
  CHECK_THROWS_AS(canonicalize(named::directed_cycle(4)), InvalidModelError);
  CHECK_THROWS_AS(canonicalize(named::empty(TheoryId::Graph, 9)), SizeLimitError);
}

TEST_CASE("induced substructures") {
  const Model c4(named::directed_cycle(4));
  for (int skip = 0; skip < 4; ++skip) {
    std::vector<int> keep;
    for (int v = 0; v < 4; ++v)
      if (v != skip) keep.push_back(v);
    CHECK(canonicalize(induced(c4, keep)).first == canonicalize(named::orgraph_path()).first);
  }
  std::mt19937_64 rng(3);
  const Model g = oracle::random_colored_graph(rng, 6);
  CHECK(induced(g, {0, 1, 2, 3, 4, 5}) == g);
  CHECK(induced(g, std::vector<int>{}).size() == 0);
  CHECK(induced(g, {4, 1}) == oracle::sub(g, {4, 1}));
  CHECK_THROWS_AS(induced(g, {0, 6}), IndexError);
}

TEST_CASE("contains_induced examples") {
  CHECK(contains_induced(named::directed_cycle(4), named::directed_cycle(4)));
  CHECK_FALSE(contains_induced(named::transitive_tournament(4), named::directed_cycle(4)));
  CHECK(contains_induced(named::transitive_tournament(4), named::orgraph_transitive()));
  CHECK_FALSE(contains_induced(named::complete_graph(4), named::graph_path(3)));
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const Model g = oracle::random_orgraph(rng, 6);
    CHECK(contains_induced(g, named::directed_cycle(4)) == has_c4_brute(g));
  }
}

TEST_CASE("theory names") {
  CHECK(parse_theory("graphstar") == TheoryId::GraphStar);
  CHECK(parse_theory("Graph*") == TheoryId::GraphStar);
  CHECK(parse_theory("FDF") == TheoryId::FDF);
  CHECK_THROWS(parse_theory("hypergraph"));
  CHECK(with_colors(TheoryId::FDF) == TheoryId::FDFStar);
  CHECK(uncolored(TheoryId::TuranStar) == TheoryId::Turan);
}

TEST_CASE("structural axioms") {
  Model g(TheoryId::FDF, 2);
  g.add_edge(0, 1);
  CHECK_THROWS_AS(g.add_edge(1, 0), InvalidModelError);
  CHECK_THROWS_AS(g.add_edge(0, 0), InvalidModelError);
  Model s(TheoryId::GraphStar, 1);
  CHECK_THROWS_AS(s.set_color(0, 3), InvalidModelError);
  CHECK_THROWS_AS(Model(TheoryId::Graph, 2).set_color(0, 1), InvalidModelError);
  CHECK_FALSE(named::directed_cycle(4).satisfies_axioms());
}
