// Brute-force reference implementations used to cross-check the library.
// Nothing here calls canonical_form or the flag bases.
#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "tflag/rational.hpp"
#include "tflag/theory.hpp"

namespace oracle {

using tflag::Model;

inline bool same_relations(const Model& a, const Model& b, const std::vector<int>& p) {
  const int n = a.size();
  for (int u = 0; u < n; ++u) {
    if (a.color(u) != b.color(p[u])) return false;
    for (int v = 0; v < n; ++v) {
      if (a.theory() == tflag::TheoryId::Turan || a.theory() == tflag::TheoryId::TuranStar) {
        for (int w = 0; w < n; ++w)
          if (a.triple(u, v, w) != b.triple(p[u], p[v], p[w])) return false;
      } else if (a.edge(u, v) != b.edge(p[u], p[v])) {
        return false;
      }
    }
  }
  return true;
}

/// Isomorphism fixing vertices 0..fixed-1, by trying every permutation.
inline bool isomorphic(const Model& a, const Model& b, int fixed = 0) {
  if (a.size() != b.size() || a.theory() != b.theory()) return false;
  std::vector<int> p(static_cast<std::size_t>(a.size()));
  std::iota(p.begin(), p.end(), 0);
  do {
    if (same_relations(a, b, p)) return true;
  } while (std::next_permutation(p.begin() + fixed, p.end()));
  return false;
}

inline int automorphisms(const Model& a) {
  std::vector<int> p(static_cast<std::size_t>(a.size()));
  std::iota(p.begin(), p.end(), 0);
  int count = 0;
  do {
    if (same_relations(a, a, p)) ++count;
  } while (std::next_permutation(p.begin(), p.end()));
  return count;
}

/// Induced substructure without going through the library's helper.
inline Model sub(const Model& g, const std::vector<int>& verts) {
  Model out(g.theory(), static_cast<int>(verts.size()));
  const int k = static_cast<int>(verts.size());
  for (int i = 0; i < k; ++i) {
    if (g.colored()) out.set_color(i, g.color(verts[i]));
    for (int j = 0; j < k; ++j) {
      if (i != j && g.theory() != tflag::TheoryId::Turan && g.theory() != tflag::TheoryId::TuranStar &&
          g.edge(verts[i], verts[j]) && !out.edge(i, j)) {
        out.add_edge(i, j);
      }
    }
  }
  if (g.theory() == tflag::TheoryId::Turan || g.theory() == tflag::TheoryId::TuranStar) {
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        for (int l = j + 1; l < k; ++l)
          if (g.triple(verts[i], verts[j], verts[l])) out.add_triple(i, j, l);
  }
  return out;
}

/// p(F; G) with labelled prefixes of length k, by subset enumeration.
inline tflag::Rational density(const Model& f, const Model& g, int k) {
  const int want = f.size() - k;
  std::vector<int> pool;
  for (int v = k; v < g.size(); ++v) pool.push_back(v);
  std::vector<bool> mask(pool.size(), false);
  std::fill(mask.begin(), mask.begin() + want, true);
  long hits = 0, total = 0;
  do {
    std::vector<int> verts;
    for (int i = 0; i < k; ++i) verts.push_back(i);
    for (std::size_t i = 0; i < pool.size(); ++i)
      if (mask[i]) verts.push_back(pool[i]);
    ++total;
    if (isomorphic(sub(g, verts), f, k)) ++hits;
  } while (std::prev_permutation(mask.begin(), mask.end()));
  tflag::Rational r(hits, total);
  r.canonicalize();
  return r;
}

inline Model random_graph(std::mt19937_64& rng, int n, double p = 0.5) {
  std::bernoulli_distribution coin(p);
  Model g(tflag::TheoryId::Graph, n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (coin(rng)) g.add_edge(u, v);
  return g;
}

inline Model random_colored_graph(std::mt19937_64& rng, int n) {
  Model g(tflag::TheoryId::GraphStar, n);
  std::uniform_int_distribution<int> col(0, 2);
  std::bernoulli_distribution coin(0.5);
  for (int u = 0; u < n; ++u) {
    g.set_color(u, col(rng));
    for (int v = u + 1; v < n; ++v)
      if (coin(rng)) g.add_edge(u, v);
  }
  return g;
}

/// Random orgraph: each pair is absent, forward or backward with equal odds.
inline Model random_orgraph(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> state(0, 2);
  Model g(tflag::TheoryId::FDF, n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      const int s = state(rng);
      if (s == 1) g.add_edge(u, v);
      if (s == 2) g.add_edge(v, u);
    }
  return g;
}

/// Random acyclic orgraph (arcs point to the larger index), hence C4-free.
inline Model random_acyclic_orgraph(std::mt19937_64& rng, int n, double p = 0.5) {
  std::bernoulli_distribution coin(p);
  Model g(tflag::TheoryId::FDF, n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (coin(rng)) g.add_edge(u, v);
  return g;
}

}  // namespace oracle
