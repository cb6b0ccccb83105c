#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tflag/flags.hpp"

/// Named elements used throughout the verification, built from flags and
/// interpretations. Colours are 0, 1, 2.
namespace tflag::elements {

// Graph, type 0
AlgebraElement rho();
AlgebraElement nu();
AlgebraElement K3();
AlgebraElement P3();
AlgebraElement P3bar();
AlgebraElement I3();
AlgebraElement delta_rho();  // 2/3 - rho
AlgebraElement delta_K3();   // 2/9 - K3
AlgebraElement f();          // (delta_K3 - delta_rho - P3bar) / 2
AlgebraElement f2();         // 4(<e^2>_1 - rho^2) + <(P3^N - 2 I3^N)^2>_N

// Graph, typed
AlgebraElement e();    // type 1: an edge rooted at one end
AlgebraElement K3E();  // type E: free vertex adjacent to both labels
AlgebraElement K4E();  // type E: complete graph on 4 vertices
AlgebraElement P3N();  // type N: free vertex adjacent to both labels
AlgebraElement I3N();  // type N: no edges
FlagType non_edge_type();
FlagType one_type(TheoryId theory);

// FDF
AlgebraElement alpha();        // type 1: arc with labelled tail
AlgebraElement delta_alpha();  // 1/3 - alpha
AlgebraElement fdf_edge();     // pi^FDF(rho3)
AlgebraElement delta();        // 4/9 - pi^FDF(rho3)

// GraphStar
AlgebraElement p(int a);
AlgebraElement rho_ab(int a, int b);  // edge with end colours a, b (rho_a when a = b)
AlgebraElement nu_ab(int a, int b);   // non-edge with end colours a, b
AlgebraElement kappa();        // sum_a rho_a + sum over colour pairs nu_{a,b}
AlgebraElement kappa_tilde();  // rho_1 + rho_2 + nu_{1,2}
AlgebraElement kappa_prime();  // nu_{0,1} + nu_{0,2} + nu_{1,2}
AlgebraElement delta0();       // 1/3 - p_0
AlgebraElement q();            // p0 p1 + p0 p2 + p1 p2
AlgebraElement f1();           // 4/9 (1 - 9 q^2)
/// pi^CE(<pi^C(kappa)>_E) - kappa * pi^CE(rho); nonnegative only for the
/// optimally chosen colouring, never coefficient-wise.
AlgebraElement optimality_gap();

/// Colour-erasing image of a Graph element in GraphStar.
AlgebraElement ce(const AlgebraElement& graph_element);

/// Lookup by name for the CLI. Graph names resolve in FDF through the
/// orientation-erasing map and in GraphStar through colour erasure.
AlgebraElement named_element(TheoryId theory, std::string_view name);
std::vector<std::string> element_names(TheoryId theory);

}  // namespace tflag::elements
