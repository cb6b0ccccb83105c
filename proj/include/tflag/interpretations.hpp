#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tflag/flags.hpp"

namespace tflag {

enum class InterpretationId { FDF, OE, OEStar, CE_Graph, CE_FDF, C, OC, OE_A };

/// A total interpretation I: T_source ~> T_target.
///
/// `rule` turns a target-side flag (labels on its prefix, of `target_type`)
/// into the source-side flag it defines. For C and OC the two labelled
/// vertices c1, c2 only steer the colouring and are not part of the result,
/// so `shift` = 2: a level-n source element maps to level n + 2.
struct Interpretation {
  InterpretationId id;
  std::string name;
  FlagType source_type;
  FlagType target_type;
  int shift = 0;
  std::function<Model(const Model&)> rule;
};

const Interpretation& interpretation(InterpretationId id);
/// Case-insensitive lookup of the names above ("fdf", "oe", "c", ...).
const Interpretation& interpretation(std::string_view name);
const std::vector<InterpretationId>& all_interpretations();

/// The type E (graph edge) and A (arc 1 -> 2).
FlagType edge_type();
FlagType arc_type();

/// Source structure defined by a target model or flag. Throws
/// InvalidModelError if `target` violates the target theory or does not
/// carry the target type on its prefix.
Model interpret_model(const Interpretation& interp, const Model& target);

/// The induced linear map pi^I on algebra elements.
AlgebraElement pi(const Interpretation& interp, const AlgebraElement& a);
AlgebraElement pi(InterpretationId id, const AlgebraElement& a);

struct DiagramReport {
  int level = 0;            // size of the A-flags compared
  std::size_t checked = 0;  // source basis elements
  bool passed = true;
  /// First discrepancy: source model, then the two images.
  std::optional<Model> witness;
  std::string detail;
};

/// Checks pi^{OE_A} o pi^C = pi^{OC} o pi^{OEStar} on every basis element of
/// A[GraphStar] at level - 2, i.e. on A-flags of size `level`. The two
/// colour-introducing rules may be replaced for mutation tests.
DiagramReport verify_commutative_diagram(int level);
DiagramReport verify_commutative_diagram(int level, const Interpretation& c, const Interpretation& oc);

}  // namespace tflag
