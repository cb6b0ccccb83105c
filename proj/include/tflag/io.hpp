#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "json.hpp"
#include "tflag/flags.hpp"
#include "tflag/theory.hpp"

namespace tflag {

/// Line-oriented model text:
///
///     # optional comments
///     fdf 4
///     0 1
///     1 2
///     color 0 2
///
/// The header names the theory and vertex count; each further line is one
/// relation tuple (a pair, or a triple for 3-graphs) or a `color v a` line.
Model parse_model_text(std::string_view text);
std::string format_model_text(const Model& m);
Model read_model_file(const std::string& path);

/// {"theory": ..., "n": ..., "tuples": [[...]], "colors": [...]}
nlohmann::json model_to_json(const Model& m);
Model model_from_json(const nlohmann::json& j);

/// {"model": ..., "labels": [...]}; vertex i of the model carries labels[i].
nlohmann::json flag_type_to_json(const FlagType& type);
FlagType flag_type_from_json(const nlohmann::json& j);

/// {"theory", "type": {"model", "labels"}, "level", "coeffs": [[index, num, den]]}.
/// Only nonzero coefficients are written. Numerators and denominators that
/// do not fit a 64-bit integer are written as decimal strings.
nlohmann::json element_to_json(const AlgebraElement& a);
AlgebraElement element_from_json(const nlohmann::json& j);

/// Rational from a JSON number or a "p/q" string.
Rational rational_from_json(const nlohmann::json& j);

}  // namespace tflag
