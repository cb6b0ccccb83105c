#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "tflag/rational.hpp"
#include "tflag/theory.hpp"

namespace tflag {

/// A fully labelled model; label i is vertex i of `base`.
class FlagType {
 public:
  FlagType() = default;
  /// Throws InvalidModelError if `base` violates its theory's axioms.
  explicit FlagType(Model base);

  static FlagType empty(TheoryId theory) { return FlagType(Model(theory, 0)); }

  const Model& base() const { return base_; }
  int size() const { return base_.size(); }
  TheoryId theory() const { return base_.theory(); }
  /// Identity encoding; two types are equal iff their codes and theories are.
  const Code& code() const { return code_; }

  friend bool operator==(const FlagType& a, const FlagType& b) {
    return a.theory() == b.theory() && a.code_ == b.code_;
  }

 private:
  Model base_;
  Code code_{};
};

/// A flag in canonical form: vertices 0..k-1 carry labels 1..k in order and
/// induce the type; the remaining vertices are unlabelled.
class Flag {
 public:
  Flag() = default;
  /// `theta[i]` is the vertex of `model` carrying label i+1. Throws
  /// FlagTypeError if the labelled vertices do not induce `type`.
  Flag(const Model& model, std::span<const int> theta, const FlagType& type);
  /// Labels on the prefix 0..k-1 of `model`.
  Flag(const Model& model, const FlagType& type);

  const Model& model() const { return model_; }
  const FlagType& type() const { return type_; }
  int size() const { return model_.size(); }
  const Code& code() const { return code_; }

  friend bool operator==(const Flag& a, const Flag& b) {
    return a.type_ == b.type_ && a.code_ == b.code_;
  }

 private:
  Model model_;
  FlagType type_;
  Code code_{};
};

/// Canonical flags of one (type, level), in increasing code order. Instances
/// are shared and cached process-wide.
class FlagBasis {
 public:
  static std::shared_ptr<const FlagBasis> get(const FlagType& type, int level);

  const FlagType& type() const { return type_; }
  int level() const { return level_; }
  std::size_t size() const { return flags_.size(); }
  const Model& flag(std::size_t i) const { return flags_[i]; }
  const Code& code(std::size_t i) const { return codes_[i]; }

  /// Index of a canonical code, if it belongs to the basis.
  std::optional<std::size_t> find(const Code& canonical) const;
  /// Index of the flag with labels on the prefix of `m`.
  std::optional<std::size_t> index_of(const Model& m) const;

  FlagBasis(const FlagType& type, int level);

 private:
  FlagType type_;
  int level_ = 0;
  std::vector<Model> flags_;
  std::vector<Code> codes_;
  std::unordered_map<Code, std::size_t, CodeHash> index_;
};

/// Rational combination of the flags of one basis.
class AlgebraElement {
 public:
  AlgebraElement() = default;
  AlgebraElement(const FlagType& type, int level);
  explicit AlgebraElement(std::shared_ptr<const FlagBasis> basis);

  /// The unit of the algebra at level |type|, scaled.
  static AlgebraElement constant(const FlagType& type, const Rational& value);
  /// Indicator of a single flag (labels on the prefix of `m`).
  static AlgebraElement of_flag(const Model& m, const FlagType& type);
  /// Indicator of an unlabelled model.
  static AlgebraElement of_model(const Model& m);

  const FlagBasis& basis() const { return *basis_; }
  const std::shared_ptr<const FlagBasis>& basis_ptr() const { return basis_; }
  const FlagType& type() const { return basis_->type(); }
  TheoryId theory() const { return basis_->type().theory(); }
  int level() const { return basis_->level(); }
  std::size_t size() const { return coeffs_.size(); }

  const Rational& operator[](std::size_t i) const { return coeffs_[i]; }
  Rational& operator[](std::size_t i) { return coeffs_[i]; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  bool is_zero() const;

  AlgebraElement& operator+=(const AlgebraElement& other);
  AlgebraElement& operator-=(const AlgebraElement& other);
  AlgebraElement& operator*=(const Rational& s);

  friend bool operator==(const AlgebraElement& a, const AlgebraElement& b);

 private:
  std::shared_ptr<const FlagBasis> basis_;
  std::vector<Rational> coeffs_;
};

/// Re-expresses `a` at a higher level by the chain rule of densities.
AlgebraElement lift(const AlgebraElement& a, int level);

/// Sum and difference lift both operands to the larger level first.
AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement operator-(const AlgebraElement& a);
AlgebraElement operator*(const Rational& s, const AlgebraElement& a);
/// a + s·1 and friends.
AlgebraElement operator+(const AlgebraElement& a, const Rational& s);
AlgebraElement operator-(const AlgebraElement& a, const Rational& s);
AlgebraElement operator-(const Rational& s, const AlgebraElement& a);

/// Flag-algebra product; the result lives at level a.level + b.level - |type|.
AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);

/// Averaging operator. `keep` lists the labels (0-based) that stay labelled,
/// in their new order; all other labels are erased. Empty `keep` unlabels
/// fully.
AlgebraElement average(const AlgebraElement& a, std::span<const int> keep = {});

/// Probability that a uniformly random choice of |f| - k free vertices of g,
/// together with g's labels, induces f.
Rational flag_density(const Flag& f, const Flag& g);

/// Σ coeff(F)·p(F; g), where the labelled vertices of g are its prefix
/// 0..|type|-1. Throws EvaluationError when g is too small or does not
/// carry the type.
Rational evaluate(const AlgebraElement& a, const Model& g);

/// Basis flag counts in g: counts[i] is the number of free-vertex subsets of
/// g inducing flag i; `total` receives the number of subsets.
std::vector<std::uint64_t> flag_counts(const FlagBasis& basis, const Model& g, mpz_class& total);

}  // namespace tflag
