#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "tflag/flags.hpp"

namespace tflag {

/// Dense square matrix of exact rationals.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  explicit RationalMatrix(int dim) : dim_(dim), entries_(static_cast<std::size_t>(dim) * dim) {}

  int dim() const { return dim_; }
  Rational& operator()(int i, int j) { return entries_[static_cast<std::size_t>(i) * dim_ + j]; }
  const Rational& operator()(int i, int j) const { return entries_[static_cast<std::size_t>(i) * dim_ + j]; }
  bool symmetric() const;

  friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

 private:
  int dim_ = 0;
  std::vector<Rational> entries_;
};

/// Whitespace-separated rows, one per line. Throws ShapeError if not square.
RationalMatrix parse_matrix_text(std::string_view text);
std::string format_matrix_text(const RationalMatrix& m);

/// Exact LDL^T with symmetric pivoting on the largest remaining diagonal.
/// Throws ShapeError for non-symmetric input.
bool is_psd_exact(const RationalMatrix& m);

/// The matrices M1..M8 (index 1..8) embedded at build time.
const RationalMatrix& builtin_matrix(int index);
/// Raw text of the embedded data file and its recorded SHA-256.
std::string builtin_matrix_text(int index);
std::string builtin_matrix_digest(int index);
std::string sha256_hex(std::string_view data);

// ---------------------------------------------------------------------------
// Identities

struct CoefficientDifference {
  std::size_t index;
  Model model;
  Rational lhs;
  Rational rhs;
};

struct IdentityReport {
  std::string name;
  std::string theory;
  int level = 0;
  std::size_t basis_size = 0;
  bool passed = false;
  std::vector<CoefficientDifference> differences;
  std::string note;
};

/// Exact equality of lhs and rhs after lifting both to the larger level.
IdentityReport verify_identity(const std::string& name, const AlgebraElement& lhs, const AlgebraElement& rhs);
/// MAIN-EXPR, K3E-ID, F1-ID, F2-EXPANSION, AVG-DELTA-ALPHA, GOODMAN-REWRITE.
IdentityReport verify_identity(std::string_view name);
const std::vector<std::string>& identity_names();

// ---------------------------------------------------------------------------
// Certificates

/// weight * <g^T M g>_type, averaged down to type 0. A term over Graph is
/// carried into GraphStar by colour erasure when the certificate is coloured.
struct SosTerm {
  std::string label;
  FlagType type;
  std::vector<AlgebraElement> basis;
  RationalMatrix matrix;
  Rational weight;
};

/// weight * element, trusted nonnegative under `assumption`.
struct Atom {
  std::string label;
  AlgebraElement element;
  Rational weight;
  std::string assumption;
};

struct Certificate {
  std::string name;
  TheoryId theory = TheoryId::GraphStar;
  int level = 0;
  AlgebraElement target;
  std::vector<SosTerm> sos_terms;
  std::vector<Atom> nonneg_atoms;  // side conditions, e.g. delta0 >= 0
  std::vector<Atom> cs_atoms;      // variance terms, Cauchy-Schwarz
  std::vector<std::string> notes;
};

struct CertificateReport {
  std::string name;
  bool passed = false;
  std::size_t basis_size = 0;
  std::vector<std::pair<std::string, bool>> psd;  // per SOS term
  bool coefficients_ok = false;
  Rational min_slack;
  std::size_t min_slack_index = 0;
  Model min_slack_model;
  std::size_t zero_slack_count = 0;
  std::size_t negative_count = 0;
  std::optional<std::size_t> first_negative;
  std::vector<std::string> assumptions;
  std::vector<std::string> notes;
};

/// Expanded SOS term as a type-0 element of `theory` at `level`.
AlgebraElement expand_sos(const SosTerm& term, TheoryId theory, int level);
/// target - sum(SOS) - sum(atoms), lifted to cert.level.
AlgebraElement certificate_residual(const Certificate& cert);
CertificateReport verify_certificate(const Certificate& cert);

/// Built-ins: CERT-F3, CERT-MAIN-INEQ, CERT-SEC42-a1, CERT-SEC42-a2.
Certificate builtin_certificate(std::string_view name);
const std::vector<std::string>& certificate_names();

/// The 12 flags of a size-2 GraphStar type in the order j = 1+4a+2e1+e2.
std::vector<AlgebraElement> j_index_basis(const FlagType& type);
/// sigma_1..sigma_8.
FlagType certificate_type(int index);
/// g_1..g_8 (g_i for i >= 3 is j_index_basis of sigma_i).
std::vector<AlgebraElement> certificate_vector(int index);
/// CERT-F3 with M1..M8 replaced by `matrices` (index 0 unused).
Certificate f3_certificate(const std::vector<RationalMatrix>& matrices);

/// Certificate JSON; element references are "name" (looked up in the
/// certificate theory) or inline element JSON; matrices are "builtin:Mi",
/// a "matrixFile" path relative to `base_dir`, or an inline "matrix".
Certificate certificate_from_json(const nlohmann::json& j, const std::string& base_dir);
nlohmann::json report_to_json(const CertificateReport& report);
nlohmann::json report_to_json(const IdentityReport& report);

// ---------------------------------------------------------------------------
// Matrix checks

struct MatrixReport {
  bool passed = false;
  std::vector<std::string> lines;  // one per check
  std::optional<std::string> failure;
};

/// The colour swap 1 <-> 2 as a permutation of the j-index indices: flag j of
/// `from` maps to flag perm[j] of `to`.
std::vector<int> color_swap_permutation(const FlagType& from, const FlagType& to);
/// a == P b P^T, i.e. a(j,k) == b(perm[j], perm[k]).
bool conjugate_under(const RationalMatrix& a, const RationalMatrix& b, const std::vector<int>& perm);

/// Symmetry of M1..M8, (M5,M7) and (M6,M8) colour-swap conjugacy, digests.
MatrixReport verify_matrix_symmetry();
MatrixReport verify_matrix_symmetry(const std::vector<RationalMatrix>& matrices);

struct MutationOutcome {
  int matrix = 0;  // 1..8
  int index = 0;   // 0-based diagonal position
  int delta = 0;   // +1 or -1
  bool symmetric = true;
  bool psd = true;
  bool conjugacy = true;
  bool coefficients = true;
  bool flipped() const { return !symmetric || !psd || !conjugacy || !coefficients; }
};

/// Applies one diagonal change to the built-in matrices and reruns the
/// matrix and CERT-F3 checks.
MutationOutcome check_mutation(int matrix, int index, int delta);
/// `count` distinct diagonal mutations drawn with std::mt19937_64(seed).
std::vector<MutationOutcome> sample_mutations(int count, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Warm-up scalar bound

struct ScalarReport {
  bool passed = false;
  bool value_at_optimum = false;   // g(1/6) = 1/144
  bool derivative_at_optimum = false;
  bool value_at_zero = false;
  bool grid_exact = false;         // every grid point satisfies g(t) <= 1/144
  bool factorization = false;      // 1/144 - g(s^2) = (3/4)(s - s0)^2 (s^2 + b s + c)
  std::size_t grid_points = 0;
  double grid_max = 0;
  double lipschitz = 0;            // bound on |g'| over [0, 2/3]
  double padded_bound = 0;         // grid_max + lipschitz * spacing / 2
};

ScalarReport verify_warmup_scalar();
nlohmann::json report_to_json(const ScalarReport& report);
nlohmann::json report_to_json(const MatrixReport& report);

}  // namespace tflag
