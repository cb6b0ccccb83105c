#include "tflag/certificates.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "tflag/catalog.hpp"
#include "tflag/errors.hpp"
#include "tflag/interpretations.hpp"
#include "tflag/io.hpp"
#include "tflag/parallel.hpp"

namespace tflag {

namespace detail {
extern const char* const kMatrixText[8];
extern const char* const kMatrixDigest[8];
}  // namespace detail

namespace el = elements;

// ---------------------------------------------------------------------------
// Matrices

bool RationalMatrix::symmetric() const {
  for (int i = 0; i < dim_; ++i)
    for (int j = i + 1; j < dim_; ++j)
      if ((*this)(i, j) != (*this)(j, i)) return false;
  return true;
}

RationalMatrix parse_matrix_text(std::string_view text) {
  std::vector<std::vector<Rational>> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::vector<Rational> row;
    std::string tok;
    while (fields >> tok) row.push_back(parse_rational(tok));
    if (!row.empty()) rows.push_back(std::move(row));
  }
  const int d = static_cast<int>(rows.size());
  RationalMatrix m(d);
  for (int i = 0; i < d; ++i) {
    if (static_cast<int>(rows[i].size()) != d) {
      throw ShapeError("row " + std::to_string(i + 1) + " has " + std::to_string(rows[i].size()) +
                       " entries, expected " + std::to_string(d));
    }
    for (int j = 0; j < d; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

std::string format_matrix_text(const RationalMatrix& m) {
  std::string out;
  for (int i = 0; i < m.dim(); ++i) {
    for (int j = 0; j < m.dim(); ++j) {
      if (j) out += ' ';
      out += to_string(m(i, j));
    }
    out += '\n';
  }
  return out;
}

bool is_psd_exact(const RationalMatrix& m) {
  if (!m.symmetric()) throw ShapeError("PSD test needs a symmetric matrix");
  const int d = m.dim();
  std::vector<std::vector<Rational>> a(d, std::vector<Rational>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a[i][j] = m(i, j);
  std::vector<int> rest(d);
  for (int i = 0; i < d; ++i) rest[i] = i;
  while (!rest.empty()) {
    auto it = std::max_element(rest.begin(), rest.end(), [&](int x, int y) { return a[x][x] < a[y][y]; });
    const int p = *it;
    const Rational pivot = a[p][p];
    if (pivot < 0) return false;
    if (pivot == 0) {
      for (int i : rest)
        for (int j : rest)
          if (a[i][j] != 0) return false;
      return true;
    }
    rest.erase(it);
    for (int i : rest) {
      if (a[i][p] == 0) continue;
      const Rational factor = a[i][p] / pivot;
      for (int j : rest) a[i][j] -= factor * a[p][j];
    }
  }
  return true;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

namespace {

void check_matrix_index(int index) {
  if (index < 1 || index > 8) throw IndexError("matrix index must be 1..8");
}

}  // namespace

std::string builtin_matrix_text(int index) {
  check_matrix_index(index);
  return detail::kMatrixText[index - 1];
}

std::string builtin_matrix_digest(int index) {
  check_matrix_index(index);
  return detail::kMatrixDigest[index - 1];
}

const RationalMatrix& builtin_matrix(int index) {
  check_matrix_index(index);
  static const std::vector<RationalMatrix> all = [] {
    std::vector<RationalMatrix> out;
    for (int i = 0; i < 8; ++i) out.push_back(parse_matrix_text(detail::kMatrixText[i]));
    return out;
  }();
  return all[index - 1];
}

namespace {

std::vector<RationalMatrix> builtin_matrices() {
  std::vector<RationalMatrix> out(9);
  for (int i = 1; i <= 8; ++i) out[i] = builtin_matrix(i);
  return out;
}

// ---------------------------------------------------------------------------
// Univariate polynomials, for the Goodman rewrite

using Poly = std::vector<Rational>;  // coefficient of x^i at i

void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

Poly poly_add(Poly a, const Poly& b, const Rational& s = 1) {
  if (a.size() < b.size()) a.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += s * b[i];
  trim(a);
  return a;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  trim(out);
  return out;
}

IdentityReport goodman_rewrite() {
  // K3 >= rho(2 rho - 1) with K3 = 2/9 - dK3, rho = 2/3 - drho gives
  // dK3 <= 2/9 - rho(2 rho - 1); the claim is that this equals
  // (5/3) drho - 2 drho^2 as a polynomial in rho.
  const Poly rho = {0, 1};
  const Poly drho = {Rational(2, 3), -1};
  const Poly lhs = poly_add(Poly{Rational(2, 9)}, poly_mul(rho, poly_add(poly_mul(Poly{2}, rho), Poly{-1})), -1);
  const Poly rhs = poly_add(poly_mul(Poly{Rational(5, 3)}, drho), poly_mul(drho, drho), -2);
  IdentityReport r;
  r.name = "GOODMAN-REWRITE";
  r.theory = "polynomial";
  r.basis_size = std::max(lhs.size(), rhs.size());
  for (std::size_t i = 0; i < r.basis_size; ++i) {
    const Rational a = i < lhs.size() ? lhs[i] : Rational(0);
    const Rational b = i < rhs.size() ? rhs[i] : Rational(0);
    if (a != b) r.differences.push_back({i, Model(), a, b});
  }
  r.passed = r.differences.empty();
  r.note = "coefficients of rho^i in 2/9 - rho(2rho-1) and (5/3)drho - 2drho^2, drho = 2/3 - rho";
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Identities

IdentityReport verify_identity(const std::string& name, const AlgebraElement& lhs, const AlgebraElement& rhs) {
  if (!(lhs.type() == rhs.type())) throw SchemaError(name + ": the two sides have different types");
  const int level = std::max(lhs.level(), rhs.level());
  const AlgebraElement a = lift(lhs, level);
  const AlgebraElement b = lift(rhs, level);
  IdentityReport r;
  r.name = name;
  r.theory = std::string(theory_name(a.theory()));
  r.level = level;
  r.basis_size = a.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) r.differences.push_back({i, a.basis().flag(i), a[i], b[i]});
  }
  r.passed = r.differences.empty();
  return r;
}

const std::vector<std::string>& identity_names() {
  static const std::vector<std::string> names = {"MAIN-EXPR",   "K3E-ID",          "F1-ID",
                                                 "F2-EXPANSION", "AVG-DELTA-ALPHA", "GOODMAN-REWRITE"};
  return names;
}

namespace {

SosTerm f2_square_term() {
  RationalMatrix one(1);
  one(0, 0) = 1;
  return {"<(P3N - 2 I3N)^2>_N", el::non_edge_type(), {el::P3N() - Rational(2) * el::I3N()}, one, Rational(1)};
}

}  // namespace

IdentityReport verify_identity(std::string_view name) {
  const auto oe = [](const AlgebraElement& a) { return pi(InterpretationId::OE, a); };
  if (name == "MAIN-EXPR") {
    const AlgebraElement da = el::delta_alpha();
    const AlgebraElement rhs = Rational(1, 2) * (oe(el::delta_K3()) - oe(el::delta_rho()) - oe(el::P3bar())) -
                               Rational(3) * average(da * da);
    return verify_identity("MAIN-EXPR", el::delta(), rhs);
  }
  if (name == "K3E-ID") {
    const AlgebraElement lhs = average(AlgebraElement::constant(edge_type(), Rational(1, 3)) - el::K3E());
    const AlgebraElement centred = el::e() - Rational(2, 3);
    const AlgebraElement rhs =
        Rational(4) * el::f() + Rational(7, 3) * el::P3bar() + Rational(2) * average(centred * centred);
    return verify_identity("K3E-ID", lhs, rhs);
  }
  if (name == "F1-ID") {
    const AlgebraElement d0 = el::delta0();
    const AlgebraElement diff = el::p(1) - el::p(2);
    const AlgebraElement rhs = (d0 * d0 + Rational(1, 3) * (diff * diff)) * (Rational(3) * el::q() + Rational(1));
    return verify_identity("F1-ID", el::f1(), rhs);
  }
  if (name == "F2-EXPANSION") {
    // <e^2>_1 = P3/3 + K3 at level 3
    const AlgebraElement e_sq = Rational(1, 3) * el::P3() + el::K3();
    const AlgebraElement rhs =
        Rational(4) * (e_sq - el::rho() * el::rho()) + expand_sos(f2_square_term(), TheoryId::Graph, 4);
    return verify_identity("F2-EXPANSION", el::f2(), rhs);
  }
  if (name == "AVG-DELTA-ALPHA") {
    return verify_identity("AVG-DELTA-ALPHA", average(el::delta_alpha()), Rational(1, 2) * oe(el::delta_rho()));
  }
  if (name == "GOODMAN-REWRITE") return goodman_rewrite();
  throw SchemaError("unknown identity '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Certificates

AlgebraElement expand_sos(const SosTerm& term, TheoryId theory, int level) {
  const int d = term.matrix.dim();
  if (static_cast<int>(term.basis.size()) != d) {
    throw SchemaError(term.label + ": basis has " + std::to_string(term.basis.size()) + " entries, matrix is " +
                      std::to_string(d) + "x" + std::to_string(d));
  }
  if (d == 0) throw SchemaError(term.label + ": empty basis");
  for (const auto& g : term.basis) {
    if (!(g.type() == term.type)) throw SchemaError(term.label + ": basis element of the wrong type");
  }
  std::optional<AlgebraElement> acc;
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      const Rational c = i == j ? term.matrix(i, i) : Rational(term.matrix(i, j) + term.matrix(j, i));
      if (c == 0) continue;
      const AlgebraElement x = c * multiply(term.basis[i], term.basis[j]);
      acc = acc ? *acc + x : x;
    }
  }
  AlgebraElement out = acc ? *acc : Rational(0) * multiply(term.basis[0], term.basis[0]);
  if (term.type.size() > 0) out = average(out);
  if (out.theory() != theory) {
    if (out.theory() == TheoryId::Graph && theory == TheoryId::GraphStar) {
      out = el::ce(out);
    } else {
      throw SchemaError(term.label + ": term theory does not match the certificate");
    }
  }
  if (out.level() > level) throw SchemaError(term.label + ": expands above the certificate level");
  return term.weight * lift(out, level);
}

namespace {

AlgebraElement atom_term(const Atom& atom, TheoryId theory, int level) {
  AlgebraElement x = atom.element;
  if (x.type().size() != 0) throw SchemaError(atom.label + ": atoms must be unlabelled");
  if (x.theory() == TheoryId::Graph && theory == TheoryId::GraphStar) x = el::ce(x);
  if (x.theory() != theory) throw SchemaError(atom.label + ": atom theory does not match the certificate");
  if (x.level() > level) throw SchemaError(atom.label + ": atom above the certificate level");
  return atom.weight * lift(x, level);
}

}  // namespace

AlgebraElement certificate_residual(const Certificate& cert) {
  if (cert.target.type().size() != 0 || cert.target.theory() != cert.theory) {
    throw SchemaError(cert.name + ": target must be an unlabelled element of the certificate theory");
  }
  if (cert.target.level() > cert.level) throw SchemaError(cert.name + ": target above the certificate level");
  std::vector<std::optional<AlgebraElement>> sos(cert.sos_terms.size());
  parallel_for(sos.size(), [&](std::size_t i) { sos[i] = expand_sos(cert.sos_terms[i], cert.theory, cert.level); });
  AlgebraElement r = lift(cert.target, cert.level);
  for (const auto& s : sos) r -= *s;
  for (const auto& a : cert.nonneg_atoms) r -= atom_term(a, cert.theory, cert.level);
  for (const auto& a : cert.cs_atoms) r -= atom_term(a, cert.theory, cert.level);
  return r;
}

CertificateReport verify_certificate(const Certificate& cert) {
  CertificateReport rep;
  rep.name = cert.name;
  bool psd_ok = true;
  for (const auto& term : cert.sos_terms) {
    bool ok = false;
    try {
      ok = is_psd_exact(term.matrix);
    } catch (const ShapeError&) {
      ok = false;
    }
    rep.psd.emplace_back(term.label, ok);
    psd_ok = psd_ok && ok;
  }
  const AlgebraElement r = certificate_residual(cert);
  rep.basis_size = r.size();
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (i == 0 || r[i] < rep.min_slack) {
      rep.min_slack = r[i];
      rep.min_slack_index = i;
    }
    if (r[i] == 0) ++rep.zero_slack_count;
    if (r[i] < 0) {
      ++rep.negative_count;
      if (!rep.first_negative) rep.first_negative = i;
    }
  }
  if (r.size() > 0) rep.min_slack_model = r.basis().flag(rep.min_slack_index);
  rep.coefficients_ok = rep.negative_count == 0;
  rep.passed = psd_ok && rep.coefficients_ok;
  for (const auto& a : cert.nonneg_atoms) rep.assumptions.push_back("side condition: " + a.label + " >= 0 given " + a.assumption);
  for (const auto& a : cert.cs_atoms) rep.assumptions.push_back("cs-assumption: " + a.label + " >= 0 by " + a.assumption);
  rep.notes = cert.notes;
  return rep;
}

FlagType certificate_type(int index) {
  if (index == 1 || index == 2) return FlagType::empty(TheoryId::GraphStar);
  struct Spec {
    int c1, c2;
    bool edge;
  };
  static const Spec specs[] = {{0, 0, true}, {1, 2, false}, {1, 1, true}, {0, 1, false}, {2, 2, true}, {0, 2, false}};
  if (index < 3 || index > 8) throw IndexError("certificate types are numbered 1..8");
  const Spec& s = specs[index - 3];
  Model base(TheoryId::GraphStar, 2);
  base.set_color(0, s.c1);
  base.set_color(1, s.c2);
  if (s.edge) base.add_edge(0, 1);
  return FlagType(base);
}

std::vector<AlgebraElement> j_index_basis(const FlagType& type) {
  if (type.theory() != TheoryId::GraphStar || type.size() != 2) {
    throw FlagTypeError("j-index order needs a two-vertex coloured graph type");
  }
  std::vector<AlgebraElement> out;
  for (int a = 0; a < 3; ++a) {
    for (int e1 = 0; e1 < 2; ++e1) {
      for (int e2 = 0; e2 < 2; ++e2) {
        Model m(TheoryId::GraphStar, 3);
        m.set_color(0, type.base().color(0));
        m.set_color(1, type.base().color(1));
        m.set_color(2, a);
        if (type.base().edge(0, 1)) m.add_edge(0, 1);
        if (e1) m.add_edge(0, 2);
        if (e2) m.add_edge(1, 2);
        out.push_back(AlgebraElement::of_flag(m, type));
      }
    }
  }
  return out;
}

std::vector<AlgebraElement> certificate_vector(int index) {
  const auto nu = el::nu_ab;
  const auto rho = el::rho_ab;
  switch (index) {
    case 1:
      return {nu(1, 2), nu(0, 1) + nu(0, 2), rho(1, 1) + rho(2, 2), rho(0, 0)};
    case 2:
      return {nu(2, 2) - nu(1, 1) - rho(0, 2) + rho(0, 1), nu(0, 2) - nu(0, 1), rho(2, 2) - rho(1, 1)};
    default:
      return j_index_basis(certificate_type(index));
  }
}

namespace {

const char* kOptimalityNote =
    "assumption (not checked coefficient-wise): optimality, pi^CE(<pi^C(kappa)>_E) >= kappa * pi^CE(rho); "
    "the target contains this gap with a negative coefficient";

}  // namespace

Certificate f3_certificate(const std::vector<RationalMatrix>& matrices) {
  if (matrices.size() != 9) throw SchemaError("expected matrices M1..M8 at indices 1..8");
  Certificate c;
  c.name = "CERT-F3";
  c.theory = TheoryId::GraphStar;
  c.level = 4;
  const AlgebraElement d0 = el::delta0();
  c.target = Rational(3, 4) * (d0 * d0 * d0) - el::ce(el::f()) +
             Rational(87, 40) * (el::kappa_prime() * el::ce(el::delta_rho())) - Rational(1, 39240) * el::kappa() -
             Rational(43, 160) * el::optimality_gap();
  for (int i = 1; i <= 8; ++i) {
    c.sos_terms.push_back({"<Q" + std::to_string(i) + "(g" + std::to_string(i) + ")>_sigma" + std::to_string(i),
                           certificate_type(i), certificate_vector(i), matrices[i], Rational(1, 5232)});
  }
  const AlgebraElement diff = el::p(1) - el::p(2);
  c.nonneg_atoms.push_back({"delta0*p0*((9/4)(p1-p2)^2 + (491/654)kappa)",
                            d0 * el::p(0) * (Rational(9, 4) * (diff * diff) + Rational(491, 654) * el::kappa()),
                            Rational(1), "delta0 >= 0"});
  c.notes.push_back("transcription: the second entry of g1, printed v_{01}+nu_{02}, is read as nu_{01}+nu_{02}");
  c.notes.push_back(kOptimalityNote);
  return c;
}

Certificate builtin_certificate(std::string_view name) {
  if (name == "CERT-F3") return f3_certificate(builtin_matrices());
  if (name == "CERT-MAIN-INEQ") {
    Certificate c;
    c.name = "CERT-MAIN-INEQ";
    c.theory = TheoryId::GraphStar;
    c.level = 4;
    c.target = Rational(6) * el::ce(el::delta_rho()) - el::f1() - Rational(2) * el::optimality_gap() -
               Rational(20) * el::ce(el::f());
    SosTerm square = f2_square_term();
    square.weight = 2;
    c.sos_terms.push_back(square);
    c.cs_atoms.push_back({"<e^2>_1 - rho^2", average(el::e() * el::e()) - el::rho() * el::rho(), Rational(8),
                          "Cauchy-Schwarz (<e>_1 = rho)"});
    c.notes.push_back("the target omits -2 pi^CE(f2); its two summands appear as the SOS term and the cs atom");
    c.notes.push_back(kOptimalityNote);
    return c;
  }
  for (int a : {1, 2}) {
    if (name != "CERT-SEC42-a" + std::to_string(a)) continue;
    Certificate c;
    c.name = std::string(name);
    c.theory = TheoryId::GraphStar;
    c.level = 3;
    const AlgebraElement pa = el::p(a) - Rational(2, 3);
    const AlgebraElement rho0 = el::rho_ab(0, 0);
    const AlgebraElement inner = Rational(3, 4) * rho0 + Rational(3, 2) * (el::p(0) * el::p(3 - a)) + Rational(1, 3);
    c.target = Rational(1, 2) * (el::kappa() - rho0) - pa * inner - el::ce(el::f()) - pa * pa;
    return c;
  }
  throw SchemaError("unknown certificate '" + std::string(name) + "'");
}

const std::vector<std::string>& certificate_names() {
  static const std::vector<std::string> names = {"CERT-F3", "CERT-MAIN-INEQ", "CERT-SEC42-a1", "CERT-SEC42-a2"};
  return names;
}

// ---------------------------------------------------------------------------
// Certificate JSON

namespace {

AlgebraElement element_ref(const nlohmann::json& j, TheoryId theory) {
  if (j.is_string()) return el::named_element(theory, j.get<std::string>());
  if (!j.is_object()) throw SchemaError("element reference must be a name or an object");
  if (j.contains("coeffs")) return element_from_json(j);
  if (j.contains("constant")) return AlgebraElement::constant(FlagType::empty(theory), rational_from_json(j["constant"]));
  if (j.contains("sum")) {
    std::optional<AlgebraElement> acc;
    for (const auto& term : j["sum"]) {
      if (!term.is_array() || term.size() != 2) throw SchemaError("sum entries are [weight, element]");
      const AlgebraElement x = rational_from_json(term[0]) * element_ref(term[1], theory);
      acc = acc ? *acc + x : x;
    }
    if (!acc) throw SchemaError("empty sum");
    return *acc;
  }
  if (j.contains("product")) {
    std::optional<AlgebraElement> acc;
    for (const auto& factor : j["product"]) {
      const AlgebraElement x = element_ref(factor, theory);
      acc = acc ? *acc * x : x;
    }
    if (!acc) throw SchemaError("empty product");
    return *acc;
  }
  if (j.contains("average")) return average(element_ref(j["average"], theory));
  if (j.contains("ce")) return el::ce(element_ref(j["ce"], TheoryId::Graph));
  throw SchemaError("unrecognised element reference");
}

RationalMatrix matrix_ref(const nlohmann::json& term, const std::string& base_dir) {
  if (term.contains("matrixFile")) {
    const auto path = std::filesystem::path(base_dir) / term["matrixFile"].get<std::string>();
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot read matrix file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_matrix_text(ss.str());
  }
  if (!term.contains("matrix")) throw SchemaError("SOS term needs matrix or matrixFile");
  const auto& m = term["matrix"];
  if (m.is_string()) {
    const std::string ref = m.get<std::string>();
    if (ref.size() == 10 && ref.starts_with("builtin:M") && ref[9] >= '1' && ref[9] <= '8') {
      return builtin_matrix(ref[9] - '0');
    }
    throw SchemaError("unknown matrix reference '" + ref + "'");
  }
  const int d = static_cast<int>(m.size());
  RationalMatrix out(d);
  for (int i = 0; i < d; ++i) {
    if (!m[i].is_array() || static_cast<int>(m[i].size()) != d) throw SchemaError("matrix must be square");
    for (int k = 0; k < d; ++k) out(i, k) = rational_from_json(m[i][k]);
  }
  return out;
}

std::vector<Atom> atoms_from_json(const nlohmann::json& list, TheoryId theory) {
  std::vector<Atom> out;
  for (const auto& a : list) {
    out.push_back({a.value("label", std::string("atom")), element_ref(a.at("element"), theory),
                   a.contains("weight") ? rational_from_json(a["weight"]) : Rational(1),
                   a.value("assumption", std::string("declared"))});
  }
  return out;
}

}  // namespace

Certificate certificate_from_json(const nlohmann::json& j, const std::string& base_dir) {
  try {
    Certificate c;
    c.name = j.at("name").get<std::string>();
    c.theory = parse_theory(j.at("theory").get<std::string>());
    c.level = j.at("level").get<int>();
    c.target = element_ref(j.at("target"), c.theory);
    for (const auto& t : j.value("sosTerms", nlohmann::json::array())) {
      SosTerm term;
      term.label = t.value("label", "sos" + std::to_string(c.sos_terms.size() + 1));
      const TheoryId term_theory = t.contains("theory") ? parse_theory(t["theory"].get<std::string>()) : c.theory;
      term.type = t.contains("type") ? flag_type_from_json(t["type"]) : FlagType::empty(term_theory);
      const std::string order = t.value("basisOrder", std::string("explicit"));
      if (order == "j-index") {
        term.basis = j_index_basis(term.type);
      } else if (order == "explicit") {
        for (const auto& g : t.at("basis")) term.basis.push_back(element_ref(g, term_theory));
      } else {
        throw SchemaError("basisOrder must be \"j-index\" or \"explicit\"");
      }
      term.matrix = matrix_ref(t, base_dir);
      term.weight = t.contains("weight") ? rational_from_json(t["weight"]) : Rational(1);
      if (term.weight <= 0) throw SchemaError(term.label + ": weight must be positive");
      if (static_cast<int>(term.basis.size()) != term.matrix.dim()) {
        throw SchemaError(term.label + ": basis length differs from matrix dimension");
      }
      c.sos_terms.push_back(std::move(term));
    }
    c.nonneg_atoms = atoms_from_json(j.value("nonnegAtoms", nlohmann::json::array()), c.theory);
    c.cs_atoms = atoms_from_json(j.value("csAtoms", nlohmann::json::array()), c.theory);
    for (const auto& n : j.value("notes", nlohmann::json::array())) c.notes.push_back(n.get<std::string>());
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed certificate JSON: ") + e.what());
  } catch (const ShapeError& e) {
    throw SchemaError(std::string("malformed certificate matrix: ") + e.what());
  }
}

nlohmann::json report_to_json(const CertificateReport& r) {
  nlohmann::json j;
  j["name"] = r.name;
  j["kind"] = "certificate";
  j["passed"] = r.passed;
  j["basis_size"] = r.basis_size;
  nlohmann::json psd = nlohmann::json::array();
  for (const auto& [label, ok] : r.psd) psd.push_back({{"term", label}, {"psd", ok}});
  j["psd"] = psd;
  j["coefficients_ok"] = r.coefficients_ok;
  j["min_slack"] = to_string(r.min_slack);
  j["min_slack_approx"] = r.min_slack.get_d();
  j["min_slack_index"] = r.min_slack_index;
  j["min_slack_model"] = model_to_json(r.min_slack_model);
  j["zero_slack_count"] = r.zero_slack_count;
  j["negative_count"] = r.negative_count;
  j["first_negative_index"] = r.first_negative ? nlohmann::json(*r.first_negative) : nlohmann::json(nullptr);
  j["assumptions"] = r.assumptions;
  j["notes"] = r.notes;
  return j;
}

nlohmann::json report_to_json(const IdentityReport& r) {
  nlohmann::json j;
  j["name"] = r.name;
  j["kind"] = "identity";
  j["passed"] = r.passed;
  j["theory"] = r.theory;
  j["level"] = r.level;
  j["basis_size"] = r.basis_size;
  nlohmann::json diffs = nlohmann::json::array();
  for (const auto& d : r.differences) {
    diffs.push_back({{"index", d.index},
                     {"model", model_to_json(d.model)},
                     {"lhs", to_string(d.lhs)},
                     {"rhs", to_string(d.rhs)}});
  }
  j["differences"] = diffs;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

// ---------------------------------------------------------------------------
// Matrix checks

std::vector<int> color_swap_permutation(const FlagType& from, const FlagType& to) {
  if (from.size() != 2 || to.size() != 2) throw FlagTypeError("colour swap needs two-vertex types");
  auto swap_colors = [](const Model& m) {
    Model out = m;
    for (int v = 0; v < m.size(); ++v) {
      const int c = m.color(v);
      out.set_color(v, c == 0 ? 0 : 3 - c);
    }
    return out;
  };
  // The swapped type may need its two labels exchanged to match `to`.
  const Model swapped = swap_colors(from.base());
  std::vector<int> label_perm;
  for (const std::vector<int>& p : {std::vector<int>{0, 1}, std::vector<int>{1, 0}}) {
    if (FlagType(induced(swapped, p)) == to) {
      label_perm = p;
      break;
    }
  }
  if (label_perm.empty()) throw FlagTypeError("types are not related by the colour swap");
  const auto basis = FlagBasis::get(to, 3);
  const auto single = [](const AlgebraElement& x) {
    const auto it = std::find_if(x.coeffs().begin(), x.coeffs().end(), [](const Rational& c) { return c != 0; });
    return static_cast<std::size_t>(it - x.coeffs().begin());
  };
  std::vector<std::size_t> dst;
  for (const auto& x : j_index_basis(to)) dst.push_back(*basis->index_of(x.basis().flag(single(x))));
  std::vector<int> perm;
  for (const auto& x : j_index_basis(from)) {
    const Model image = induced(swap_colors(x.basis().flag(single(x))), {label_perm[0], label_perm[1], 2});
    const auto pos = std::find(dst.begin(), dst.end(), *basis->index_of(image));
    perm.push_back(static_cast<int>(pos - dst.begin()));
  }
  return perm;
}

bool conjugate_under(const RationalMatrix& a, const RationalMatrix& b, const std::vector<int>& perm) {
  if (a.dim() != b.dim() || static_cast<int>(perm.size()) != a.dim()) return false;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j)
      if (a(i, j) != b(perm[i], perm[j])) return false;
  return true;
}

namespace {

std::string first_conjugacy_mismatch(const RationalMatrix& a, const RationalMatrix& b, const std::vector<int>& perm) {
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j)
      if (a(i, j) != b(perm[i], perm[j])) {
        return "entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "): " + to_string(a(i, j)) +
               " vs " + to_string(b(perm[i], perm[j]));
      }
  return "";
}

struct Checks {
  bool symmetric = true;
  bool psd = true;
  bool conjugacy = true;
};

Checks run_matrix_checks(const std::vector<RationalMatrix>& m, MatrixReport* report) {
  Checks c;
  auto line = [&](const std::string& text, bool ok) {
    if (!report) return;
    report->lines.push_back(text + (ok ? ": pass" : ": FAIL"));
    if (!ok && !report->failure) report->failure = text;
  };
  for (int i = 1; i <= 8; ++i) {
    const bool sym = m[i].symmetric();
    c.symmetric = c.symmetric && sym;
    line("M" + std::to_string(i) + " symmetric", sym);
    bool psd = false;
    if (sym) psd = is_psd_exact(m[i]);
    c.psd = c.psd && psd;
    line("M" + std::to_string(i) + " positive semidefinite", psd);
  }
  for (auto [a, b] : {std::pair{5, 7}, std::pair{6, 8}}) {
    const auto perm = color_swap_permutation(certificate_type(b), certificate_type(a));
    const bool ok = conjugate_under(m[a], m[b], perm);
    c.conjugacy = c.conjugacy && ok;
    std::string text = "M" + std::to_string(a) + " = P M" + std::to_string(b) + " P^T";
    if (!ok) text += " (first mismatch " + first_conjugacy_mismatch(m[a], m[b], perm) + ")";
    line(text, ok);
  }
  return c;
}

}  // namespace

MatrixReport verify_matrix_symmetry(const std::vector<RationalMatrix>& matrices) {
  if (matrices.size() != 9) throw SchemaError("expected matrices M1..M8 at indices 1..8");
  MatrixReport r;
  run_matrix_checks(matrices, &r);
  // same index permutation as for (M5, M7)
  const auto perm = color_swap_permutation(certificate_type(5), certificate_type(7));
  const bool related = conjugate_under(matrices[3], matrices[4], perm);
  r.lines.push_back(std::string("M3, M4 related by P: ") + (related ? "yes" : "no"));
  r.passed = !r.failure.has_value();
  return r;
}

MatrixReport verify_matrix_symmetry() {
  MatrixReport r = verify_matrix_symmetry(builtin_matrices());
  for (int i = 1; i <= 8; ++i) {
    const bool ok = sha256_hex(builtin_matrix_text(i)) == builtin_matrix_digest(i);
    r.lines.push_back("M" + std::to_string(i) + " digest " + builtin_matrix_digest(i).substr(0, 12) +
                      (ok ? ": pass" : ": FAIL"));
    if (!ok && !r.failure) r.failure = "M" + std::to_string(i) + " digest";
  }
  r.passed = !r.failure.has_value();
  return r;
}

nlohmann::json report_to_json(const MatrixReport& r) {
  nlohmann::json j;
  j["name"] = "MATRICES";
  j["kind"] = "matrices";
  j["passed"] = r.passed;
  j["checks"] = r.lines;
  j["failure"] = r.failure ? nlohmann::json(*r.failure) : nlohmann::json(nullptr);
  return j;
}

MutationOutcome check_mutation(int matrix, int index, int delta) {
  check_matrix_index(matrix);
  std::vector<RationalMatrix> m = builtin_matrices();
  if (index < 0 || index >= m[matrix].dim()) throw IndexError("diagonal index out of range");
  m[matrix](index, index) += delta;
  MutationOutcome out;
  out.matrix = matrix;
  out.index = index;
  out.delta = delta;
  const Checks c = run_matrix_checks(m, nullptr);
  out.symmetric = c.symmetric;
  out.psd = c.psd;
  out.conjugacy = c.conjugacy;
  out.coefficients = verify_certificate(f3_certificate(m)).coefficients_ok;
  return out;
}

std::vector<MutationOutcome> sample_mutations(int count, std::uint64_t seed) {
  std::vector<std::array<int, 3>> all;
  for (int i = 1; i <= 8; ++i)
    for (int k = 0; k < builtin_matrix(i).dim(); ++k)
      for (int d : {-1, 1}) all.push_back({i, k, d});
  if (count < 0 || count > static_cast<int>(all.size())) throw IndexError("mutation sample too large");
  std::mt19937_64 rng(seed);
  for (std::size_t i = all.size() - 1; i > 0; --i) std::swap(all[i], all[rng() % (i + 1)]);
  std::vector<MutationOutcome> out(static_cast<std::size_t>(count));
  parallel_for(out.size(), [&](std::size_t i) { out[i] = check_mutation(all[i][0], all[i][1], all[i][2]); });
  return out;
}

// ---------------------------------------------------------------------------
// Warm-up scalar

namespace {

/// a + b sqrt(6)
struct Surd {
  Rational a, b;
  friend Surd operator+(const Surd& x, const Surd& y) { return {x.a + y.a, x.b + y.b}; }
  friend Surd operator-(const Surd& x, const Surd& y) { return {x.a - y.a, x.b - y.b}; }
  friend Surd operator*(const Surd& x, const Surd& y) { return {x.a * y.a + 6 * x.b * y.b, x.a * y.b + x.b * y.a}; }
  friend bool operator==(const Surd&, const Surd&) = default;
};

using SurdPoly = std::vector<Surd>;

SurdPoly surd_mul(const SurdPoly& p, const SurdPoly& q) {
  SurdPoly out(p.size() + q.size() - 1);
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) out[i + j] = out[i + j] + p[i] * q[j];
  return out;
}

double g_double(double t) { return std::sqrt(6.0) / 6.0 * std::pow(t, 1.5) - 0.75 * t * t; }

}  // namespace

ScalarReport verify_warmup_scalar() {
  ScalarReport r;
  const Surd c{0, Rational(1, 6)};  // sqrt6 / 6
  // s = sqrt(t); g = c s^3 - (3/4) s^4 and dg/dt = (3/2) c s - (3/2) s^2.
  auto g_at = [&](const Surd& s) { return c * s * s * s - Surd{Rational(3, 4), 0} * s * s * s * s; };
  const Surd s0{0, Rational(1, 6)};  // sqrt(1/6)
  r.value_at_optimum = g_at(s0) == Surd{Rational(1, 144), 0};
  r.derivative_at_optimum = Surd{Rational(3, 2), 0} * c * s0 - Surd{Rational(3, 2), 0} * s0 * s0 == Surd{0, 0};
  r.value_at_zero = g_at(Surd{0, 0}) == Surd{0, 0};
  // 1/144 - g(s^2) = (3/4)(s - s0)^2 (s^2 + (sqrt6/9) s + 1/18); the quadratic
  // has discriminant 6/81 - 4/18 < 0, so g <= 1/144 for every t >= 0.
  const SurdPoly lhs = {{Rational(1, 144), 0}, {0, 0}, {0, 0}, {0, -Rational(1, 6)}, {Rational(3, 4), 0}};
  const SurdPoly lin = {{0, -Rational(1, 6)}, {1, 0}};
  SurdPoly rhs = surd_mul(surd_mul(lin, lin), SurdPoly{{Rational(1, 18), 0}, {0, Rational(1, 9)}, {1, 0}});
  for (auto& x : rhs) x = Surd{Rational(3, 4), 0} * x;
  r.factorization = lhs == rhs && Rational(6, 81) - Rational(4, 18) < 0;
  // grid: t_i = (2/3) i / 10^4; g(t) <= 1/144 iff t^3/6 <= (1/144 + (3/4) t^2)^2
  constexpr int kSteps = 10000;
  r.grid_exact = true;
  r.grid_max = 0;
  for (int i = 0; i <= kSteps; ++i) {
    Rational t = Rational(2 * i, 3 * kSteps);
    t.canonicalize();
    const Rational rhs_t = Rational(1, 144) + Rational(3, 4) * t * t;
    if (t * t * t / 6 > rhs_t * rhs_t) r.grid_exact = false;
    r.grid_max = std::max(r.grid_max, g_double(t.get_d()));
  }
  r.grid_points = kSteps + 1;
  // |g'(t)| = |(sqrt6/4) sqrt t - (3/2) t| <= 1/2 on [0, 2/3], attained at t = 2/3
  r.lipschitz = 0.5;
  r.padded_bound = r.grid_max + r.lipschitz * (2.0 / 3.0 / kSteps) / 2;
  r.passed = r.value_at_optimum && r.derivative_at_optimum && r.value_at_zero && r.factorization && r.grid_exact &&
             r.grid_max <= 1.0 / 144 + 1e-9;
  return r;
}

nlohmann::json report_to_json(const ScalarReport& r) {
  nlohmann::json j;
  j["name"] = "WARMUP-SCALAR";
  j["kind"] = "scalar";
  j["passed"] = r.passed;
  j["value_at_optimum"] = r.value_at_optimum;
  j["derivative_at_optimum"] = r.derivative_at_optimum;
  j["value_at_zero"] = r.value_at_zero;
  j["factorization"] = r.factorization;
  j["grid_exact"] = r.grid_exact;
  j["grid_points"] = r.grid_points;
  j["grid_max_approx"] = r.grid_max;
  j["lipschitz_approx"] = r.lipschitz;
  j["padded_bound_approx"] = r.padded_bound;
  j["bound"] = "1/144";
  return j;
}

}  // namespace tflag
