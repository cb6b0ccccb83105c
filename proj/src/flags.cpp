#include "tflag/flags.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <tuple>

#include "tflag/errors.hpp"
#include "tflag/parallel.hpp"

namespace tflag {

namespace {

template <class F>
void for_each_combination(const std::vector<int>& pool, int k, F&& fn) {
  const int n = static_cast<int>(pool.size());
  if (k < 0 || k > n) return;
  std::vector<int> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<int> pick(static_cast<std::size_t>(k));
  while (true) {
    for (int i = 0; i < k; ++i) pick[i] = pool[idx[i]];
    fn(pick);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::vector<int> range(int from, int to) {
  std::vector<int> v;
  for (int i = from; i < to; ++i) v.push_back(i);
  return v;
}

std::vector<int> with_prefix(int k, const std::vector<int>& rest) {
  std::vector<int> v = range(0, k);
  v.insert(v.end(), rest.begin(), rest.end());
  return v;
}

// Coefficient of the sub-flag of G induced by `verts`, or zero when it is
// outside the basis of `a`.
const Rational* coefficient_at(const AlgebraElement& a, const Model& g, const std::vector<int>& verts) {
  const int k = a.type().size();
  const auto cf = canonical_form(induced(g, verts), k);
  auto idx = a.basis().find(cf.code);
  if (!idx) return nullptr;
  return &a[*idx];
}

void require_same_type(const AlgebraElement& a, const AlgebraElement& b) {
  if (!(a.type() == b.type())) {
    throw FlagTypeError("elements live over different types or theories");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// FlagType / Flag

FlagType::FlagType(Model base) : base_(std::move(base)) {
  base_.check_structure();
  if (!base_.satisfies_axioms()) throw InvalidModelError("type violates the theory axioms");
  code_ = encode(base_, base_.size());
}

Flag::Flag(const Model& model, std::span<const int> theta, const FlagType& type) : type_(type) {
  const int k = type.size();
  if (static_cast<int>(theta.size()) != k) throw FlagTypeError("labelling size differs from type size");
  if (model.theory() != type.theory()) throw FlagTypeError("flag and type belong to different theories");
  std::vector<int> order(theta.begin(), theta.end());
  std::vector<bool> used(static_cast<std::size_t>(model.size()), false);
  for (int v : order) {
    if (v < 0 || v >= model.size() || used[v]) throw FlagTypeError("labelling is not injective");
    used[v] = true;
  }
  for (int v = 0; v < model.size(); ++v) {
    if (!used[v]) order.push_back(v);
  }
  const Model m = induced(model, order);
  if (!(encode(m, range(0, k), k) == type.code())) {
    throw FlagTypeError("labelled vertices do not induce the type");
  }
  if (!m.satisfies_axioms()) throw InvalidModelError("flag violates the theory axioms");
  auto cf = canonical_form(m, k);
  model_ = std::move(cf.model);
  code_ = cf.code;
}

Flag::Flag(const Model& model, const FlagType& type)
    : Flag(model, range(0, type.size()), type) {}

// ---------------------------------------------------------------------------
// FlagBasis

FlagBasis::FlagBasis(const FlagType& type, int level) : type_(type), level_(level) {
  for (auto& cf : enumerate_extensions(type.base(), level)) {
    index_.emplace(cf.code, flags_.size());
    flags_.push_back(std::move(cf.model));
    codes_.push_back(cf.code);
  }
}

std::shared_ptr<const FlagBasis> FlagBasis::get(const FlagType& type, int level) {
  if (level < type.size()) throw SizeLimitError("level below the type size");
  if (level > kMaxCanonicalSize) {
    throw SizeLimitError("flag bases are limited to " + std::to_string(kMaxCanonicalSize) +
                         " vertices, got level " + std::to_string(level));
  }
  using Key = std::tuple<TheoryId, Code, int>;
  static std::mutex mutex;
  static std::map<Key, std::shared_ptr<const FlagBasis>> cache;
  const Key key{type.theory(), type.code(), level};
  std::lock_guard lock(mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto basis = std::make_shared<const FlagBasis>(type, level);
  cache.emplace(key, basis);
  return basis;
}

std::optional<std::size_t> FlagBasis::find(const Code& canonical) const {
  auto it = index_.find(canonical);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> FlagBasis::index_of(const Model& m) const {
  if (m.theory() != type_.theory() || m.size() != level_) return std::nullopt;
  return find(canonical_form(m, type_.size()).code);
}

// ---------------------------------------------------------------------------
// AlgebraElement

AlgebraElement::AlgebraElement(const FlagType& type, int level)
    : AlgebraElement(FlagBasis::get(type, level)) {}

AlgebraElement::AlgebraElement(std::shared_ptr<const FlagBasis> basis)
    : basis_(std::move(basis)), coeffs_(basis_->size()) {}

AlgebraElement AlgebraElement::constant(const FlagType& type, const Rational& value) {
  AlgebraElement out(type, type.size());
  out.coeffs_.at(0) = value;
  return out;
}

AlgebraElement AlgebraElement::of_flag(const Model& m, const FlagType& type) {
  const Flag f(m, type);
  AlgebraElement out(type, m.size());
  auto idx = out.basis().find(f.code());
  if (!idx) throw InvalidModelError("flag is not in the basis of its type");
  out.coeffs_[*idx] = 1;
  return out;
}

AlgebraElement AlgebraElement::of_model(const Model& m) { return of_flag(m, FlagType::empty(m.theory())); }

bool AlgebraElement::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& c) { return c == 0; });
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& other) {
  *this = *this + other;
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& other) {
  *this = *this - other;
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(const Rational& s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

bool operator==(const AlgebraElement& a, const AlgebraElement& b) {
  return a.type() == b.type() && a.level() == b.level() && a.coeffs_ == b.coeffs_;
}

// ---------------------------------------------------------------------------
// Algebra operations

AlgebraElement lift(const AlgebraElement& a, int level) {
  if (level < a.level()) throw SizeLimitError("cannot lift to a lower level");
  if (level == a.level()) return a;
  const int k = a.type().size();
  AlgebraElement out(a.type(), level);
  const FlagBasis& target = out.basis();
  const mpz_class ways = binomial(level - k, a.level() - k);
  const auto free = range(k, level);
  parallel_for(target.size(), [&](std::size_t gi) {
    const Model& g = target.flag(gi);
    Rational sum = 0;
    for_each_combination(free, a.level() - k, [&](const std::vector<int>& s) {
      if (const Rational* c = coefficient_at(a, g, with_prefix(k, s))) sum += *c;
    });
    out[gi] = sum / ways;
  });
  return out;
}

AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
  require_same_type(a, b);
  const int level = std::max(a.level(), b.level());
  AlgebraElement out = lift(a, level);
  const AlgebraElement bl = lift(b, level);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += bl[i];
  return out;
}

AlgebraElement operator-(const AlgebraElement& a) {
  AlgebraElement out = a;
  out *= Rational(-1);
  return out;
}

AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) { return a + (-b); }

AlgebraElement operator*(const Rational& s, const AlgebraElement& a) {
  AlgebraElement out = a;
  out *= s;
  return out;
}

AlgebraElement operator+(const AlgebraElement& a, const Rational& s) {
  return a + AlgebraElement::constant(a.type(), s);
}

AlgebraElement operator-(const AlgebraElement& a, const Rational& s) {
  return a - AlgebraElement::constant(a.type(), s);
}

AlgebraElement operator-(const Rational& s, const AlgebraElement& a) {
  return AlgebraElement::constant(a.type(), s) - a;
}

AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b) {
  require_same_type(a, b);
  const int k = a.type().size();
  const int level = a.level() + b.level() - k;
  AlgebraElement out(a.type(), level);
  const FlagBasis& target = out.basis();
  const mpz_class ways = binomial(level - k, a.level() - k);
  const auto free = range(k, level);
  parallel_for(target.size(), [&](std::size_t gi) {
    const Model& g = target.flag(gi);
    Rational sum = 0;
    for_each_combination(free, a.level() - k, [&](const std::vector<int>& s) {
      const Rational* x = coefficient_at(a, g, with_prefix(k, s));
      if (x == nullptr || *x == 0) return;
      std::vector<int> rest;
      std::set_difference(free.begin(), free.end(), s.begin(), s.end(), std::back_inserter(rest));
      const Rational* y = coefficient_at(b, g, with_prefix(k, rest));
      if (y != nullptr) sum += *x * *y;
    });
    out[gi] = sum / ways;
  });
  return out;
}

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) { return multiply(a, b); }

AlgebraElement average(const AlgebraElement& a, std::span<const int> keep) {
  const int k = a.type().size();
  const int kept = static_cast<int>(keep.size());
  std::vector<int> slot(static_cast<std::size_t>(k), -1);  // old label -> new label
  for (int t = 0; t < kept; ++t) {
    if (keep[t] < 0 || keep[t] >= k || slot[keep[t]] != -1) {
      throw FlagTypeError("invalid label subset for averaging");
    }
    slot[keep[t]] = t;
  }
  const FlagType target_type(induced(a.type().base(), keep));
  const int level = a.level();
  AlgebraElement out(target_type, level);
  const FlagBasis& target = out.basis();
  const mpz_class ways = falling_factorial(level - kept, k - kept);

  parallel_for(target.size(), [&](std::size_t mi) {
    const Model& m = target.flag(mi);
    // injective sequences of free vertices of m for the erased labels
    std::vector<int> pool = range(kept, level);
    Rational sum = 0;
    for_each_combination(pool, k - kept, [&](const std::vector<int>& chosen) {
      std::vector<int> perm = chosen;
      do {
        std::vector<int> order(static_cast<std::size_t>(k));
        std::size_t next = 0;
        for (int i = 0; i < k; ++i) order[i] = slot[i] >= 0 ? slot[i] : perm[next++];
        for (int v = kept; v < level; ++v) {
          if (std::find(perm.begin(), perm.end(), v) == perm.end()) order.push_back(v);
        }
        if (const Rational* c = coefficient_at(a, m, order)) sum += *c;
      } while (std::next_permutation(perm.begin(), perm.end()));
    });
    out[mi] = sum / ways;
  });
  return out;
}

Rational flag_density(const Flag& f, const Flag& g) {
  if (!(f.type() == g.type())) throw FlagTypeError("flags have different types");
  if (f.size() > g.size()) throw FlagTypeError("first flag is larger than the second");
  const int k = f.type().size();
  Rational hits = 0;
  mpz_class total = 0;
  for_each_combination(range(k, g.size()), f.size() - k, [&](const std::vector<int>& s) {
    ++total;
    if (canonical_form(induced(g.model(), with_prefix(k, s)), k).code == f.code()) hits += 1;
  });
  return hits / total;
}

std::vector<std::uint64_t> flag_counts(const FlagBasis& basis, const Model& g, mpz_class& total) {
  const int k = basis.type().size();
  const int level = basis.level();
  const int n = g.size();
  if (n < level) {
    throw EvaluationError("model has " + std::to_string(n) + " vertices, element needs at least " +
                          std::to_string(level));
  }
  if (g.theory() != basis.type().theory()) throw EvaluationError("model belongs to a different theory");
  if (!(encode(g, range(0, k), k) == basis.type().code())) {
    throw EvaluationError("labelled prefix of the model does not induce the element's type");
  }
  const int pick = level - k;
  total = binomial(n - k, pick);
  std::vector<std::uint64_t> counts(basis.size(), 0);

  auto lookup = [&](std::unordered_map<Code, std::size_t, CodeHash>& memo, const std::vector<int>& verts) {
    const Code raw = encode(g, verts, k);
    auto it = memo.find(raw);
    if (it != memo.end()) return it->second;
    const auto idx = basis.find(canonical_form(induced(g, verts), k).code);
    if (!idx) throw EvaluationError("a vertex subset induces a structure outside the theory");
    memo.emplace(raw, *idx);
    return *idx;
  };

  if (pick == 0) {
    std::unordered_map<Code, std::size_t, CodeHash> memo;
    counts[lookup(memo, range(0, k))] = 1;
    return counts;
  }
  // split by the first chosen free vertex
  const std::size_t firsts = static_cast<std::size_t>(n - k);
  std::vector<std::vector<std::uint64_t>> partial(firsts);
  parallel_for(firsts, [&](std::size_t fi) {
    const int first = k + static_cast<int>(fi);
    std::vector<std::uint64_t> local(basis.size(), 0);
    std::unordered_map<Code, std::size_t, CodeHash> memo;
    std::vector<int> verts = range(0, k);
    verts.push_back(first);
    const auto rest = range(first + 1, n);
    for_each_combination(rest, pick - 1, [&](const std::vector<int>& s) {
      verts.resize(static_cast<std::size_t>(k + 1));
      verts.insert(verts.end(), s.begin(), s.end());
      ++local[lookup(memo, verts)];
    });
    partial[fi] = std::move(local);
  });
  for (const auto& p : partial) {
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += p[i];
  }
  return counts;
}

Rational evaluate(const AlgebraElement& a, const Model& g) {
  mpz_class total;
  const auto counts = flag_counts(a.basis(), g, total);
  Rational sum = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] != 0 && a[i] != 0) sum += a[i] * mpz_class(static_cast<unsigned long>(counts[i]));
  }
  return sum / total;
}

}  // namespace tflag
