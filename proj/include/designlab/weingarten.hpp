#pragma once

// Unitary Weingarten functions via the symmetric-group character expansion.

#include "designlab/exact.hpp"
#include "designlab/symgroup.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace designlab {

struct IntegerPartition {
  std::vector<int> parts;  // non-increasing, all >= 1

  IntegerPartition() = default;
  explicit IntegerPartition(std::vector<int> p) : parts(std::move(p)) {
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (parts[i] < 1) throw std::invalid_argument("partition parts must be positive");
      if (i && parts[i] > parts[i - 1]) throw std::invalid_argument("partition parts must be non-increasing");
    }
  }

  int weight() const {
    int w = 0;
    for (int p : parts) w += p;
    return w;
  }
  int length() const { return static_cast<int>(parts.size()); }
  bool operator==(const IntegerPartition&) const = default;
  auto operator<=>(const IntegerPartition&) const = default;
};

/// All partitions of n, largest first part first: (n), (n-1,1), ..., (1^n).
inline std::vector<IntegerPartition> partitions(int n) {
  if (n < 1) throw std::invalid_argument("partitions: n must be >= 1");
  std::vector<IntegerPartition> out;
  std::vector<int> cur;
  detail::partitions_of(n, n, cur, [&](const std::vector<int>& p) { out.emplace_back(p); });
  return out;
}

/// Index of a cycle type within partitions(n).
class ClassIndex {
 public:
  explicit ClassIndex(int n) : parts_(partitions(n)) {
    for (std::size_t i = 0; i < parts_.size(); ++i) index_[parts_[i].parts] = static_cast<int>(i);
  }
  int of(const Permutation& p) const { return index_.at(cycle_type(p)); }
  int of(const std::vector<int>& type) const { return index_.at(type); }
  const std::vector<IntegerPartition>& classes() const { return parts_; }
  std::size_t size() const { return parts_.size(); }

  /// n! / z_mu.
  static BigInt class_size(const IntegerPartition& mu) {
    std::map<int, unsigned> mult;
    for (int p : mu.parts) ++mult[p];
    BigInt z = 1;
    for (const auto& [j, c] : mult) z *= ipow(BigInt(j), c) * factorial(c);
    return factorial(mu.weight()) / z;
  }

 private:
  std::vector<IntegerPartition> parts_;
  std::map<std::vector<int>, int> index_;
};

namespace detail {

// Murnaghan-Nakayama on beta-sets. Removing a rim hook of length r moves one
// bead from b to b - r; the sign counts beads jumped over.
using MnMemo = std::map<std::pair<std::vector<int>, std::size_t>, long long>;

inline long long mn_recurse(std::vector<int> beta, const std::vector<int>& mu, std::size_t pos,
                            MnMemo& memo) {
  if (pos == mu.size()) return 1;
  std::sort(beta.begin(), beta.end());
  auto key = std::make_pair(beta, pos);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  const int r = mu[pos];
  long long total = 0;
  for (std::size_t i = 0; i < beta.size(); ++i) {
    const int b = beta[i];
    const int t = b - r;
    if (t < 0) continue;
    if (std::find(beta.begin(), beta.end(), t) != beta.end()) continue;
    int between = 0;
    for (int v : beta)
      if (v > t && v < b) ++between;
    std::vector<int> next = beta;
    next[i] = t;
    const long long sub = mn_recurse(std::move(next), mu, pos + 1, memo);
    total += (between % 2 ? -sub : sub);
  }
  memo.emplace(std::move(key), total);
  return total;
}

}  // namespace detail

/// chi^lambda evaluated on the class of cycle type mu.
inline long long sym_character(const IntegerPartition& lambda, const IntegerPartition& mu) {
  if (lambda.weight() != mu.weight()) throw std::invalid_argument("sym_character: weight mismatch");
  static std::mutex mtx;
  static std::map<std::pair<std::vector<int>, std::vector<int>>, long long> cache;
  auto key = std::make_pair(lambda.parts, mu.parts);
  {
    std::lock_guard lk(mtx);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const int l = lambda.length();
  std::vector<int> beta(l);
  for (int i = 0; i < l; ++i) beta[i] = lambda.parts[i] + (l - 1 - i);
  detail::MnMemo memo;
  const long long value = detail::mn_recurse(beta, mu.parts, 0, memo);
  std::lock_guard lk(mtx);
  cache.emplace(std::move(key), value);
  return value;
}

/// Dimension of the U(d) irrep labelled by lambda (hook-content formula).
inline BigInt unitary_irrep_dim(const IntegerPartition& lambda, int d) {
  if (d < 1) throw std::invalid_argument("unitary_irrep_dim: d must be >= 1");
  if (lambda.length() > d) return 0;
  std::vector<int> conj(lambda.parts.empty() ? 0 : lambda.parts[0], 0);
  for (int p : lambda.parts)
    for (int j = 0; j < p; ++j) ++conj[j];
  BigInt num = 1, den = 1;
  for (int i = 0; i < lambda.length(); ++i)
    for (int j = 0; j < lambda.parts[i]; ++j) {
      num *= (d + j - i);
      den *= (lambda.parts[i] - j) + (conj[j] - i) - 1;
    }
  return num / den;
}

/// Dimension of the S_n irrep labelled by lambda.
inline BigInt sym_irrep_dim(const IntegerPartition& lambda) {
  IntegerPartition id(std::vector<int>(lambda.weight(), 1));
  return BigInt(sym_character(lambda, id));
}

/// Wg(d, mu) for every class mu of S_alpha, in partitions(alpha) order.
inline std::vector<Rational> weingarten_table_uncached(int d, int alpha) {
  if (alpha < 1) throw std::invalid_argument("weingarten: alpha must be >= 1");
  if (d < alpha) throw std::domain_error("weingarten: requires d >= alpha");
  const auto lambdas = partitions(alpha);
  const BigInt f2 = factorial(alpha) * factorial(alpha);
  std::vector<Rational> out;
  out.reserve(lambdas.size());
  for (const auto& mu : lambdas) {
    Rational sum = 0;
    for (const auto& lambda : lambdas) {
      const BigInt dim = sym_irrep_dim(lambda);
      sum += Rational(dim * dim * sym_character(lambda, mu), unitary_irrep_dim(lambda, d));
    }
    out.push_back(sum / f2);
  }
  return out;
}

/// Process-wide table of Weingarten values keyed by (d, alpha).
/// Readers share the lock; a missing entry is computed outside the lock and
/// inserted under exclusive access.
class WeingartenCache {
 public:
  static WeingartenCache& instance() {
    static WeingartenCache c;
    return c;
  }

  const std::vector<Rational>& table(int d, int alpha) {
    const auto key = std::make_pair(d, alpha);
    {
      std::shared_lock lk(mtx_);
      if (auto it = tables_.find(key); it != tables_.end()) return it->second;
    }
    auto fresh = weingarten_table_uncached(d, alpha);
    std::unique_lock lk(mtx_);
    return tables_.try_emplace(key, std::move(fresh)).first->second;
  }

  const ClassIndex& classes(int alpha) {
    {
      std::shared_lock lk(mtx_);
      if (auto it = indices_.find(alpha); it != indices_.end()) return it->second;
    }
    ClassIndex fresh(alpha);
    std::unique_lock lk(mtx_);
    return indices_.try_emplace(alpha, std::move(fresh)).first->second;
  }

 private:
  std::shared_mutex mtx_;
  std::map<std::pair<int, int>, std::vector<Rational>> tables_;
  std::map<int, ClassIndex> indices_;
};

inline Rational weingarten(int d, const Permutation& sigma) {
  auto& cache = WeingartenCache::instance();
  const int alpha = sigma.degree();
  const auto& tbl = cache.table(d, alpha);
  return tbl[cache.classes(alpha).of(sigma)];
}

/// Haar integral of U_{i_1 j_1} ... U_{i_a j_a} conj(U_{i'_1 j'_1}) ... conj(U_{i'_a j'_a}):
/// sum over sigma, gamma with i_k = i'_{sigma(k)} and j_k = j'_{gamma(k)} of Wg(sigma gamma^-1).
inline Rational haar_monomial_integral(int d, const std::vector<int>& i, const std::vector<int>& j,
                                       const std::vector<int>& ip, const std::vector<int>& jp) {
  const int a = static_cast<int>(i.size());
  if (j.size() != i.size() || ip.size() != i.size() || jp.size() != i.size())
    throw std::invalid_argument("haar_monomial_integral: index lists differ in length");
  if (a == 0) return 1;
  std::vector<Permutation> rows, cols;
  for_each_permutation(a, [&](const Permutation& s) {
    bool ok_i = true, ok_j = true;
    for (int k = 0; k < a; ++k) {
      ok_i = ok_i && i[k] == ip[s(k)];
      ok_j = ok_j && j[k] == jp[s(k)];
    }
    if (ok_i) rows.push_back(s);
    if (ok_j) cols.push_back(s);
  });
  Rational sum = 0;
  for (const auto& s : rows)
    for (const auto& g : cols) sum += weingarten(d, s * g.inverse());
  return sum;
}

/// Leading asymptotic Moeb(sigma) / d^{alpha + |sigma|}.
inline double weingarten_asymptotic(int d, const Permutation& sigma) {
  if (d < sigma.degree()) throw std::domain_error("weingarten_asymptotic: requires d >= alpha");
  return to_double(moebius(sigma)) /
         std::pow(static_cast<double>(d), sigma.degree() + transposition_length(sigma));
}

/// Independent oracle: solves the class-reduced Gram system
/// sum_gamma d^{xi(sigma^-1 gamma)} Wg(gamma^-1) = delta_{sigma,e}
/// by exact Gaussian elimination.
inline std::vector<Rational> weingarten_gram_solve(int d, int alpha) {
  const ClassIndex idx(alpha);
  const std::size_t m = idx.size();
  const auto perms = all_permutations(alpha);
  std::vector<Permutation> reps(m);
  std::vector<char> have(m, 0);
  for (const auto& p : perms) {
    const int c = idx.of(p);
    if (!have[c]) {
      reps[c] = p;
      have[c] = 1;
    }
  }
  // Row i: representative sigma_i; column j: class of gamma^-1 (same as gamma).
  std::vector<std::vector<Rational>> a(m, std::vector<Rational>(m + 1, Rational(0)));
  for (std::size_t i = 0; i < m; ++i) {
    const Permutation sinv = reps[i].inverse();
    std::vector<BigInt> acc(m, BigInt(0));
    for (const auto& g : perms) acc[idx.of(g)] += ipow(BigInt(d), cycle_count(sinv * g));
    for (std::size_t j = 0; j < m; ++j) a[i][j] = Rational(acc[j]);
    a[i][m] = (reps[i] == Permutation::identity(alpha)) ? 1 : 0;
  }
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    while (piv < m && a[piv][col] == 0) ++piv;
    if (piv == m) throw std::domain_error("weingarten_gram_solve: singular Gram system");
    std::swap(a[piv], a[col]);
    const Rational inv = Rational(1) / a[col][col];
    for (std::size_t k = col; k <= m; ++k) a[col][k] *= inv;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const Rational f = a[r][col];
      for (std::size_t k = col; k <= m; ++k) a[r][k] -= f * a[col][k];
    }
  }
  std::vector<Rational> out(m);
  for (std::size_t i = 0; i < m; ++i) out[i] = a[i][m];
  return out;
}

/// a_k = 1 / (1 - 6 k^{7/2} / d^2); meaningful when d > sqrt(6) k^{7/4}.
inline double wg_bound_a(int k, double d) { return 1.0 / (1.0 - 6.0 * std::pow(k, 3.5) / (d * d)); }

inline bool wg_bound_regime(int k, double d) { return d > std::sqrt(6.0) * std::pow(k, 1.75); }

/// Upper bound on d^k |Wg(sigma, d)| as a function of |sigma|.
inline double wg_magnitude_bound(int k, double d, int length) {
  const double a = wg_bound_a(k, d);
  if (length <= 1) return a * std::pow(1.0 / d, length);
  const double base = a * std::pow(4.0 / d, length);
  return std::min(base / (std::sqrt(std::numbers::pi) * std::pow(length, 1.5)), base / 8.0);
}

/// Upper bound on sum over even sigma of d^k Wg(sigma, d).
inline double wg_even_sum_bound(int k, double d) {
  return wg_bound_a(k, d) / 8.0 * (7.0 + std::cosh(2.0 * k * (k - 1) / d));
}

}  // namespace designlab
