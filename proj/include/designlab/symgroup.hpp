#pragma once

// Permutations of {0, ..., n-1}, cycle statistics, genus, Catalan and Moebius
// numbers, and the genus census of S_n.

#include "designlab/exact.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace designlab {

class Permutation {
 public:
  Permutation() = default;

  explicit Permutation(std::vector<int> images) : images_(std::move(images)) {
    std::vector<char> seen(images_.size(), 0);
    for (int v : images_) {
      if (v < 0 || v >= static_cast<int>(images_.size()) || seen[v])
        throw std::invalid_argument("Permutation: images are not a bijection");
      seen[v] = 1;
    }
  }

  static Permutation identity(int n) {
    std::vector<int> im(n);
    std::iota(im.begin(), im.end(), 0);
    return Permutation(std::move(im), unchecked{});
  }

  /// Parses 1-indexed cycle notation such as "(1 2)(3 4 5)" on n symbols.
  static Permutation from_cycles(const std::string& text, int n) {
    std::vector<int> im(n);
    std::iota(im.begin(), im.end(), 0);
    std::vector<int> cyc;
    bool open = false;
    std::string num;
    auto flush_num = [&] {
      if (num.empty()) return;
      int v = std::stoi(num) - 1;
      if (v < 0 || v >= n) throw std::invalid_argument("cycle entry out of range");
      cyc.push_back(v);
      num.clear();
    };
    for (char c : text) {
      if (c == '(') {
        if (open) throw std::invalid_argument("nested '(' in cycle notation");
        open = true;
        cyc.clear();
      } else if (c == ')') {
        flush_num();
        if (!open) throw std::invalid_argument("unbalanced ')'");
        for (std::size_t i = 0; i < cyc.size(); ++i) im[cyc[i]] = cyc[(i + 1) % cyc.size()];
        open = false;
      } else if (c >= '0' && c <= '9') {
        num.push_back(c);
      } else if (c == ' ' || c == ',') {
        flush_num();
      } else {
        throw std::invalid_argument(std::string("unexpected character in cycle notation: ") + c);
      }
    }
    if (open) throw std::invalid_argument("unterminated cycle");
    return Permutation(std::move(im));
  }

  int degree() const { return static_cast<int>(images_.size()); }
  int operator()(int i) const { return images_[i]; }
  const std::vector<int>& images() const { return images_; }

  /// (a * b)(i) = a(b(i)): apply b first.
  friend Permutation operator*(const Permutation& a, const Permutation& b) {
    if (a.degree() != b.degree()) throw std::invalid_argument("degree mismatch in composition");
    std::vector<int> im(a.images_.size());
    for (std::size_t i = 0; i < im.size(); ++i) im[i] = a.images_[b.images_[i]];
    return Permutation(std::move(im), unchecked{});
  }

  Permutation inverse() const {
    std::vector<int> im(images_.size());
    for (std::size_t i = 0; i < im.size(); ++i) im[images_[i]] = static_cast<int>(i);
    return Permutation(std::move(im), unchecked{});
  }

  bool operator==(const Permutation&) const = default;
  auto operator<=>(const Permutation&) const = default;

  /// 1-indexed cycle notation; fixed points omitted, identity prints "()".
  std::string to_cycle_string() const {
    std::ostringstream os;
    std::vector<char> seen(images_.size(), 0);
    bool any = false;
    for (std::size_t i = 0; i < images_.size(); ++i) {
      if (seen[i] || images_[i] == static_cast<int>(i)) continue;
      os << '(';
      std::size_t j = i;
      bool first = true;
      while (!seen[j]) {
        seen[j] = 1;
        if (!first) os << ' ';
        os << j + 1;
        first = false;
        j = images_[j];
      }
      os << ')';
      any = true;
    }
    return any ? os.str() : "()";
  }

 private:
  struct unchecked {};
  Permutation(std::vector<int> images, unchecked) : images_(std::move(images)) {}
  std::vector<int> images_;
};

/// xi(sigma): number of disjoint cycles, fixed points included.
inline int cycle_count(const Permutation& p) {
  const auto& im = p.images();
  const int n = p.degree();
  std::uint64_t small_seen = 0;
  std::vector<char> seen;
  const bool small = n <= 64;
  if (!small) seen.assign(n, 0);
  int cycles = 0;
  for (int i = 0; i < n; ++i) {
    bool s = small ? (small_seen >> i) & 1u : seen[i];
    if (s) continue;
    ++cycles;
    int j = i;
    do {
      if (small) small_seen |= (std::uint64_t{1} << j);
      else seen[j] = 1;
      j = im[j];
    } while (j != i);
  }
  return cycles;
}

/// |sigma|: minimal number of transpositions whose product is sigma.
inline int transposition_length(const Permutation& p) { return p.degree() - cycle_count(p); }

/// Cycle lengths sorted non-increasing.
inline std::vector<int> cycle_type(const Permutation& p) {
  const auto& im = p.images();
  std::vector<char> seen(im.size(), 0);
  std::vector<int> lens;
  for (std::size_t i = 0; i < im.size(); ++i) {
    if (seen[i]) continue;
    int len = 0;
    std::size_t j = i;
    while (!seen[j]) {
      seen[j] = 1;
      ++len;
      j = im[j];
    }
    lens.push_back(len);
  }
  std::sort(lens.begin(), lens.end(), std::greater<>());
  return lens;
}

inline bool is_even(const Permutation& p) { return transposition_length(p) % 2 == 0; }

/// tau_{alpha,s}: s disjoint canonical alpha-cycles on s*alpha symbols.
inline Permutation canonical_cycles(int alpha, int s = 1) {
  if (alpha < 1 || s < 1) throw std::invalid_argument("canonical_cycles needs alpha, s >= 1");
  std::vector<int> im(alpha * s);
  for (int r = 0; r < s; ++r)
    for (int i = 0; i < alpha; ++i) im[r * alpha + i] = r * alpha + (i + 1) % alpha;
  return Permutation(std::move(im));
}

/// Genus relative to the full cycle: (alpha + 1 - xi(sigma) - xi(sigma tau)) / 2.
inline int genus(const Permutation& sigma, int alpha) {
  if (sigma.degree() != alpha) throw std::invalid_argument("genus: degree differs from alpha");
  const Permutation tau = canonical_cycles(alpha);
  return (alpha + 1 - cycle_count(sigma) - cycle_count(sigma * tau)) / 2;
}

/// Visits every element of S_n in lexicographic order.
template <class F>
void for_each_permutation(int n, F&& f) {
  std::vector<int> im(n);
  std::iota(im.begin(), im.end(), 0);
  do {
    f(Permutation(im));
  } while (std::next_permutation(im.begin(), im.end()));
}

inline std::vector<Permutation> all_permutations(int n) {
  std::vector<Permutation> out;
  for_each_permutation(n, [&](const Permutation& p) { out.push_back(p); });
  return out;
}

inline BigInt catalan(unsigned k) { return binomial(2 * k, k) / (k + 1); }

struct CatalanBounds {
  double lower;
  double upper;
};

/// 4^k / (sqrt(pi) (k+1)^{3/2}) < Cat_k < 4^k / (sqrt(pi) k^{3/2}) for k >= 1.
inline CatalanBounds catalan_bounds(unsigned k) {
  if (k == 0) throw std::invalid_argument("catalan_bounds: k must be >= 1");
  const double sp = std::sqrt(std::numbers::pi);
  const double p = std::pow(4.0, k);
  return {p / (sp * std::pow(k + 1.0, 1.5)), p / (sp * std::pow(static_cast<double>(k), 1.5))};
}

/// (-1)^{|sigma|} prod over cycles of Cat_{len-1}.
inline BigInt moebius(const Permutation& p) {
  BigInt r = 1;
  for (int len : cycle_type(p)) r *= catalan(len - 1);
  return transposition_length(p) % 2 ? BigInt(-r) : r;
}

struct GenusCensus {
  int degree = 0;
  std::map<int, BigInt> counts;

  BigInt total() const {
    BigInt t = 0;
    for (const auto& [g, c] : counts) t += c;
    return t;
  }
  BigInt at(int g) const {
    auto it = counts.find(g);
    return it == counts.end() ? BigInt(0) : it->second;
  }
};

enum class CensusMode { exact_formula, brute_force };

namespace detail {

// Falling factorial (n)_k.
inline BigInt falling(std::int64_t n, std::int64_t k) {
  BigInt r = 1;
  for (std::int64_t i = 0; i < k; ++i) r *= (n - i);
  return r;
}

inline void partitions_of(int g, int max_part, std::vector<int>& cur,
                          const std::function<void(const std::vector<int>&)>& f) {
  if (g == 0) {
    f(cur);
    return;
  }
  for (int p = std::min(g, max_part); p >= 1; --p) {
    cur.push_back(p);
    partitions_of(g - p, p, cur, f);
    cur.pop_back();
  }
}

}  // namespace detail

/// Coefficient a_{g,l} of the Goupil-Schaeffer formula.
inline Rational goupil_schaeffer_a(int g, int l) {
  if (g == 0) return l == 0 ? Rational(1) : Rational(0);
  if (l == 0) return 0;
  Rational sum = 0;
  std::vector<int> cur;
  detail::partitions_of(g, g, cur, [&](const std::vector<int>& parts) {
    if (static_cast<int>(parts.size()) != l) return;
    std::map<int, unsigned> mult;
    for (int p : parts) ++mult[p];
    BigInt den = 1;
    for (const auto& [j, c] : mult) den *= factorial(c) * ipow(BigInt(2 * j + 1), c);
    sum += Rational(BigInt(1), den);
  });
  return sum;
}

/// c_{g,n} by the Goupil-Schaeffer closed form.
inline BigInt genus_count_formula(int g, int n) {
  if (g < 0 || 2 * g > n - 1) return 0;
  Rational sum = 0;
  for (int g1 = 0; g1 <= g; ++g1) {
    const int g2 = g - g1;
    for (int l1 = 0; l1 <= g1; ++l1) {
      const Rational a1 = goupil_schaeffer_a(g1, l1);
      if (a1 == 0) continue;
      for (int l2 = 0; l2 <= g2; ++l2) {
        const Rational a2 = goupil_schaeffer_a(g2, l2);
        if (a2 == 0) continue;
        sum += a1 * a2 * Rational(detail::falling(n + 1 - 2 * g, l1 + l2)) *
               Rational(binomial(2 * n - 2 * g - l1 - l2, n - 2 * g1 - l1));
      }
    }
  }
  Rational pre(detail::falling(n + 1, 2 * g), BigInt(n + 1) * ipow(BigInt(2), 2 * g));
  Rational c = pre * sum;
  if (boost::multiprecision::denominator(c) != 1)
    throw std::logic_error("genus_count_formula produced a non-integer");
  return boost::multiprecision::numerator(c);
}

inline GenusCensus genus_census(int n, CensusMode mode) {
  if (n < 1) throw std::invalid_argument("genus_census: n must be >= 1");
  GenusCensus out;
  out.degree = n;
  if (mode == CensusMode::exact_formula) {
    for (int g = 0; 2 * g <= n - 1; ++g) out.counts[g] = genus_count_formula(g, n);
    return out;
  }
  if (n > 10) throw std::invalid_argument("genus_census: brute force is capped at n = 10");
  const Permutation tau = canonical_cycles(n);
  std::vector<std::uint64_t> tally(n + 1, 0);
  for_each_permutation(n, [&](const Permutation& s) {
    ++tally[(n + 1 - cycle_count(s) - cycle_count(s * tau)) / 2];
  });
  for (int g = 0; g <= n; ++g)
    if (tally[g]) out.counts[g] = BigInt(tally[g]);
  return out;
}

/// Number of permutations of S_t whose longest increasing subsequence is at most d.
/// Equals t! when t <= d; this is the frame-potential floor of a unitary t-design.
inline BigInt frame_potential_floor(int t, int d) {
  if (t <= d) return factorial(t);
  BigInt count = 0;
  for_each_permutation(t, [&](const Permutation& p) {
    std::vector<int> tails;
    for (int v : p.images()) {
      auto it = std::lower_bound(tails.begin(), tails.end(), v);
      if (it == tails.end()) tails.push_back(v);
      else *it = v;
    }
    if (static_cast<int>(tails.size()) <= d) ++count;
  });
  return count;
}

}  // namespace designlab
