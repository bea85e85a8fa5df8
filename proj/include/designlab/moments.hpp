#pragma once

// Exact Haar moments of tr rho^alpha in the Choi and bipartite-state settings,
// plus the closed-form bounds that accompany them.

#include "designlab/exact.hpp"
#include "designlab/symgroup.hpp"
#include "designlab/weingarten.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "designlab/entropy.hpp"

namespace designlab {

inline constexpr int kMaxChoiDegree = 6;
inline constexpr int kMaxStateDegree = 8;

/// D_[t] = binom(d + t - 1, t).
inline BigInt sym_subspace_dim(int d, int t) {
  if (d < 1 || t < 1) throw std::invalid_argument("sym_subspace_dim: d and t must be >= 1");
  return binomial(static_cast<std::int64_t>(d) + t - 1, t);
}

namespace detail {

struct ChoiCountKey {
  std::uint8_t a, b, c, e, cls;
  bool operator==(const ChoiCountKey&) const = default;
};

struct ChoiCountKeyHash {
  std::size_t operator()(const ChoiCountKey& k) const {
    return (((static_cast<std::size_t>(k.a) * 16 + k.b) * 16 + k.c) * 16 + k.e) * 64 + k.cls;
  }
};

// Number of (sigma, gamma) in S_n x S_n with
// xi(sigma tau) = a, xi(sigma) = b, xi(gamma tau) = c, xi(gamma) = e and
// sigma gamma^{-1} in class cls. Depends only on (alpha, s), so it is built once.
struct ChoiCountTable {
  std::vector<std::pair<ChoiCountKey, std::uint64_t>> entries;
};

inline ChoiCountTable build_choi_counts(int alpha, int s, int workers) {
  const int n = alpha * s;
  const Permutation tau = canonical_cycles(alpha, s);
  const auto perms = all_permutations(n);
  const ClassIndex idx(n);
  struct Info {
    std::uint8_t xt, x;
  };
  std::vector<Info> info(perms.size());
  std::vector<Permutation> inv(perms.size());
  for (std::size_t i = 0; i < perms.size(); ++i) {
    info[i] = {static_cast<std::uint8_t>(cycle_count(perms[i] * tau)), static_cast<std::uint8_t>(cycle_count(perms[i]))};
    inv[i] = perms[i].inverse();
  }
  workers = std::max(1, workers);
  std::vector<std::unordered_map<ChoiCountKey, std::uint64_t, ChoiCountKeyHash>> partial(workers);
  auto run = [&](int w) {
    auto& local = partial[w];
    for (std::size_t i = w; i < perms.size(); i += workers)
      for (std::size_t j = 0; j < perms.size(); ++j) {
        const int cls = idx.of(perms[i] * inv[j]);
        ++local[{info[i].xt, info[i].x, info[j].xt, info[j].x, static_cast<std::uint8_t>(cls)}];
      }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  // Integer counts merge commutatively; sort for a deterministic summation order.
  std::unordered_map<ChoiCountKey, std::uint64_t, ChoiCountKeyHash> merged;
  for (const auto& p : partial)
    for (const auto& [k, v] : p) merged[k] += v;
  ChoiCountTable t;
  t.entries.assign(merged.begin(), merged.end());
  std::sort(t.entries.begin(), t.entries.end(), [](const auto& x, const auto& y) {
    return std::tie(x.first.a, x.first.b, x.first.c, x.first.e, x.first.cls) <
           std::tie(y.first.a, y.first.b, y.first.c, y.first.e, y.first.cls);
  });
  return t;
}

inline const ChoiCountTable& choi_counts(int alpha, int s, int workers = 1) {
  static std::mutex mtx;
  static std::map<std::pair<int, int>, ChoiCountTable> tables;
  std::lock_guard lk(mtx);
  auto key = std::make_pair(alpha, s);
  if (auto it = tables.find(key); it != tables.end()) return it->second;
  return tables.emplace(key, build_choi_counts(alpha, s, workers)).first->second;
}

// Number of sigma in S_alpha with xi(sigma tau) = a and xi(sigma) = b, keyed (a, b).
inline const std::map<std::pair<int, int>, std::uint64_t>& state_counts(int alpha) {
  static std::mutex mtx;
  static std::map<int, std::map<std::pair<int, int>, std::uint64_t>> tables;
  std::lock_guard lk(mtx);
  if (auto it = tables.find(alpha); it != tables.end()) return it->second;
  std::map<std::pair<int, int>, std::uint64_t> t;
  const Permutation tau = canonical_cycles(alpha);
  for_each_permutation(alpha, [&](const Permutation& s) { ++t[{cycle_count(s * tau), cycle_count(s)}]; });
  return tables.emplace(alpha, std::move(t)).first->second;
}

}  // namespace detail

/// Haar average of (tr rho_AC^alpha)^s for the Choi state of a d-dimensional unitary.
inline Rational haar_choi_moment_power(const ChoiPartition& p, int alpha, int s, int workers = 1) {
  if (alpha < 1 || s < 1) throw std::invalid_argument("haar_choi_moment: alpha and s must be >= 1");
  const int n = alpha * s;
  if (n > kMaxChoiDegree) throw std::invalid_argument("haar_choi_moment: s * alpha exceeds the cap of 6");
  const int d = p.d();
  if (d < n) throw std::domain_error("haar_choi_moment: Weingarten domain requires d >= s * alpha");
  const auto& wg = WeingartenCache::instance().table(d, n);
  const auto& counts = detail::choi_counts(alpha, s, workers);
  std::vector<BigInt> pa(n + 1), pb(n + 1), pc(n + 1), pd(n + 1);
  for (int k = 0; k <= n; ++k) {
    pa[k] = ipow(BigInt(p.dA), k);
    pb[k] = ipow(BigInt(p.dB), k);
    pc[k] = ipow(BigInt(p.dC), k);
    pd[k] = ipow(BigInt(p.dD), k);
  }
  // Group the integer weights by class first, then multiply by Wg once per class.
  std::vector<BigInt> by_class(wg.size(), BigInt(0));
  for (const auto& [k, cnt] : counts.entries)
    by_class[k.cls] += BigInt(cnt) * pa[k.a] * pb[k.b] * pc[k.c] * pd[k.e];
  Rational sum = 0;
  for (std::size_t c = 0; c < wg.size(); ++c) sum += Rational(by_class[c]) * wg[c];
  return sum / Rational(ipow(BigInt(d), n));
}

inline Rational haar_choi_moment(const ChoiPartition& p, int alpha, int workers = 1) {
  return haar_choi_moment_power(p, alpha, 1, workers);
}

/// Haar average of tr rho_A^alpha for a random pure state on C^{d_A} (x) C^{d_B}.
inline Rational haar_state_moment(int dA, int dB, int alpha) {
  if (alpha < 1 || alpha > kMaxStateDegree) throw std::invalid_argument("haar_state_moment: alpha must lie in [1, 8]");
  if (dA < 1 || dB < 1) throw std::invalid_argument("haar_state_moment: dimensions must be positive");
  BigInt sum = 0;
  for (const auto& [ab, cnt] : detail::state_counts(alpha))
    sum += BigInt(cnt) * ipow(BigInt(dA), ab.first) * ipow(BigInt(dB), ab.second);
  return Rational(sum, factorial(alpha) * sym_subspace_dim(dA * dB, alpha));
}

/// Closed forms used as references.
inline Rational choi_second_moment_closed(int d) { return Rational(2, d + 1); }

inline Rational choi_third_moment_closed(int d) {
  const BigInt D(d);
  return Rational(5 * D * D * D - 7 * D * D - 6 * D + 2, D * D * (D + 1) * (D * D - 4));
}

inline Rational lubkin_purity(int dA, int dB) { return Rational(dA + dB, dA * dB + 1); }

inline Rational state_moment_closed_equal(int d, int alpha) {
  const BigInt D(d), D2 = D * D;
  switch (alpha) {
    case 2: return Rational(2 * D, D2 + 1);
    case 3: return Rational(5 * D2 + 1, (D2 + 1) * (D2 + 2));
    case 4: return Rational(14 * D2 * D + 10 * D, (D2 + 1) * (D2 + 2) * (D2 + 3));
    default: throw std::invalid_argument("state_moment_closed_equal: alpha must be 2, 3 or 4");
  }
}

/// (1 / (1 - alpha)) log2(moment): Jensen floor on the averaged Renyi entropy.
inline double jensen_renyi_floor(double moment, double alpha) {
  if (!(moment > 0)) throw std::invalid_argument("jensen_renyi_floor: moment must be positive");
  if (!(alpha > 1)) throw std::invalid_argument("jensen_renyi_floor: alpha must exceed 1");
  return std::log2(moment) / (1.0 - alpha);
}

/// Average von Neumann entropy of a Haar-random reduced state, in bits:
/// (sum_{j = d_B + 1}^{d_A d_B} 1/j - (d_A - 1) / (2 d_B)) / ln 2.
inline double page_average_entropy(int dA, int dB) {
  if (dA < 1 || dB < 1 || dA > dB) throw std::invalid_argument("page_average_entropy: need 1 <= d_A <= d_B");
  double h = 0;
  for (long long j = static_cast<long long>(dA) * dB; j > dB; --j) h += 1.0 / static_cast<double>(j);
  return (h - (dA - 1.0) / (2.0 * dB)) / std::numbers::ln2;
}

enum class Setting { choi, state };

struct MomentQuery {
  Setting setting = Setting::choi;
  ChoiPartition choi;  // used when setting == choi
  int dA = 1, dB = 1;  // used when setting == state
  int alpha = 2;
  int s = 1;

  void validate() const {
    if (alpha < 1 || s < 1) throw std::invalid_argument("MomentQuery: alpha and s must be >= 1");
    const int cap = setting == Setting::choi ? kMaxChoiDegree : kMaxStateDegree;
    if (s * alpha > cap) throw std::invalid_argument("MomentQuery: degree s * alpha above cap");
  }
};

inline Rational exact_moment(const MomentQuery& q, int workers = 1) {
  q.validate();
  if (q.setting == Setting::choi) return haar_choi_moment_power(q.choi, q.alpha, q.s, workers);
  if (q.s != 1) throw std::invalid_argument("exact_moment: state setting supports s = 1 only");
  return haar_state_moment(q.dA, q.dB, q.alpha);
}

struct BoundReport {
  std::string name;
  double value = 0;
  bool preconditions_met = false;
  std::string location;  // short description of the statement the value comes from
};

/// h(q) = 1 + 2q / (3(1 - q)), finite for q < 1.
inline double h_of_q(double q) { return 1.0 + 2.0 * q / (3.0 * (1.0 - q)); }

/// m_d = min{7, 4 (8 sqrt d)^{1 / sqrt d}}.
inline double min_entropy_constant(double d) {
  const double r = std::sqrt(d);
  return std::min(7.0, 4.0 * std::pow(8.0 * r, 1.0 / r));
}

/// Non-asymptotic upper bound on the Haar average of tr rho_AC^alpha
/// (equal partitions), valid when d > sqrt(6) alpha^{7/4}.
inline BoundReport choi_trace_bound(int d, int alpha) {
  BoundReport r{"choi_trace_upper", 0, false, "non-asymptotic Haar Choi trace bound (d > sqrt6 alpha^{7/4})"};
  const double q = std::pow(alpha, 3) / (32.0 * d * d);
  r.preconditions_met = alpha >= 2 && wg_bound_regime(alpha, d) && q < 1;
  if (!r.preconditions_met) {
    r.value = std::nan("");
    return r;
  }
  r.value = wg_bound_a(alpha, d) * to_double(catalan(alpha)) * std::pow(d, 1.0 - alpha) / 8.0 * h_of_q(q) *
            (7.0 + std::cosh(2.0 * alpha * (alpha - 1) / static_cast<double>(d)));
  return r;
}

inline BoundReport choi_renyi_floor(int d, int alpha) {
  BoundReport t = choi_trace_bound(d, alpha);
  BoundReport r{"choi_renyi_lower", std::nan(""), t.preconditions_met, "Jensen floor from the non-asymptotic Choi trace bound"};
  if (t.preconditions_met) r.value = jensen_renyi_floor(t.value, alpha);
  return r;
}

/// Cycle-sum bound: sum_sigma d_A^{xi(sigma tau)} d_B^{xi(sigma)} <= h(q) Cat d_A d_B^alpha.
/// Returned normalised as an upper bound on E tr rho_A^alpha ~ h(q) Cat d_A^{1 - alpha}.
inline BoundReport state_trace_bound(int dA, int dB, int alpha) {
  BoundReport r{"state_trace_upper", std::nan(""), false, "h(q) cycle-sum bound on the averaged state moment, q = alpha^3/(32 d_B^2)"};
  const double q = std::pow(alpha, 3) / (32.0 * dB * dB);
  r.preconditions_met = dA <= dB && q < 1;
  if (r.preconditions_met) r.value = h_of_q(q) * to_double(catalan(alpha)) * std::pow(dA, 1.0 - alpha);
  return r;
}

/// The explicit Renyi floor log d_A - (2 alpha - 1.5 log alpha + log h - 0.5 log pi) / (alpha - 1).
inline BoundReport state_renyi_floor_h(int dA, int dB, int alpha) {
  BoundReport r{"state_renyi_lower_h", std::nan(""), false, "Renyi floor from the h(q) state bound with the Catalan upper estimate"};
  const double q = std::pow(alpha, 3) / (32.0 * dB * dB);
  r.preconditions_met = dA <= dB && q < 1 && alpha >= 2;
  if (r.preconditions_met)
    r.value = std::log2(dA) - (2.0 * alpha - 1.5 * std::log2(alpha) + std::log2(h_of_q(q)) - 0.5 * std::log2(std::numbers::pi)) /
                                  (alpha - 1.0);
  return r;
}

/// Cycle-sum bound in the Choi setting: sum_{gamma} d^{xi(gamma tau) + xi(gamma)} <= h(q) Cat d^{alpha + 1}.
inline BoundReport choi_cycle_sum_bound(int d, int alpha) {
  BoundReport r{"choi_cycle_sum_upper", std::nan(""), false, "h(q) cycle-sum bound, q = alpha^3/(32 d^2)"};
  const double q = std::pow(alpha, 3) / (32.0 * d * d);
  r.preconditions_met = q < 1;
  if (r.preconditions_met) r.value = h_of_q(q) * to_double(catalan(alpha)) * std::pow(d, alpha + 1.0);
  return r;
}

inline BoundReport haar_norm_bound(int d) {
  return {"choi_norm_upper", min_entropy_constant(d) / d, true, "Haar bound on E||rho_AC||: m_d / d"};
}

inline BoundReport haar_min_entropy_floor(int d) {
  return {"choi_min_entropy_lower", std::log2(static_cast<double>(d)) - std::log2(min_entropy_constant(d)), true,
          "Haar floor on E S_min(rho_AC): log d - log m_d"};
}

/// Design of order ceil(log d / a) <= sqrt(d)/2 gives E S_min >= log d - 2 - a.
inline BoundReport log_design_min_entropy_floor(int d, double a) {
  BoundReport r{"log_design_min_entropy_lower", std::log2(static_cast<double>(d)) - 2.0 - a, false,
                "O(log d)-design min-entropy floor for Choi states: log d - 2 - a"};
  const double order = std::ceil(std::log2(static_cast<double>(d)) / a);
  r.preconditions_met = a > 0 && order >= 1 && order <= std::sqrt(static_cast<double>(d)) / 2.0;
  return r;
}

/// State version: order ceil(log d_A / a) <= (16 d_B^2)^{1/3} with 0 < a <= 1.
inline BoundReport log_design_state_min_entropy_floor(int dA, int dB, double a) {
  BoundReport r{"log_design_state_min_entropy_lower", std::log2(static_cast<double>(dA)) - 2.0 - a, false,
                "O(log d_A)-design min-entropy floor for states: log d_A - 2 - a"};
  const double order = std::ceil(std::log2(static_cast<double>(dA)) / a);
  r.preconditions_met = a > 0 && a <= 1 && order >= 1 && order <= std::cbrt(16.0 * dB * dB);
  return r;
}

inline BoundReport state_renyi_floor_gap2(int dA, int dB) {
  return {"state_renyi_lower_2", std::log2(static_cast<double>(dA)) - 2.0, dA <= dB,
          "Haar state Renyi floor valid for every order: log d_A - 2"};
}

/// log d_A - 2 log(1 + sqrt(d_A/d_B)) - log c, c = 2 for complex Hilbert spaces.
inline BoundReport state_renyi_floor_ratio(int dA, int dB) {
  const double r = std::sqrt(static_cast<double>(dA) / dB);
  return {"state_renyi_lower_ratio", std::log2(static_cast<double>(dA)) - 2.0 * std::log2(1.0 + r) - 1.0, dA <= dB,
          "Haar state Renyi floor: log d_A - 2 log(1 + sqrt(d_A/d_B)) - log 2"};
}

inline BoundReport state_renyi_floor_ratio_weak(int dA, int dB) {
  const double r = std::sqrt(static_cast<double>(dA) / dB);
  return {"state_renyi_lower_ratio_weak", std::log2(static_cast<double>(dA)) - 2.0 / std::numbers::ln2 * r - 1.0, dA <= dB,
          "Haar state Renyi floor, linearised: log d_A - (2/ln2) sqrt(d_A/d_B) - log 2"};
}

/// E sqrt||rho_A|| <= sqrt(2) (1/sqrt(d_A) + 1/sqrt(d_B)).
inline BoundReport root_norm_bound(int dA, int dB) {
  return {"state_root_norm_upper", std::sqrt(2.0) * (1.0 / std::sqrt(dA) + 1.0 / std::sqrt(dB)), true,
          "Haar state bound on E sqrt(||rho_A||)"};
}

/// eps-m-approximate alpha-design: moment <= Haar + d^alpha eps.
inline BoundReport m_approx_trace_bound(const Rational& haar, int d, int alpha, double eps) {
  return {"m_approx_trace_upper", to_double(haar) + std::pow(d, alpha) * eps, eps >= 0,
          "monomial-approximate design: Haar moment + d^alpha eps"};
}

inline BoundReport m_approx_renyi_floor(const Rational& haar, int d, int alpha, double eps) {
  BoundReport t = m_approx_trace_bound(haar, d, alpha, eps);
  return {"m_approx_renyi_lower", jensen_renyi_floor(t.value, alpha), t.preconditions_met && alpha >= 2,
          "Jensen floor of the monomial-approximate trace bound"};
}

/// Leading large-d entropy penalty d^{2 alpha - 1} eps / ((alpha - 1) Cat ln 2).
inline BoundReport m_approx_asymptotic_penalty(int d, int alpha, double eps) {
  return {"m_approx_entropy_penalty",
          std::pow(d, 2.0 * alpha - 1.0) * eps / ((alpha - 1.0) * to_double(catalan(alpha)) * std::numbers::ln2), alpha >= 2,
          "leading entropy penalty of a monomial-approximate design"};
}

/// lambda-FO-approximate alpha-design: Choi moment <= Haar + lambda / d^alpha.
inline BoundReport fo_approx_trace_bound(const Rational& haar, int d, int alpha, double lambda) {
  return {"fo_approx_trace_upper", to_double(haar) + lambda / std::pow(d, alpha), lambda >= 0,
          "frame-operator-approximate design: Haar moment + lambda / d^alpha"};
}

/// State version: moment <= Haar + lambda / D_[alpha].
inline BoundReport fo_approx_state_trace_bound(const Rational& haar, int dA, int dB, int alpha, double lambda) {
  return {"fo_approx_state_trace_upper", to_double(haar) + lambda / to_double(sym_subspace_dim(dA * dB, alpha)), lambda >= 0,
          "frame-operator-approximate state design: Haar moment + lambda / D_[alpha]"};
}

/// Frame-potential floor of a unitary t-design on C^d; t! when t <= d.
inline BoundReport frame_potential_floor_report(int t, int d) {
  return {"frame_potential_floor", to_double(frame_potential_floor(t, d)), t >= 1 && d >= 1,
          t <= d ? "unitary design frame potential floor t!" : "unitary design frame potential floor (LIS count, t > d)"};
}

/// Every bound that applies to the query. Unmet preconditions are flagged, not thrown.
inline std::vector<BoundReport> bound_suite(const MomentQuery& q, double eps = 0.0, double lambda = 0.0) {
  q.validate();
  std::vector<BoundReport> out;
  const int a = q.alpha;
  if (q.setting == Setting::choi) {
    const int d = q.choi.d();
    const bool equal = q.choi.dA == q.choi.dC && q.choi.dB == q.choi.dD;
    auto t = choi_trace_bound(d, a);
    auto f = choi_renyi_floor(d, a);
    t.preconditions_met = t.preconditions_met && equal;
    f.preconditions_met = f.preconditions_met && equal;
    out.push_back(t);
    out.push_back(f);
    out.push_back(choi_cycle_sum_bound(d, a));
    out.push_back(haar_norm_bound(d));
    out.push_back(haar_min_entropy_floor(d));
    out.push_back(log_design_min_entropy_floor(d, 1.0));
    if (d >= a && a <= kMaxChoiDegree) {
      const Rational haar = haar_choi_moment(q.choi, a);
      out.push_back(m_approx_trace_bound(haar, d, a, eps));
      if (a >= 2) out.push_back(m_approx_renyi_floor(haar, d, a, eps));
      out.push_back(fo_approx_trace_bound(haar, d, a, lambda));
    }
    if (a >= 2) out.push_back(m_approx_asymptotic_penalty(d, a, eps));
    out.push_back(frame_potential_floor_report(a, d));
  } else {
    out.push_back(state_trace_bound(q.dA, q.dB, a));
    out.push_back(state_renyi_floor_h(q.dA, q.dB, a));
    out.push_back(state_renyi_floor_gap2(q.dA, q.dB));
    out.push_back(state_renyi_floor_ratio(q.dA, q.dB));
    out.push_back(state_renyi_floor_ratio_weak(q.dA, q.dB));
    out.push_back(root_norm_bound(q.dA, q.dB));
    out.push_back(log_design_state_min_entropy_floor(q.dA, q.dB, 1.0));
    const Rational haar = haar_state_moment(q.dA, q.dB, a);
    out.push_back(fo_approx_state_trace_bound(haar, q.dA, q.dB, a, lambda));
  }
  return out;
}

}  // namespace designlab
