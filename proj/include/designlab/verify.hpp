#pragma once

// Invariant suites run by `designlab verify`. Each check records what it
// tested and whether it held.

#include "designlab/ensembles.hpp"
#include "designlab/entropy.hpp"
#include "designlab/exact.hpp"
#include "designlab/moments.hpp"
#include "designlab/symgroup.hpp"
#include "designlab/weingarten.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

namespace designlab {

struct Check {
  std::string suite;
  std::string name;
  bool passed = false;
  std::string detail;
  std::string provenance;  // exact | bound | monte-carlo
};

struct VerifyOptions {
  std::uint64_t seed = kDefaultSeed;
  int workers = 1;
  double tolerance_scale = 1.0;  // multiplies Monte Carlo bands
};

namespace detail {

inline Check make_check(std::string suite, std::string name, bool ok, std::string detail, std::string prov) {
  return {std::move(suite), std::move(name), ok, std::move(detail), std::move(prov)};
}

}  // namespace detail

inline std::vector<Check> verify_combinatorics() {
  std::vector<Check> out;
  const std::string S = "combinatorics";
  for (int a = 1; a <= 8; ++a) {
    const Permutation tau = canonical_cycles(a);
    bool ineq = true, parity = true;
    std::uint64_t sat = 0;
    for_each_permutation(a, [&](const Permutation& s) {
      const int v = cycle_count(s) + cycle_count(s * tau);
      ineq = ineq && v <= a + 1;
      parity = parity && (v % 2) == ((a + 1) % 2);
      if (v == a + 1) ++sat;
    });
    out.push_back(detail::make_check(S, "cycle_lemma_alpha_" + std::to_string(a), ineq && parity && BigInt(sat) == catalan(a),
                                     "saturators " + std::to_string(sat) + ", Cat = " + catalan(a).str(), "exact"));
  }
  for (int a = 1; a <= 4; ++a)
    for (int s = 2; s * a <= 8; ++s) {
      const Permutation tau = canonical_cycles(a, s);
      bool ineq = true;
      std::uint64_t sat = 0;
      for_each_permutation(a * s, [&](const Permutation& p) {
        const int v = cycle_count(p) + cycle_count(p * tau);
        ineq = ineq && v <= a * s + s;
        if (v == a * s + s) ++sat;
      });
      const BigInt want = ipow(catalan(a), s);
      out.push_back(detail::make_check(S, "cycle_lemma_power_a" + std::to_string(a) + "_s" + std::to_string(s),
                                       ineq && BigInt(sat) == want, "saturators " + std::to_string(sat) + ", Cat^s = " + want.str(),
                                       "exact"));
    }
  {
    bool ok = true;
    for (int a = 1; a <= 8 && ok; ++a)
      for_each_permutation(a, [&](const Permutation& p) {
        const int len = transposition_length(p);
        if (len == 0) {
          ok = ok && moebius(p) == 1;
          return;
        }
        const BigInt m = abs(moebius(p));
        ok = ok && m >= 1 && m <= catalan(len);
        bool transpositions = true;
        for (int c : cycle_type(p)) transpositions = transpositions && c <= 2;
        ok = ok && ((m == 1) == transpositions);
      });
    out.push_back(detail::make_check(S, "moebius_bounds_alpha_le_8", ok, "1 <= |Moeb| <= Cat_{|sigma|}, equality iff disjoint transpositions", "exact"));
  }
  for (int n = 1; n <= 9; ++n) {
    const auto f = genus_census(n, CensusMode::exact_formula);
    const auto b = genus_census(n, CensusMode::brute_force);
    const bool ok = f.counts == b.counts && f.at(0) == catalan(n) && f.total() == factorial(n);
    out.push_back(detail::make_check(S, "genus_census_n_" + std::to_string(n), ok, "formula matches enumeration", "exact"));
  }
  {
    bool ok = true;
    for (int n = 2; n <= 10; ++n) {
      const BigInt c0 = genus_count_formula(0, n);
      for (int g = 1; 2 * g <= n - 1; ++g)
        ok = ok && 3 * ipow(BigInt(32), g) * genus_count_formula(g, n) <= 2 * ipow(BigInt(n), 3 * g) * c0;
    }
    out.push_back(detail::make_check(S, "genus_ratio_bound_n_le_10", ok, "c_g / c_0 <= (2/3)(n^3/32)^g", "bound"));
  }
  {
    bool ok = true;
    for (int n = 1; n <= 30; ++n)
      for (int j = 0; j <= n; ++j)
        for (int k = 0; k < 2 * n && k <= n + j; ++k) {
          const BigInt lhs = binomial(2 * n - k, n - j);
          const BigInt c = binomial(2 * n, n);
          ok = ok && lhs * lhs * ipow(BigInt(4), k) * (n - k / 2) <= BigInt(n) * c * c;
        }
    out.push_back(detail::make_check(S, "binomial_ratio_bound_n_le_30", ok, "checked exactly after squaring", "bound"));
  }
  {
    bool ok = true;
    for (unsigned k = 1; k <= 30; ++k) {
      const auto b = catalan_bounds(k);
      const double c = to_double(catalan(k));
      ok = ok && b.lower < c && c < b.upper;
    }
    out.push_back(detail::make_check(S, "catalan_bounds_k_le_30", ok, "4^k/(sqrt(pi)(k+1)^1.5) < Cat_k < 4^k/(sqrt(pi)k^1.5)", "bound"));
  }
  return out;
}

inline std::vector<Check> verify_weingarten() {
  std::vector<Check> out;
  const std::string S = "weingarten";
  for (int a = 1; a <= 5; ++a) {
    bool ok = true;
    for (int d = a; d <= 12; ++d) ok = ok && weingarten_gram_solve(d, a) == WeingartenCache::instance().table(d, a);
    out.push_back(detail::make_check(S, "gram_inverse_alpha_" + std::to_string(a), ok, "character sum equals Gram solution, d in [alpha, 12]", "exact"));
  }
  {
    bool ok = true;
    for (int d = 3; d <= 12; ++d) {
      const Rational D(d), D2 = D * D;
      const auto& w2 = WeingartenCache::instance().table(d, 2);  // (2), (1,1)
      ok = ok && w2[1] == 1 / (D2 - 1) && w2[0] == -1 / (D * (D2 - 1));
      ok = ok && D2 * w2[1] + D * w2[0] == 1;
      const auto& w3 = WeingartenCache::instance().table(d, 3);  // (3), (2,1), (1,1,1)
      ok = ok && w3[2] == (D2 - 2) / (D * (D2 - 1) * (D2 - 4)) && w3[1] == -1 / ((D2 - 1) * (D2 - 4)) &&
           w3[0] == 2 / (D * (D2 - 1) * (D2 - 4));
    }
    out.push_back(detail::make_check(S, "closed_forms_s2_s3", ok, "d in [3, 12]", "exact"));
  }
  {
    bool cls = true, sign = true;
    for (int a = 1; a <= 5; ++a) {
      const auto perms = all_permutations(a);
      for (int d = a; d <= a + 3; ++d)
        for (const auto& s : perms) {
          const Rational w = weingarten(d, s);
          sign = sign && (is_even(s) ? w > 0 : w < 0);
          for (const auto& g : perms) cls = cls && weingarten(d, g * s * g.inverse()) == w;
        }
    }
    out.push_back(detail::make_check(S, "class_function_alpha_le_5", cls, "Wg(g s g^-1) = Wg(s)", "exact"));
    out.push_back(detail::make_check(S, "sign_rule_alpha_le_5", sign, "Wg > 0 on even, < 0 on odd permutations", "exact"));
  }
  {
    bool sum_ok = true, mag_ok = true, cm_ok = true;
    int cases = 0;
    for (int k = 1; k <= 5; ++k) {
      const auto perms = all_permutations(k);
      for (int d = k; d <= 64; ++d) {
        if (!wg_bound_regime(k, d)) continue;
        ++cases;
        const double dk = std::pow(static_cast<double>(d), k);
        double even_sum = 0;
        for (const auto& s : perms) {
          const double w = to_double(weingarten(d, s));
          if (is_even(s)) even_sum += dk * w;
          const int len = transposition_length(s);
          mag_ok = mag_ok && dk * std::abs(w) <= wg_magnitude_bound(k, d, len) * (1 + 1e-12);
          const double ratio = dk * std::pow(static_cast<double>(d), len) * w / to_double(moebius(s));
          cm_ok = cm_ok && ratio >= 1.0 / (1.0 - (k - 1.0) / (static_cast<double>(d) * d)) * (1 - 1e-12) &&
                  ratio <= wg_bound_a(k, d) * (1 + 1e-12);
        }
        sum_ok = sum_ok && even_sum <= wg_even_sum_bound(k, d);
      }
    }
    out.push_back(detail::make_check(S, "even_sum_bound", sum_ok, std::to_string(cases) + " (k, d) cases, k <= 5, d <= 64", "bound"));
    out.push_back(detail::make_check(S, "magnitude_bound", mag_ok, "d^k |Wg| against the |sigma|-dependent bound", "bound"));
    out.push_back(detail::make_check(S, "moebius_ratio_bound", cm_ok, "1/(1-(k-1)/d^2) <= d^{k+|s|} Wg / Moeb <= a_k", "bound"));
  }
  {
    bool ok = true;
    std::ostringstream os;
    for (auto [c, a] : {std::pair{"()", 2}, std::pair{"(1 2)", 2}, std::pair{"(1 2 3)", 3}}) {
      const Permutation s = Permutation::from_cycles(c, a);
      double prev = kInf;
      for (int d : {8, 16, 32, 64, 128}) {
        const double dev = std::abs(to_double(weingarten(d, s)) / weingarten_asymptotic(d, s) - 1);
        ok = ok && dev < prev;
        prev = dev;
      }
      os << c << " rel. dev at d=128: " << prev << "; ";
    }
    out.push_back(detail::make_check(S, "asymptotic_convergence", ok, os.str(), "exact"));
  }
  return out;
}

inline std::vector<Check> verify_moments() {
  std::vector<Check> out;
  const std::string S = "moments";
  {
    bool ok = true;
    for (int r : {2, 3, 4, 5, 6, 7, 8}) {
      const int d = r * r;
      const auto p = ChoiPartition::equal(r, r);
      ok = ok && haar_choi_moment(p, 2) == choi_second_moment_closed(d) && haar_choi_moment(p, 3) == choi_third_moment_closed(d);
    }
    out.push_back(detail::make_check(S, "choi_moments_closed_form", ok, "alpha = 2, 3 for d = 4..64 (squares)", "exact"));
  }
  {
    bool ok = true;
    for (int dA : {1, 2, 3, 4})
      for (int dB : {1, 2, 3, 6})
        for (int dC : {1, 2, 3, 4, 6, 12}) {
          const int d = dA * dB;
          if (d % dC || d < 2) continue;
          const int dD = d / dC;
          const Rational D(d);
          const Rational four_term =
              (Rational(dA * dB * dB * dC * dD * dD + dA * dA * dB * dC * dC * dD) / (D * D - 1) -
               Rational(dA * dB * dB * dC * dC * dD + dA * dA * dB * dC * dD * dD) / (D * (D * D - 1))) / (D * D);
          ok = ok && haar_choi_moment(ChoiPartition(dA, dB, dC, dD), 2) == four_term;
        }
    out.push_back(detail::make_check(S, "choi_alpha2_general_partitions", ok, "four-term expansion", "exact"));
  }
  {
    bool ok = true;
    for (int dA = 1; dA <= 64; ++dA) {
      ok = ok && haar_state_moment(dA, dA + 3, 2) == lubkin_purity(dA, dA + 3);
      for (int a = 2; a <= 4; ++a) ok = ok && haar_state_moment(dA, dA, a) == state_moment_closed_equal(dA, a);
      ok = ok && to_double(haar_state_moment(dA, dA, 4)) <= 14.0 / std::pow(dA, 3);
    }
    out.push_back(detail::make_check(S, "state_moments_closed_form", ok, "Lubkin and the alpha = 3, 4 list, d_A <= 64", "exact"));
  }
  {
    bool ok = true;
    std::ostringstream os;
    for (int a : {2, 3}) {
      double prev = kInf;
      for (int r : {4, 5, 6, 7, 8}) {
        const int d = r * r;
        const double ratio = to_double(haar_choi_moment(ChoiPartition::equal(r, r), a)) * std::pow(d, a - 1) / to_double(catalan(a));
        const double dev = std::abs(ratio - 1);
        ok = ok && dev < prev;
        prev = dev;
      }
      ok = ok && prev < 0.1;
      os << "alpha " << a << " deviation at d=64: " << prev << "; ";
    }
    out.push_back(detail::make_check(S, "catalan_asymptotics_choi", ok, os.str(), "exact"));
  }
  {
    bool ok = true;
    for (int a = 2; a <= 6; ++a) {
      double prev = kInf;
      for (int dA : {8, 16, 32, 64}) {
        const double dev = std::abs(to_double(haar_state_moment(dA, dA, a)) * std::pow(dA, a - 1) / to_double(catalan(a)) - 1);
        ok = ok && dev < prev && dev * dA * dA < 10.0 * a * a * a;
        prev = dev;
      }
    }
    out.push_back(detail::make_check(S, "catalan_asymptotics_state", ok, "O(d_A^-2) approach to Cat_alpha", "exact"));
  }
  {
    bool ok = true;
    int cases = 0;
    for (int a : {2, 3})
      for (int r = 2; r <= 8; ++r) {
        const int d = r * r;
        const auto b = choi_trace_bound(d, a);
        if (!b.preconditions_met) continue;
        ++cases;
        ok = ok && to_double(haar_choi_moment(ChoiPartition::equal(r, r), a)) <= b.value;
      }
    out.push_back(detail::make_check(S, "choi_trace_bound_grid", ok, std::to_string(cases) + " grid points", "bound"));
  }
  {
    bool ok = true;
    for (int dA = 2; dA <= 12; ++dA)
      for (int dB = dA; dB <= 24; dB += 3)
        for (int a = 2; a <= 6; ++a) {
          const auto b = state_trace_bound(dA, dB, a);
          if (!b.preconditions_met) continue;
          const double ex = to_double(haar_state_moment(dA, dB, a));
          ok = ok && ex <= b.value * (1 + 1e-12);
          const auto f = state_renyi_floor_h(dA, dB, a);
          ok = ok && jensen_renyi_floor(ex, a) >= f.value - 1e-12;
          ok = ok && jensen_renyi_floor(ex, a) >= state_renyi_floor_gap2(dA, dB).value;
          ok = ok && jensen_renyi_floor(ex, a) >= state_renyi_floor_ratio(dA, dB).value;
        }
    out.push_back(detail::make_check(S, "state_bounds_vs_exact", ok, "h(q) trace bound and Renyi floors against Jensen values", "bound"));
  }
  {
    bool ok = true;
    for (int a = 2; a <= 8; ++a) ok = ok && std::log2(to_double(catalan(a))) / (a - 1) <= 2.0 * a / (a - 1) && 2.0 * a / (a - 1) <= 4;
    for (int r = 3; r <= 8; ++r)
      for (int a = 2; a <= 4; ++a) {
        const int d = r * r;
        if (d < a) continue;
        ok = ok && std::log2(d) - jensen_renyi_floor(to_double(haar_choi_moment(ChoiPartition::equal(r, r), a)), a) <= 4;
      }
    out.push_back(detail::make_check(S, "residual_entropy_le_4", ok, "log Cat / (alpha-1) <= 2alpha/(alpha-1) <= 4", "bound"));
  }
  {
    bool ok = std::abs(page_average_entropy(2, 2) - (1.0 / 3.0) / std::numbers::ln2) < 1e-12 && page_average_entropy(1, 7) == 0;
    for (int dA = 1; dA <= 16; ++dA)
      for (int dB = dA; dB <= 32; ++dB)
        ok = ok && page_average_entropy(dA, dB) > std::log2(dA) - 1 / (2 * std::numbers::ln2);
    out.push_back(detail::make_check(S, "page_formula", ok, "(2,2) = (1/3)/ln2 and > log d_A - 1/(2 ln 2)", "exact"));
  }
  {
    // Design transfer: every two-qubit Clifford Choi spectrum is flat, so the
    // group average is an exact dyadic rational.
    bool ok = true;
    const auto p = ChoiPartition::equal(2, 2);
    const auto& g = clifford_group(2);
    for (int a = 1; a <= 3; ++a) {
      Rational avg = 0;
      for (const auto& u : g) {
        const auto sp = choi_ac_spectrum(u, p);
        const int rank = static_cast<int>(std::lround(1.0 / sp.power_trace(2)));
        avg += Rational(BigInt(1), ipow(BigInt(rank), a - 1));
      }
      avg /= static_cast<int>(g.size());
      ok = ok && avg == haar_choi_moment(p, a);
    }
    out.push_back(detail::make_check(S, "clifford_design_transfer", ok, "two-qubit Clifford group, alpha = 1, 2, 3", "exact"));
  }
  return out;
}

inline std::vector<Check> verify_ensembles(const VerifyOptions& opt) {
  std::vector<Check> out;
  const std::string S = "ensembles";
  const double band = 4.0 * opt.tolerance_scale;
  auto mc_check = [&](const std::string& name, const EnsembleSpec& spec, const MomentQuery& q, std::uint64_t n, double ref) {
    const auto e = mc_moment(spec, q, n, opt.seed, opt.workers);
    std::ostringstream os;
    os << "mean " << e.mean << " +- " << e.stderr() << ", reference " << ref << ", z " << e.z_score(ref);
    out.push_back(detail::make_check(S, name, std::abs(e.z_score(ref)) <= band, os.str(), "monte-carlo"));
  };
  MomentQuery q;
  q.choi = ChoiPartition::equal(4, 4);
  q.alpha = 2;
  mc_check("haar_unitary_d16_alpha2", haar_unitary_spec(16), q, 20000, 2.0 / 17);
  MomentQuery qs;
  qs.setting = Setting::state;
  qs.dA = qs.dB = 4;
  qs.alpha = 3;
  mc_check("haar_state_4x4_alpha3", haar_state_spec(4, 4), qs, 20000, to_double(haar_state_moment(4, 4, 3)));
  MomentQuery qc;
  qc.choi = ChoiPartition::equal(2, 2);
  qc.alpha = 3;
  mc_check("clifford_n2_alpha3", qubit_spec(EnsembleKind::clifford, 2), qc, 20000, to_double(haar_choi_moment(qc.choi, 3)));
  {
    const bool ok = group_frame_potential(clifford_group(2), 3) == 6 && group_frame_potential(clifford_group(2), 4) > 24 &&
                    group_frame_potential(pauli_ensemble(2), 1) == 1 && group_frame_potential(pauli_ensemble(2), 2) > 2;
    out.push_back(detail::make_check(S, "frame_potentials", ok, "Clifford n=2: Phi_3 = 6, Phi_4 > 24; Pauli: Phi_1 = 1, Phi_2 > 2", "exact"));
  }
  {
    bool ok = true;
    for (int t = 1; t <= 4; ++t) {
      const Rational phi = group_frame_potential(clifford_group(1), t);
      const Rational floor(frame_potential_floor(t, 2));
      ok = ok && (t <= 3 ? phi == floor : phi > floor);
    }
    out.push_back(detail::make_check(S, "single_qubit_clifford_frame_potential", ok, "Phi_t equals the d = 2 Haar floor for t <= 3, exceeds it at t = 4", "exact"));
  }
  for (int d : {16, 64}) {
    const int r = exact_sqrt(d);
    const auto p = ChoiPartition::equal(r, r);
    const auto e = mc_estimate(2000, opt.seed, opt.workers, [&](PhiloxStream& rng) {
      return choi_ac_spectrum(haar_unitary(d, rng), p).max() * d;
    });
    const double md = min_entropy_constant(d);
    std::ostringstream os;
    os << "d E||rho_AC|| = " << e.mean << " +- " << e.stderr() << ", m_d = " << md;
    out.push_back(detail::make_check(S, "haar_norm_bound_d" + std::to_string(d), e.mean <= md + band * e.stderr(), os.str(), "monte-carlo"));
  }
  for (auto [dA, dB] : {std::pair{4, 4}, std::pair{4, 16}}) {
    const auto e = mc_estimate(5000, opt.seed, opt.workers, [&](PhiloxStream& rng) {
      return std::sqrt(spectrum_of(reduce_pure(haar_state(dA * dB, rng), {dA, dB}, {0})).max());
    });
    const double b = root_norm_bound(dA, dB).value;
    std::ostringstream os;
    os << "E sqrt||rho_A|| = " << e.mean << " +- " << e.stderr() << ", bound " << b;
    out.push_back(detail::make_check(S, "root_norm_bound_" + std::to_string(dA) + "x" + std::to_string(dB),
                                     e.mean <= b + band * e.stderr(), os.str(), "monte-carlo"));
  }
  return out;
}

inline std::vector<Check> run_verify(const std::string& suite, const VerifyOptions& opt) {
  std::vector<Check> all;
  auto add = [&](std::vector<Check> v) { all.insert(all.end(), v.begin(), v.end()); };
  if (suite == "combinatorics" || suite == "all") add(verify_combinatorics());
  if (suite == "weingarten" || suite == "all") add(verify_weingarten());
  if (suite == "moments" || suite == "all") add(verify_moments());
  if (suite == "ensembles" || suite == "all") add(verify_ensembles(opt));
  if (all.empty()) throw std::invalid_argument("unknown verify suite: " + suite);
  return all;
}

}  // namespace designlab
