#pragma once

// Randomised property suites shared by the unit tests and the acceptance run.
// Each suite draws its instances from the stream (seed, suite id, instance).

#include "designlab/ensembles.hpp"
#include "designlab/entropy.hpp"

#include <sstream>
#include <string>

namespace designlab::props {

struct SuiteResult {
  int instances = 0;
  int failures = 0;
  std::string first_failure;

  bool ok() const { return failures == 0 && instances > 0; }
  void record(bool pass, const std::string& what) {
    if (pass) return;
    if (failures++ == 0) first_failure = what;
  }
};

inline constexpr double kTol = 1e-10;

// A spectrum whose shape ranges from nearly flat to sharply peaked, sometimes rank deficient.
inline Spectrum random_spectrum(PhiloxStream& rng, int d) {
  const double sharp = 0.3 + 6.0 * rng.uniform();
  const bool sparse = rng.below(4) == 0;
  std::vector<double> v(d);
  double s = 0;
  for (int i = 0; i < d; ++i) {
    v[i] = std::pow(-std::log(rng.uniform_pos()), sharp);
    if (sparse && i > 0 && rng.below(3) == 0) v[i] = 0;
    s += v[i];
  }
  // Keep support entries well clear of the rank cutoff so products of two spectra stay above it.
  double t = 0;
  for (double& x : v) {
    if (x > 0) x = std::max(x / s, 1e-4);
    t += x;
  }
  for (double& x : v) x /= t;
  return Spectrum(std::move(v), 1e-9);
}

inline double random_order(PhiloxStream& rng) {
  static const double fixed[] = {0.0, 0.5, 1.0, 2.0, 3.0, kInf};
  if (rng.below(2) == 0) return fixed[rng.below(6)];
  return 0.05 + 6.0 * rng.uniform();
}

inline std::string describe(const Spectrum& s) {
  std::ostringstream os;
  os << "spectrum(d=" << s.dim() << ", max=" << s.max() << ")";
  return os.str();
}

/// S_R^(a) >= S_R^(b) whenever a < b.
inline SuiteResult order_monotonicity(std::uint64_t seed, int n) {
  SuiteResult r;
  for (int k = 0; k < n; ++k, ++r.instances) {
    PhiloxStream rng(seed, (1ull << 40) + k);
    const auto sp = random_spectrum(rng, 2 + static_cast<int>(rng.below(31)));
    double a = random_order(rng), b = random_order(rng);
    if (a > b) std::swap(a, b);
    const double sa = renyi_entropy(sp, a), sb = renyi_entropy(sp, b);
    const bool in_range = sa >= -kTol && sa <= std::log2(sp.dim()) + kTol;
    r.record(sa >= sb - kTol && in_range, describe(sp) + " a=" + std::to_string(a) + " b=" + std::to_string(b));
  }
  return r;
}

/// Reverse bound and interpolation between orders, for b >= a >= 1.
inline SuiteResult order_inequalities(std::uint64_t seed, int n) {
  SuiteResult r;
  for (int k = 0; k < n; ++k, ++r.instances) {
    PhiloxStream rng(seed, (2ull << 40) + k);
    const auto sp = random_spectrum(rng, 2 + static_cast<int>(rng.below(31)));
    double a = 1.0 + 5.0 * rng.uniform(), b = 1.0 + 5.0 * rng.uniform();
    if (a > b) std::swap(a, b);
    if (rng.below(8) == 0) a = 1.0;
    const double sa = renyi_entropy(sp, a), sb = renyi_entropy(sp, b), smin = min_entropy(sp);
    const bool reverse = b == 1.0 || sb >= b * (a - 1) / ((b - 1) * a) * sa - kTol;
    const bool interp = b == 1.0 || sb >= ((a - 1) * sa + (b - a) * smin) / (b - 1) - kTol;
    r.record(reverse && interp, describe(sp) + " a=" + std::to_string(a) + " b=" + std::to_string(b));
  }
  return r;
}

/// S_R^(a)(x (x) y) = S_R^(a)(x) + S_R^(a)(y).
inline SuiteResult additivity(std::uint64_t seed, int n) {
  SuiteResult r;
  for (int k = 0; k < n; ++k, ++r.instances) {
    PhiloxStream rng(seed, (3ull << 40) + k);
    const auto x = random_spectrum(rng, 2 + static_cast<int>(rng.below(8)));
    const auto y = random_spectrum(rng, 2 + static_cast<int>(rng.below(8)));
    const double a = random_order(rng);
    const double lhs = renyi_entropy(tensor(x, y), a), rhs = renyi_entropy(x, a) + renyi_entropy(y, a);
    r.record(std::abs(lhs - rhs) <= kTol, describe(x) + " (x) " + describe(y) + " a=" + std::to_string(a));
  }
  return r;
}

/// For a random mixed rho_AB: weak subadditivity, the majorization
/// rho_AB > rho_A (x) I/d_B, monotone divergence from uniform under partial
/// trace, and agreement of matrix and spectrum entropies.
inline SuiteResult subadditivity_majorization(std::uint64_t seed, int n) {
  SuiteResult r;
  for (int k = 0; k < n; ++k, ++r.instances) {
    PhiloxStream rng(seed, (4ull << 40) + k);
    const int dA = 2 + static_cast<int>(rng.below(3)), dB = 2 + static_cast<int>(rng.below(3));
    const int dE = 1 + static_cast<int>(rng.below(6));
    const CVector psi = haar_state(dA * dB * dE, rng);
    const DensityMatrix rab(reduce_pure(psi, {dA, dB, dE}, {0, 1}), 1e-9);
    const DensityMatrix ra = partial_trace(rab, {dA, dB}, {0});
    const Spectrum sab = rab.spectrum(), sa = ra.spectrum();
    std::vector<double> padded;
    for (double v : sa.values())
      for (int j = 0; j < dB; ++j) padded.push_back(v / dB);
    const Spectrum sa_mixed(padded, 1e-9);
    const double a = random_order(rng);
    bool ok = renyi_entropy(sab, a) <= renyi_entropy(sa, a) + std::log2(dB) + 1e-9;
    ok = ok && majorizes(sab, sa_mixed, 1e-9);
    if (a >= 0.5) ok = ok && renyi_divergence_from_uniform(sab, a) >= renyi_divergence_from_uniform(sa, a) - 1e-9;
    // Entropy from an explicit eigen-decomposition of the matrix versus the stored spectrum.
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rab.matrix());
    double direct = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
      const double v = es.eigenvalues()(i);
      if (v > 1e-15) direct -= v * std::log2(v);
    }
    ok = ok && std::abs(direct - von_neumann_entropy(sab)) <= 1e-9;
    r.record(ok, "dA=" + std::to_string(dA) + " dB=" + std::to_string(dB) + " dE=" + std::to_string(dE) + " a=" + std::to_string(a));
  }
  return r;
}

/// tr rho_AC^alpha from eigenvalues versus the Y-operator contraction.
inline SuiteResult y_operator_oracle(std::uint64_t seed, int n) {
  static const ChoiPartition parts[] = {ChoiPartition(2, 2, 2, 2), ChoiPartition(1, 4, 2, 2), ChoiPartition(2, 2, 1, 4),
                                        ChoiPartition(4, 1, 2, 2), ChoiPartition(1, 3, 3, 1), ChoiPartition(3, 1, 1, 3)};
  SuiteResult r;
  for (int k = 0; k < n; ++k, ++r.instances) {
    PhiloxStream rng(seed, (5ull << 40) + k);
    const auto& p = parts[rng.below(6)];
    const int a = 1 + static_cast<int>(rng.below(3));
    const CMatrix u = haar_unitary(p.d(), rng);
    const double lhs = choi_ac_spectrum(u, p).power_trace(a);
    const double rhs = y_trace(u, p, a);
    r.record(std::abs(lhs - rhs) <= 1e-12, "partition (" + std::to_string(p.dA) + "," + std::to_string(p.dB) + "," +
                                                std::to_string(p.dC) + "," + std::to_string(p.dD) + ") alpha=" + std::to_string(a));
  }
  return r;
}

}  // namespace designlab::props
