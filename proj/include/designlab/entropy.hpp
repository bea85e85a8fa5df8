#pragma once

// Spectra, density matrices, reduced states of Choi states, and the unified
// (alpha, s) entropy family.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace designlab {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kStateTol = 1e-10;

inline double log2_safe(double x) { return std::log2(x); }
inline double bits_to_nats(double bits) { return bits * std::log(2.0); }
inline double nats_to_bits(double nats) { return nats / std::log(2.0); }

/// Eigenvalues sorted non-increasing and summing to one.
class Spectrum {
 public:
  Spectrum() = default;

  /// Sorts and checks normalization; tiny negative noise is clipped to zero.
  explicit Spectrum(std::vector<double> values, double tol = 1e-12) : values_(std::move(values)) {
    for (double& v : values_) {
      if (v < -kStateTol) throw std::invalid_argument("Spectrum: negative eigenvalue");
      v = std::clamp(v, 0.0, 1.0);
    }
    std::sort(values_.begin(), values_.end(), std::greater<>());
    const double s = std::accumulate(values_.begin(), values_.end(), 0.0);
    if (values_.empty() || std::abs(s - 1.0) > tol) throw std::invalid_argument("Spectrum: values do not sum to 1");
  }

  static Spectrum uniform(int d) { return Spectrum(std::vector<double>(d, 1.0 / d)); }
  static Spectrum pure(int d) {
    std::vector<double> v(d, 0.0);
    v[0] = 1.0;
    return Spectrum(std::move(v));
  }

  const std::vector<double>& values() const { return values_; }
  int dim() const { return static_cast<int>(values_.size()); }
  double max() const { return values_.front(); }

  double power_trace(double alpha) const {
    double t = 0;
    for (double v : values_)
      if (v > 0) t += std::pow(v, alpha);
    return t;
  }

 private:
  std::vector<double> values_;
};

/// Product spectrum of a tensor product state.
inline Spectrum tensor(const Spectrum& a, const Spectrum& b) {
  std::vector<double> v;
  v.reserve(a.values().size() * b.values().size());
  for (double x : a.values())
    for (double y : b.values()) v.push_back(x * y);
  return Spectrum(std::move(v), 1e-10);
}

class DensityMatrix {
 public:
  DensityMatrix() = default;

  explicit DensityMatrix(CMatrix m, double tol = kStateTol) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0) throw std::invalid_argument("DensityMatrix: not square");
    if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > tol) throw std::invalid_argument("DensityMatrix: not Hermitian");
    if (std::abs(m_.trace() - Complex(1.0)) > tol) throw std::invalid_argument("DensityMatrix: trace differs from 1");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol) throw std::invalid_argument("DensityMatrix: not positive semidefinite");
  }

  static DensityMatrix from_pure(const CVector& psi) {
    return DensityMatrix(psi * psi.adjoint() / psi.squaredNorm());
  }

  const CMatrix& matrix() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }

  Spectrum spectrum() const {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m_, Eigen::EigenvaluesOnly);
    std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    double s = 0;
    for (double& x : v) {
      x = std::clamp(x, 0.0, 1.0);
      s += x;
    }
    for (double& x : v) x /= s;
    return Spectrum(std::move(v), 1e-9);
  }

 private:
  CMatrix m_;
};

/// Entropy order: alpha in [0, inf], family s >= 0 (s = 0 is the Renyi family).
struct EntropyOrder {
  double alpha = 1.0;
  double s = 0.0;

  static EntropyOrder renyi(double a) { return {a, 0.0}; }
  static EntropyOrder tsallis(double a) { return {a, 1.0}; }
  static EntropyOrder von_neumann() { return {1.0, 0.0}; }
  static EntropyOrder min() { return {kInf, 0.0}; }
  static EntropyOrder max() { return {0.0, 0.0}; }
};

inline double von_neumann_entropy(const Spectrum& sp) {
  double h = 0;
  for (double v : sp.values())
    if (v > 0) h -= v * std::log2(v);
  return std::max(h, 0.0);
}

inline double min_entropy(const Spectrum& sp) { return -std::log2(sp.max()); }

inline double max_entropy(const Spectrum& sp, double tol = kStateTol) {
  int rank = 0;
  for (double v : sp.values())
    if (v > tol) ++rank;
  return std::log2(static_cast<double>(rank));
}

/// Renyi entropies, von Neumann and min entropy are returned in bits.
/// For s > 0 the unified entropy [(tr rho^alpha)^s - 1] / (s (1 - alpha)) is
/// dimensionless, as in its definition.
inline double unified_entropy(const Spectrum& sp, EntropyOrder order) {
  const double a = order.alpha;
  const double s = order.s;
  if (!(a >= 0) || !(s >= 0)) throw std::invalid_argument("unified_entropy: alpha and s must be nonnegative");
  if (std::isinf(a)) return min_entropy(sp);
  if (a == 1.0) return von_neumann_entropy(sp);
  if (s == 0.0) {
    if (a == 0.0) return max_entropy(sp);
    return std::log2(sp.power_trace(a)) / (1.0 - a);
  }
  double tr;
  if (a == 0.0) {
    int rank = 0;
    for (double v : sp.values())
      if (v > kStateTol) ++rank;
    tr = rank;
  } else {
    tr = sp.power_trace(a);
  }
  return (std::pow(tr, s) - 1.0) / (s * (1.0 - a));
}

inline double renyi_entropy(const Spectrum& sp, double alpha) {
  return unified_entropy(sp, EntropyOrder::renyi(alpha));
}

/// log2(d) - S_alpha(rho), the Renyi divergence of rho from the maximally mixed state.
inline double renyi_divergence_from_uniform(const Spectrum& sp, double alpha) {
  return std::log2(static_cast<double>(sp.dim())) - renyi_entropy(sp, alpha);
}

/// One eigenvalue d^{-(a-1)/a}, the rest spread evenly.
inline Spectrum single_peak_spectrum(int d, double alpha_peak) {
  if (d < 2 || !(alpha_peak > 1)) throw std::invalid_argument("single_peak_spectrum: need d >= 2, alpha > 1");
  const double top = std::pow(static_cast<double>(d), -(alpha_peak - 1.0) / alpha_peak);
  std::vector<double> v(d, (1.0 - top) / (d - 1));
  v[0] = top;
  return Spectrum(std::move(v), 1e-10);
}

/// Spectrum of the reduced state of the gap 2-design: one lambda_1 and
/// d_A - 1 copies of lambda_2, with purity (d_A + d_B) / (d_A d_B + 1).
inline Spectrum gap_design_spectrum(int dA, int dB) {
  if (dA < 1 || dB < 1 || dA > dB) throw std::invalid_argument("gap_design_spectrum: need 1 <= d_A <= d_B");
  if (dA == 1) return Spectrum::pure(1);
  const double n = static_cast<double>(dA) * dB + 1.0;
  const double root = std::sqrt((dA + 1.0) * n);
  const double l1 = (n + (dA - 1.0) * root) / (dA * n);
  const double l2 = (n - root) / (dA * n);
  std::vector<double> v(dA, l2);
  v[0] = l1;
  return Spectrum(std::move(v), 1e-10);
}

/// Reduced density matrix of the factors in `keep` (ascending indices into dims)
/// from a pure state on the product of dims.
inline CMatrix reduce_pure(const CVector& psi, const std::vector<int>& dims, const std::vector<int>& keep) {
  long long total = 1;
  for (int d : dims) total *= d;
  if (psi.size() != total) throw std::invalid_argument("reduce_pure: dimension mismatch");
  const int nf = static_cast<int>(dims.size());
  std::vector<char> kept(nf, 0);
  for (int k : keep) {
    if (k < 0 || k >= nf || kept[k]) throw std::invalid_argument("reduce_pure: bad keep list");
    kept[k] = 1;
  }
  long long dk = 1, dr = 1;
  for (int i = 0; i < nf; ++i) (kept[i] ? dk : dr) *= dims[i];
  CMatrix m(dk, dr);
  std::vector<int> digit(nf, 0);
  for (long long idx = 0; idx < total; ++idx) {
    long long rem = idx;
    for (int i = nf - 1; i >= 0; --i) {
      digit[i] = static_cast<int>(rem % dims[i]);
      rem /= dims[i];
    }
    long long r = 0, c = 0;
    for (int i = 0; i < nf; ++i) {
      if (kept[i]) r = r * dims[i] + digit[i];
      else c = c * dims[i] + digit[i];
    }
    m(r, c) = psi(idx);
  }
  return m * m.adjoint();
}

/// Partial trace of a mixed state over the factors not listed in keep.
inline DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& dims, const std::vector<int>& keep) {
  long long total = 1;
  for (int d : dims) total *= d;
  if (rho.dim() != total) throw std::invalid_argument("partial_trace: dimension mismatch");
  const int nf = static_cast<int>(dims.size());
  std::vector<char> kept(nf, 0);
  for (int k : keep) {
    if (k < 0 || k >= nf || kept[k]) throw std::invalid_argument("partial_trace: bad keep list");
    kept[k] = 1;
  }
  long long dk = 1;
  for (int i = 0; i < nf; ++i)
    if (kept[i]) dk *= dims[i];
  auto split = [&](long long idx, long long& kpart, long long& rpart) {
    std::vector<int> digit(nf);
    for (int i = nf - 1; i >= 0; --i) {
      digit[i] = static_cast<int>(idx % dims[i]);
      idx /= dims[i];
    }
    kpart = rpart = 0;
    for (int i = 0; i < nf; ++i) {
      if (kept[i]) kpart = kpart * dims[i] + digit[i];
      else rpart = rpart * dims[i] + digit[i];
    }
  };
  std::vector<long long> kp(total), rp(total);
  for (long long i = 0; i < total; ++i) split(i, kp[i], rp[i]);
  CMatrix out = CMatrix::Zero(dk, dk);
  const CMatrix& m = rho.matrix();
  for (long long i = 0; i < total; ++i)
    for (long long j = 0; j < total; ++j)
      if (rp[i] == rp[j]) out(kp[i], kp[j]) += m(i, j);
  return DensityMatrix(out, 1e-9);
}

/// Dimensions of the input (A, B) and output (C, D) splits of a unitary channel.
struct ChoiPartition {
  int dA = 1, dB = 1, dC = 1, dD = 1;

  ChoiPartition() = default;
  ChoiPartition(int a, int b, int c, int e) : dA(a), dB(b), dC(c), dD(e) {
    if (a < 1 || b < 1 || c < 1 || e < 1) throw std::invalid_argument("ChoiPartition: dimensions must be positive");
    if (a * b != c * e) throw std::invalid_argument("ChoiPartition: d_A d_B must equal d_C d_D");
  }
  static ChoiPartition equal(int dA, int dB) { return ChoiPartition(dA, dB, dA, dB); }

  int d() const { return dA * dB; }
  bool operator==(const ChoiPartition&) const = default;
};

inline void check_unitary(const CMatrix& u, double tol = kStateTol) {
  if (u.rows() != u.cols()) throw std::invalid_argument("matrix is not square");
  const double r = (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
  if (r > tol) throw std::invalid_argument("matrix is not unitary");
}

/// |U> = d^{-1/2} sum U_{mo,kl} |kl>_{AB} |mo>_{CD}, factors ordered A, B, C, D.
inline CVector choi_vector(const CMatrix& u, const ChoiPartition& part) {
  const int d = part.d();
  if (u.rows() != d) throw std::invalid_argument("choi: unitary dimension differs from d_A d_B");
  check_unitary(u);
  CVector v(static_cast<long long>(d) * d);
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (int in = 0; in < d; ++in)
    for (int out = 0; out < d; ++out) v(static_cast<long long>(in) * d + out) = u(out, in) * norm;
  return v;
}

inline DensityMatrix choi_state(const CMatrix& u, const ChoiPartition& part) {
  const CVector v = choi_vector(u, part);
  return DensityMatrix(v * v.adjoint(), 1e-9);
}

inline std::vector<int> choi_dims(const ChoiPartition& p) { return {p.dA, p.dB, p.dC, p.dD}; }

/// rho_AC = M M^dagger with M[(k,m),(l,o)] = U[(m,o),(k,l)] / sqrt(d).
inline CMatrix choi_reduced_ac_matrix(const CMatrix& u, const ChoiPartition& p) {
  const int d = p.d();
  if (u.rows() != d || u.cols() != d) throw std::invalid_argument("choi: unitary dimension differs from d_A d_B");
  CMatrix m(p.dA * p.dC, p.dB * p.dD);
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (int k = 0; k < p.dA; ++k)
    for (int l = 0; l < p.dB; ++l)
      for (int mm = 0; mm < p.dC; ++mm)
        for (int o = 0; o < p.dD; ++o) m(k * p.dC + mm, l * p.dD + o) = u(mm * p.dD + o, k * p.dB + l) * norm;
  return m * m.adjoint();
}

inline DensityMatrix choi_reduced_ac(const CMatrix& u, const ChoiPartition& p) {
  check_unitary(u);
  return DensityMatrix(choi_reduced_ac_matrix(u, p), 1e-9);
}

/// Eigenvalues of rho_AC without the DensityMatrix validation pass.
inline Spectrum choi_ac_spectrum(const CMatrix& u, const ChoiPartition& p) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(choi_reduced_ac_matrix(u, p), Eigen::EigenvaluesOnly);
  std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  double s = 0;
  for (double& x : v) {
    x = std::max(x, 0.0);
    s += x;
  }
  for (double& x : v) x /= s;
  return Spectrum(std::move(v), 1e-9);
}

inline Spectrum spectrum_of(const CMatrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian, Eigen::EigenvaluesOnly);
  std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  double s = 0;
  for (double& x : v) {
    x = std::max(x, 0.0);
    s += x;
  }
  for (double& x : v) x /= s;
  return Spectrum(std::move(v), 1e-9);
}

/// The permutation pi with Y_alpha = sum_x |pi(x)><x| on ((C^d)^{(x)2})^{(x)alpha}.
/// A basis label lists 2 alpha factor indices, each in [0, d); the odd factors
/// carry (k_r l_r) -> (m_r o_r) and the even ones (m_{r+1} o_r) -> (k_{r+1} l_r).
inline std::vector<std::uint32_t> y_operator_permutation(const ChoiPartition& p, int alpha) {
  const int d = p.d();
  const int nf = 2 * alpha;
  std::uint64_t total = 1;
  for (int i = 0; i < nf; ++i) total *= d;
  if (total > (1ull << 26)) throw std::invalid_argument("y_operator_permutation: too large");
  std::vector<std::uint32_t> pi(total);
  std::vector<int> k(alpha), l(alpha), m(alpha), o(alpha), digit(nf), outd(nf);
  for (std::uint64_t x = 0; x < total; ++x) {
    std::uint64_t rem = x;
    for (int i = nf - 1; i >= 0; --i) {
      digit[i] = static_cast<int>(rem % d);
      rem /= d;
    }
    for (int r = 0; r < alpha; ++r) {
      k[r] = digit[2 * r] / p.dB;
      l[r] = digit[2 * r] % p.dB;
      const int r1 = (r + 1) % alpha;
      m[r1] = digit[2 * r + 1] / p.dD;
      o[r] = digit[2 * r + 1] % p.dD;
    }
    for (int r = 0; r < alpha; ++r) {
      const int r1 = (r + 1) % alpha;
      outd[2 * r] = m[r] * p.dD + o[r];
      outd[2 * r + 1] = k[r1] * p.dB + l[r];
    }
    std::uint64_t y = 0;
    for (int i = 0; i < nf; ++i) y = y * d + outd[i];
    pi[x] = static_cast<std::uint32_t>(y);
  }
  return pi;
}

/// (1/d^alpha) tr{(U (x) U^dagger)^{(x)alpha} Y_alpha}, contracted entrywise
/// without forming either operator densely. Equals tr rho_AC^alpha.
inline double y_trace(const CMatrix& u, const ChoiPartition& p, int alpha) {
  const int d = p.d();
  const auto pi = y_operator_permutation(p, alpha);
  const CMatrix ud = u.adjoint();
  const int nf = 2 * alpha;
  Complex acc = 0;
  std::vector<int> a(nf), b(nf);
  for (std::uint64_t x = 0; x < pi.size(); ++x) {
    std::uint64_t rx = x, ry = pi[x];
    for (int i = nf - 1; i >= 0; --i) {
      a[i] = static_cast<int>(rx % d);
      rx /= d;
      b[i] = static_cast<int>(ry % d);
      ry /= d;
    }
    Complex prod = 1;
    for (int i = 0; i < nf; ++i) prod *= (i % 2 == 0 ? u(b[i], a[i]) : ud(b[i], a[i]));
    acc += prod;
  }
  return acc.real() / std::pow(static_cast<double>(d), alpha);
}

struct InfoQuantities {
  double mutual_ac = 0;       // I(A:C)
  double mutual_ad = 0;       // I(A:D)
  double mutual_acd = 0;      // I(A:CD)
  double minus_tripartite = 0;  // -I_3(A:C:D) = I(A:CD) - I(A:C) - I(A:D)
};

struct RegionEntropies {
  double A = 0, C = 0, D = 0, AC = 0, AD = 0, CD = 0, ACD = 0;
};

inline InfoQuantities info_quantities(const RegionEntropies& s) {
  InfoQuantities q;
  q.mutual_ac = s.A + s.C - s.AC;
  q.mutual_ad = s.A + s.D - s.AD;
  q.mutual_acd = s.A + s.CD - s.ACD;
  q.minus_tripartite = q.mutual_acd - q.mutual_ac - q.mutual_ad;
  return q;
}

/// Region entropies of the Choi state of U at a fixed order.
inline RegionEntropies choi_region_entropies(const CMatrix& u, const ChoiPartition& p, EntropyOrder order) {
  const CVector v = choi_vector(u, p);
  const auto dims = choi_dims(p);  // A=0, B=1, C=2, D=3
  auto ent = [&](std::vector<int> keep) { return unified_entropy(spectrum_of(reduce_pure(v, dims, keep)), order); };
  RegionEntropies s;
  s.A = ent({0});
  s.C = ent({2});
  s.D = ent({3});
  s.AC = ent({0, 2});
  s.AD = ent({0, 3});
  s.CD = ent({2, 3});
  s.ACD = ent({1});  // the global state is pure, so S(ACD) = S(B)
  return s;
}

/// True when every partial sum of a dominates that of b (shorter side zero-padded).
inline bool majorizes(const Spectrum& a, const Spectrum& b, double tol = 1e-10) {
  const std::size_t n = std::max(a.values().size(), b.values().size());
  double sa = 0, sb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i < a.values().size()) sa += a.values()[i];
    if (i < b.values().size()) sb += b.values()[i];
    if (sa + tol < sb) return false;
  }
  return true;
}

/// Tsallis q-logarithm ln_a(x) = (x^{1-a} - 1) / (1 - a).
inline double tsallis_log(double x, double a) {
  if (a == 1.0) return std::log(x);
  return (std::pow(x, 1.0 - a) - 1.0) / (1.0 - a);
}

/// Binary Tsallis entropy of order a.
inline double tsallis_binary_entropy(double eps, double a) {
  if (a == 1.0) {
    double h = 0;
    if (eps > 0) h -= eps * std::log(eps);
    if (eps < 1) h -= (1 - eps) * std::log(1 - eps);
    return h;
  }
  return (std::pow(eps, a) + std::pow(1.0 - eps, a) - 1.0) / (1.0 - a);
}

/// chi_s [eps^a ln_a(d - 1) + H^{(a)}(eps, 1 - eps)]; chi_s = 1 for s >= 1 and
/// d^{2(a - 1)} for the Renyi family.
inline double fannes_bound(double eps, int d, EntropyOrder order) {
  const double a = order.alpha;
  if (!(a > 1)) throw std::invalid_argument("fannes_bound: requires alpha > 1");
  if (!(eps >= 0 && eps <= 1)) throw std::invalid_argument("fannes_bound: eps must lie in [0, 1]");
  if (order.s < 0) throw std::invalid_argument("fannes_bound: s must be nonnegative");
  if (eps == 0) return 0;
  double chi = 1;
  if (order.s == 0) chi = std::pow(static_cast<double>(d), 2.0 * (a - 1.0));
  else if (order.s < 1) throw std::invalid_argument("fannes_bound: only s = 0 or s >= 1 are covered");
  return chi * (std::pow(eps, a) * tsallis_log(d - 1.0, a) + tsallis_binary_entropy(eps, a));
}

}  // namespace designlab
