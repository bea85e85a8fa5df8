#pragma once

// Random and exhaustively enumerable ensembles of unitaries and states, frame
// potentials, and a seeded Monte Carlo estimator whose result does not depend
// on the number of workers.

#include "designlab/entropy.hpp"
#include "designlab/exact.hpp"
#include "designlab/moments.hpp"
#include "designlab/rng.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

namespace designlab {

inline constexpr std::uint64_t kDefaultSeed = 0xD1CE;

// ---------------------------------------------------------------------------
// Haar sampling

inline CMatrix ginibre(int rows, int cols, PhiloxStream& rng) {
  CMatrix g(rows, cols);
  const double s = std::sqrt(0.5);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = rng.normal();
      const double im = rng.normal();
      g(i, j) = Complex(re * s, im * s);
    }
  return g;
}

/// QR of a complex Ginibre matrix with R's diagonal rotated to the positive reals.
inline CMatrix haar_unitary(int d, PhiloxStream& rng) {
  if (d < 1) throw std::invalid_argument("haar_unitary: d must be >= 1");
  const CMatrix g = ginibre(d, d, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(d, d);
  const CMatrix& r = qr.matrixQR();
  for (int j = 0; j < d; ++j) {
    const Complex rjj = r(j, j);
    const double a = std::abs(rjj);
    q.col(j) *= (a > 0 ? rjj / a : Complex(1.0));
  }
  return q;
}

inline CMatrix sample_haar_unitary(int d, std::uint64_t seed, std::uint64_t index = 0) {
  PhiloxStream rng(seed, index);
  return haar_unitary(d, rng);
}

inline CVector haar_state(int d, PhiloxStream& rng) {
  if (d < 1) throw std::invalid_argument("haar_state: d must be >= 1");
  CVector v = ginibre(d, 1, rng).col(0);
  return v / v.norm();
}

inline CVector sample_haar_state(int d, std::uint64_t seed, std::uint64_t index = 0) {
  PhiloxStream rng(seed, index);
  return haar_state(d, rng);
}

// ---------------------------------------------------------------------------
// Pauli operators. Qubit 0 is the most significant bit of a basis index.

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline CMatrix pauli_1q(int which) {
  CMatrix p(2, 2);
  const Complex i(0, 1);
  switch (which) {
    case 0: p << 1, 0, 0, 1; break;
    case 1: p << 0, 1, 1, 0; break;
    case 2: p << 0, -i, i, 0; break;
    case 3: p << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("pauli_1q: index must lie in [0, 4)");
  }
  return p;
}

/// Tensor product of single-qubit Paulis; code digit k (base 4, most significant
/// first) selects the Pauli on qubit k.
inline CMatrix pauli_string(int n, std::uint64_t code) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (int q = 0; q < n; ++q) {
    const int which = static_cast<int>((code >> (2 * (n - 1 - q))) & 3u);
    out = kron(out, pauli_1q(which));
  }
  return out;
}

inline std::vector<CMatrix> pauli_ensemble(int n) {
  if (n < 1 || n > 3) throw std::invalid_argument("pauli_ensemble: enumeration supports 1 <= n <= 3");
  std::vector<CMatrix> out;
  const std::uint64_t total = 1ull << (2 * n);
  for (std::uint64_t c = 0; c < total; ++c) out.push_back(pauli_string(n, c));
  return out;
}

/// Hermitian Pauli i^{x.z} X^x Z^z for a binary symplectic vector, optionally negated.
inline CMatrix pauli_from_symplectic(int n, std::uint32_t x, std::uint32_t z, bool negate) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (int q = 0; q < n; ++q) {
    const int bit = n - 1 - q;
    const bool xb = (x >> bit) & 1u, zb = (z >> bit) & 1u;
    out = kron(out, pauli_1q(xb ? (zb ? 2 : 1) : (zb ? 3 : 0)));
  }
  return negate ? CMatrix(-out) : out;
}

// ---------------------------------------------------------------------------
// Clifford group

namespace detail {

// Key of a unitary modulo global phase: rotate so the first entry of largest
// modulus is real positive, then round.
inline std::vector<long long> phase_key(const CMatrix& u) {
  long long best = 0;
  double bm = -1;
  for (long long k = 0; k < u.size(); ++k) {
    const double m = std::abs(u.data()[k]);
    if (m > bm + 1e-9) {
      bm = m;
      best = k;
    }
  }
  const Complex ph = std::conj(u.data()[best]) / bm;
  std::vector<long long> key(2 * u.size());
  for (long long k = 0; k < u.size(); ++k) {
    const Complex v = u.data()[k] * ph;
    key[2 * k] = std::llround(v.real() * 1e6);
    key[2 * k + 1] = std::llround(v.imag() * 1e6);
  }
  return key;
}

inline CMatrix embed_1q(int n, int q, const CMatrix& g) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (int k = 0; k < n; ++k) out = kron(out, k == q ? g : CMatrix::Identity(2, 2));
  return out;
}

inline CMatrix cnot(int n, int control, int target) {
  const int d = 1 << n;
  CMatrix out = CMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    int j = i;
    if ((i >> (n - 1 - control)) & 1) j ^= 1 << (n - 1 - target);
    out(j, i) = 1;
  }
  return out;
}

}  // namespace detail

/// Every n-qubit Clifford unitary modulo phase (n <= 2), by closure under
/// H, S and CNOT generators.
inline const std::vector<CMatrix>& clifford_group(int n) {
  if (n < 1 || n > 2) throw std::invalid_argument("clifford_group: enumeration supports n = 1, 2");
  static std::mutex mtx;
  static std::map<int, std::vector<CMatrix>> groups;
  std::lock_guard lk(mtx);
  if (auto it = groups.find(n); it != groups.end()) return it->second;
  const int d = 1 << n;
  CMatrix h(2, 2), s(2, 2);
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  s << 1, 0, 0, Complex(0, 1);
  std::vector<CMatrix> gens;
  for (int q = 0; q < n; ++q) {
    gens.push_back(detail::embed_1q(n, q, h));
    gens.push_back(detail::embed_1q(n, q, s));
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b) gens.push_back(detail::cnot(n, a, b));
  std::set<std::vector<long long>> seen;
  std::vector<CMatrix> elems;
  const CMatrix id = CMatrix::Identity(d, d);
  seen.insert(detail::phase_key(id));
  elems.push_back(id);
  for (std::size_t head = 0; head < elems.size(); ++head)
    for (const auto& g : gens) {
      CMatrix next = g * elems[head];
      if (seen.insert(detail::phase_key(next)).second) elems.push_back(std::move(next));
    }
  return groups.emplace(n, std::move(elems)).first->second;
}

/// Uniform Clifford unitary (n <= 5) built from a uniformly random symplectic
/// tableau and uniformly random signs, realised densely: U|0> is the common
/// +1 eigenvector of the images of Z_j, and U|x> = prod_j (U X_j U^dag)^{x_j} U|0>.
inline CMatrix random_clifford(int n, PhiloxStream& rng) {
  if (n < 1 || n > 5) throw std::invalid_argument("random_clifford: supports 1 <= n <= 5");
  const std::uint32_t mask = (1u << n) - 1;
  const std::uint64_t space = 1ull << (2 * n);
  auto omega = [&](std::uint64_t a, std::uint64_t b) {
    const std::uint32_t ax = static_cast<std::uint32_t>(a >> n) & mask, az = static_cast<std::uint32_t>(a) & mask;
    const std::uint32_t bx = static_cast<std::uint32_t>(b >> n) & mask, bz = static_cast<std::uint32_t>(b) & mask;
    return (__builtin_popcount(ax & bz) + __builtin_popcount(az & bx)) & 1;
  };
  // Sequentially pick a symplectic basis (x'_j, z'_j); each pair is uniform over
  // the valid choices given the previous ones, so the tableau is uniform.
  std::vector<std::uint64_t> xs, zs;
  for (int j = 0; j < n; ++j) {
    auto in_complement = [&](std::uint64_t v) {
      for (int k = 0; k < j; ++k)
        if (omega(v, xs[k]) || omega(v, zs[k])) return false;
      return true;
    };
    std::uint64_t xv;
    do xv = rng.below(space);
    while (xv == 0 || !in_complement(xv));
    std::uint64_t zv;
    do zv = rng.below(space);
    while (!in_complement(zv) || !omega(xv, zv));
    xs.push_back(xv);
    zs.push_back(zv);
  }
  const std::uint64_t signs = rng.below(1ull << (2 * n));
  const int d = 1 << n;
  auto image = [&](std::uint64_t v, bool neg) {
    return pauli_from_symplectic(n, static_cast<std::uint32_t>(v >> n) & mask, static_cast<std::uint32_t>(v) & mask, neg);
  };
  std::vector<CMatrix> xi(n), zi(n);
  for (int j = 0; j < n; ++j) {
    xi[j] = image(xs[j], (signs >> (2 * j)) & 1u);
    zi[j] = image(zs[j], (signs >> (2 * j + 1)) & 1u);
  }
  CMatrix proj = CMatrix::Identity(d, d);
  for (int j = 0; j < n; ++j) proj = proj * (CMatrix::Identity(d, d) + zi[j]) * 0.5;
  CVector psi0;
  for (int b = 0; b < d; ++b) {
    psi0 = proj.col(b);
    if (psi0.norm() > 1e-6) break;
  }
  psi0 /= psi0.norm();
  CMatrix u(d, d);
  for (int x = 0; x < d; ++x) {
    CVector col = psi0;
    // Qubit j is bit (n - 1 - j) of the basis label.
    for (int j = n - 1; j >= 0; --j)
      if ((x >> (n - 1 - j)) & 1) col = xi[j] * col;
    u.col(x) = col;
  }
  return u;
}

inline CMatrix clifford_sampler(int n, std::uint64_t seed, std::uint64_t index = 0) {
  PhiloxStream rng(seed, index);
  return random_clifford(n, rng);
}

// ---------------------------------------------------------------------------
// Circuits and block constructions

/// Applies a 4x4 gate to adjacent qubits (q, q + 1) of every column of u.
inline void apply_two_qubit(CMatrix& u, int n, int q, const CMatrix& g) {
  const int d = 1 << n;
  const int hi = n - 1 - q, lo = n - 2 - q;  // bit positions of qubits q and q + 1
  for (int base = 0; base < d; ++base) {
    if ((base >> hi) & 1 || (base >> lo) & 1) continue;
    const int idx[4] = {base, base | (1 << lo), base | (1 << hi), base | (1 << hi) | (1 << lo)};
    for (int c = 0; c < u.cols(); ++c) {
      Complex in[4], out[4];
      for (int k = 0; k < 4; ++k) in[k] = u(idx[k], c);
      for (int r = 0; r < 4; ++r) {
        out[r] = 0;
        for (int k = 0; k < 4; ++k) out[r] += g(r, k) * in[k];
      }
      for (int k = 0; k < 4; ++k) u(idx[k], c) = out[k];
    }
  }
}

/// Product of `depth` layers on a 1D open chain; each layer applies a Haar
/// two-qubit gate to a uniformly chosen adjacent pair.
inline CMatrix local_random_circuit(int n, int depth, PhiloxStream& rng) {
  if (n < 2 || n > 10) throw std::invalid_argument("local_random_circuit: supports 2 <= n <= 10");
  if (depth < 0) throw std::invalid_argument("local_random_circuit: depth must be >= 0");
  CMatrix u = CMatrix::Identity(1 << n, 1 << n);
  for (int layer = 0; layer < depth; ++layer) {
    const int q = static_cast<int>(rng.below(n - 1));
    apply_two_qubit(u, n, q, haar_unitary(4, rng));
  }
  return u;
}

inline int exact_sqrt(int d) {
  int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(d))));
  return r * r == d ? r : -1;
}

/// Acts as `inner` on span{|m o> : m, o < D} and as the identity elsewhere.
/// The outer label of |m o> is m sqrt(d) + o; the inner label is m D + o.
inline CMatrix partial_scrambler(int d, int D, const CMatrix& inner) {
  const int r = exact_sqrt(d);
  if (r < 0) throw std::invalid_argument("partial_scrambler: d must be a perfect square");
  if (D < 0 || D > r) throw std::invalid_argument("partial_scrambler: need 0 <= D <= sqrt(d)");
  if (inner.rows() != D * D || inner.cols() != D * D) throw std::invalid_argument("partial_scrambler: inner dimension must be D^2");
  CMatrix u = CMatrix::Identity(d, d);
  for (int a = 0; a < D * D; ++a)
    for (int b = 0; b < D * D; ++b) u((a / D) * r + a % D, (b / D) * r + b % D) = inner(a, b);
  return u;
}

// ---------------------------------------------------------------------------
// Ensemble specification

enum class EnsembleKind { haar_unitary, haar_state, pauli, clifford, local_circuit, partial_scrambler };

inline std::string to_string(EnsembleKind k) {
  switch (k) {
    case EnsembleKind::haar_unitary: return "haar-unitary";
    case EnsembleKind::haar_state: return "haar-state";
    case EnsembleKind::pauli: return "pauli";
    case EnsembleKind::clifford: return "clifford";
    case EnsembleKind::local_circuit: return "local-circuit";
    case EnsembleKind::partial_scrambler: return "partial-scrambler";
  }
  return "?";
}

inline EnsembleKind ensemble_kind_from_string(const std::string& s) {
  for (auto k : {EnsembleKind::haar_unitary, EnsembleKind::haar_state, EnsembleKind::pauli, EnsembleKind::clifford,
                 EnsembleKind::local_circuit, EnsembleKind::partial_scrambler})
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown ensemble kind: " + s);
}

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::haar_unitary;
  int n = 0;       // qubits (pauli, clifford, local-circuit)
  int d = 0;       // dimension (haar-unitary, partial-scrambler)
  int dA = 0, dB = 0;  // haar-state split
  int depth = 0;   // local-circuit layers
  int block = 0;   // partial-scrambler block size D
  std::shared_ptr<EnsembleSpec> inner;  // partial-scrambler inner ensemble, dimension D^2
  std::uint64_t seed = kDefaultSeed;

  bool is_state() const { return kind == EnsembleKind::haar_state; }

  /// Hilbert-space dimension of the sampled unitary or state.
  int dimension() const {
    switch (kind) {
      case EnsembleKind::haar_unitary:
      case EnsembleKind::partial_scrambler: return d;
      case EnsembleKind::haar_state: return dA * dB;
      case EnsembleKind::pauli:
      case EnsembleKind::clifford:
      case EnsembleKind::local_circuit: return 1 << n;
    }
    return 0;
  }

  void validate() const {
    switch (kind) {
      case EnsembleKind::haar_unitary:
        if (d < 1) throw std::invalid_argument("haar-unitary: d must be >= 1");
        break;
      case EnsembleKind::haar_state:
        if (dA < 1 || dB < 1) throw std::invalid_argument("haar-state: d_A and d_B must be >= 1");
        break;
      case EnsembleKind::pauli:
        if (n < 1 || n > 6) throw std::invalid_argument("pauli: need 1 <= n <= 6");
        break;
      case EnsembleKind::clifford:
        if (n < 1 || n > 5) throw std::invalid_argument("clifford: need 1 <= n <= 5");
        break;
      case EnsembleKind::local_circuit:
        if (n < 2 || n > 10 || depth < 0) throw std::invalid_argument("local-circuit: need 2 <= n <= 10, depth >= 0");
        break;
      case EnsembleKind::partial_scrambler: {
        const int r = exact_sqrt(d);
        if (r < 0) throw std::invalid_argument("partial-scrambler: d must be a perfect square");
        if (block < 0 || block > r) throw std::invalid_argument("partial-scrambler: need 0 <= D <= sqrt(d)");
        if (block > 0) {
          if (!inner) throw std::invalid_argument("partial-scrambler: inner ensemble required");
          inner->validate();
          if (inner->is_state() || inner->dimension() != block * block)
            throw std::invalid_argument("partial-scrambler: inner ensemble must be unitary of dimension D^2");
        }
        break;
      }
    }
  }

  /// Default Choi partition: equal halves of the qubits, or sqrt(d) splits.
  ChoiPartition default_partition() const {
    if (kind == EnsembleKind::pauli || kind == EnsembleKind::clifford || kind == EnsembleKind::local_circuit) {
      const int a = 1 << (n / 2), b = 1 << (n - n / 2);
      return ChoiPartition(a, b, a, b);
    }
    const int r = exact_sqrt(dimension());
    if (r < 0) throw std::invalid_argument("no default Choi partition: dimension is not a perfect square");
    return ChoiPartition(r, r, r, r);
  }
};

inline EnsembleSpec haar_unitary_spec(int d) {
  EnsembleSpec s;
  s.kind = EnsembleKind::haar_unitary;
  s.d = d;
  return s;
}

inline EnsembleSpec haar_state_spec(int dA, int dB) {
  EnsembleSpec s;
  s.kind = EnsembleKind::haar_state;
  s.dA = dA;
  s.dB = dB;
  return s;
}

inline EnsembleSpec qubit_spec(EnsembleKind kind, int n, int depth = 0) {
  EnsembleSpec s;
  s.kind = kind;
  s.n = n;
  s.depth = depth;
  return s;
}

inline EnsembleSpec partial_scrambler_spec(int d, int block) {
  EnsembleSpec s;
  s.kind = EnsembleKind::partial_scrambler;
  s.d = d;
  s.block = block;
  s.inner = std::make_shared<EnsembleSpec>(haar_unitary_spec(std::max(1, block * block)));
  return s;
}

/// Draws one unitary from a unitary ensemble using the given stream.
inline CMatrix draw_unitary(const EnsembleSpec& spec, PhiloxStream& rng) {
  switch (spec.kind) {
    case EnsembleKind::haar_unitary: return haar_unitary(spec.d, rng);
    case EnsembleKind::pauli: return pauli_string(spec.n, rng.below(1ull << (2 * spec.n)));
    case EnsembleKind::clifford: return random_clifford(spec.n, rng);
    case EnsembleKind::local_circuit: return local_random_circuit(spec.n, spec.depth, rng);
    case EnsembleKind::partial_scrambler: {
      if (spec.block == 0) return CMatrix::Identity(spec.d, spec.d);
      return partial_scrambler(spec.d, spec.block, draw_unitary(*spec.inner, rng));
    }
    case EnsembleKind::haar_state: break;
  }
  throw std::invalid_argument("draw_unitary: ensemble does not produce unitaries");
}

/// Draws one pure state: a Haar state, or U|0...0> for a unitary ensemble.
inline CVector draw_state(const EnsembleSpec& spec, PhiloxStream& rng) {
  if (spec.kind == EnsembleKind::haar_state) return haar_state(spec.dA * spec.dB, rng);
  return draw_unitary(spec, rng).col(0);
}

// ---------------------------------------------------------------------------
// Frame potentials

enum class FrameMode { unitary, projective };

/// Exact unitary frame potential (1/|G|) sum_U |tr U|^{2t} of a finite group
/// whose squared traces are integers (Pauli and Clifford groups).
inline Rational group_frame_potential(const std::vector<CMatrix>& group, int t) {
  if (t < 1 || t > 4) throw std::invalid_argument("frame_potential: t must lie in [1, 4]");
  BigInt sum = 0;
  for (const auto& u : group) {
    const double sq = std::norm(u.trace());
    const long long k = std::llround(sq);
    if (std::abs(sq - static_cast<double>(k)) > 1e-6)
      throw std::domain_error("group_frame_potential: |tr U|^2 is not an integer");
    sum += ipow(BigInt(k), t);
  }
  return Rational(sum, BigInt(group.size()));
}

/// Frame potential of an arbitrary finite ensemble: pairwise E|tr(U V^dag)|^{2t}.
inline double frame_potential(const std::vector<CMatrix>& ens, int t) {
  if (t < 1 || t > 4) throw std::invalid_argument("frame_potential: t must lie in [1, 4]");
  if (ens.empty()) throw std::invalid_argument("frame_potential: empty ensemble");
  long double acc = 0;
  for (const auto& u : ens)
    for (const auto& v : ens) acc += std::pow(std::norm((u * v.adjoint()).trace()), t);
  return static_cast<double>(acc / (static_cast<long double>(ens.size()) * ens.size()));
}

/// Projective frame potential D_[t]^2 E|<psi|phi>|^{2t} of a finite state ensemble;
/// equals D_[t] exactly on a projective t-design.
inline double projective_frame_potential(const std::vector<CVector>& states, int t) {
  if (t < 1 || t > 4) throw std::invalid_argument("frame_potential: t must lie in [1, 4]");
  if (states.empty()) throw std::invalid_argument("frame_potential: empty ensemble");
  const int d = static_cast<int>(states.front().size());
  if (std::pow(static_cast<double>(d), t) > 4096.0 * 4096.0)
    throw std::invalid_argument("frame_potential: dimension^t too large");
  long double acc = 0;
  for (const auto& a : states)
    for (const auto& b : states) acc += std::pow(std::norm(a.dot(b)), t);
  const double dt = to_double(sym_subspace_dim(d, t));
  return static_cast<double>(acc / (static_cast<long double>(states.size()) * states.size())) * dt * dt;
}

/// Distinct states in the orbit of |0...0> under a finite unitary ensemble.
inline std::vector<CVector> orbit_of_zero(const std::vector<CMatrix>& group) {
  std::set<std::vector<long long>> seen;
  std::vector<CVector> out;
  for (const auto& u : group) {
    CVector v = u.col(0);
    if (seen.insert(detail::phase_key(CMatrix(v))).second) out.push_back(v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Monte Carlo

struct MomentEstimate {
  double mean = 0;
  double stderr_ = 0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = kDefaultSeed;

  double stderr() const { return stderr_; }
  double z_score(double reference) const {
    return stderr_ > 0 ? (mean - reference) / stderr_ : (mean == reference ? 0.0 : (mean > reference ? kInf : -kInf));
  }
};

/// Running (count, mean, M2) with Chan's parallel merge.
struct Welford {
  std::uint64_t n = 0;
  double mean = 0;
  double m2 = 0;

  void push(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }

  void merge(const Welford& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double nn = static_cast<double>(n + o.n);
    const double delta = o.mean - mean;
    mean += delta * static_cast<double>(o.n) / nn;
    m2 += o.m2 + delta * delta * static_cast<double>(n) * static_cast<double>(o.n) / nn;
    n += o.n;
  }

  double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
};

inline constexpr std::uint64_t kMonteCarloBlock = 256;

/// Mean and standard error of f(stream) over samples 0..N-1. Sample i draws from
/// the stream (seed, i); blocks of fixed size are reduced in block order, so the
/// result is bit-identical for every worker count.
template <class F>
MomentEstimate mc_estimate(std::uint64_t n_samples, std::uint64_t seed, int workers, F&& f) {
  if (n_samples < 1) throw std::invalid_argument("mc_estimate: need at least one sample");
  const std::uint64_t nblocks = (n_samples + kMonteCarloBlock - 1) / kMonteCarloBlock;
  std::vector<Welford> blocks(nblocks);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex fail_mtx;
  auto work = [&] {
    try {
      for (std::uint64_t b; (b = next.fetch_add(1)) < nblocks;) {
        Welford w;
        const std::uint64_t end = std::min(n_samples, (b + 1) * kMonteCarloBlock);
        for (std::uint64_t i = b * kMonteCarloBlock; i < end; ++i) {
          PhiloxStream rng(seed, i);
          w.push(f(rng));
        }
        blocks[b] = w;
      }
    } catch (...) {
      std::lock_guard lk(fail_mtx);
      if (!failure) failure = std::current_exception();
      next = nblocks;
    }
  };
  workers = std::max(1, workers);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  Welford total;
  for (const auto& w : blocks) total.merge(w);
  MomentEstimate e;
  e.mean = total.mean;
  e.stderr_ = std::sqrt(total.variance() / static_cast<double>(total.n));
  e.n_samples = total.n;
  e.seed = seed;
  return e;
}

/// tr rho^alpha raised to s for one draw: rho_AC of the Choi state for unitary
/// ensembles in the Choi setting, rho_A of the drawn state in the state setting.
inline double sample_moment(const EnsembleSpec& spec, const MomentQuery& q, PhiloxStream& rng) {
  if (q.setting == Setting::choi) {
    if (spec.is_state()) throw std::invalid_argument("mc_moment: Choi setting needs a unitary ensemble");
    const CMatrix u = draw_unitary(spec, rng);
    return std::pow(choi_ac_spectrum(u, q.choi).power_trace(q.alpha), q.s);
  }
  const CVector psi = draw_state(spec, rng);
  if (psi.size() != static_cast<long long>(q.dA) * q.dB) throw std::invalid_argument("mc_moment: state dimension differs from d_A d_B");
  return std::pow(spectrum_of(reduce_pure(psi, {q.dA, q.dB}, {0})).power_trace(q.alpha), q.s);
}

inline void check_query_against(const EnsembleSpec& spec, const MomentQuery& q) {
  spec.validate();
  if (q.alpha < 1 || q.s < 1) throw std::invalid_argument("MomentQuery: alpha and s must be >= 1");
  if (q.setting == Setting::choi && q.choi.d() != spec.dimension())
    throw std::invalid_argument("Choi partition does not match the ensemble dimension");
  if (q.setting == Setting::state && q.dA * q.dB != spec.dimension())
    throw std::invalid_argument("state split does not match the ensemble dimension");
}

inline MomentEstimate mc_moment(const EnsembleSpec& spec, const MomentQuery& q, std::uint64_t n_samples,
                                std::uint64_t seed, int workers = 1) {
  check_query_against(spec, q);
  return mc_estimate(n_samples, seed, workers, [&](PhiloxStream& rng) { return sample_moment(spec, q, rng); });
}

/// Region of the sampled object whose entropy is estimated.
enum class Region { choi_ac, state_a };

inline MomentEstimate mc_entropy(const EnsembleSpec& spec, Region region, const ChoiPartition& part, int dA, int dB,
                                 EntropyOrder order, std::uint64_t n_samples, std::uint64_t seed, int workers = 1) {
  spec.validate();
  return mc_estimate(n_samples, seed, workers, [&](PhiloxStream& rng) {
    if (region == Region::choi_ac) return unified_entropy(choi_ac_spectrum(draw_unitary(spec, rng), part), order);
    const CVector psi = draw_state(spec, rng);
    return unified_entropy(spectrum_of(reduce_pure(psi, {dA, dB}, {0})), order);
  });
}

}  // namespace designlab
