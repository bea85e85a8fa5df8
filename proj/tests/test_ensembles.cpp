#include "designlab/ensembles.hpp"

#include <catch_amalgamated.hpp>

using namespace designlab;
using Catch::Approx;

TEST_CASE("Philox known-answer vectors") {
  // Random123 kat_vectors for philox4x32_10.
  CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == std::array<std::uint32_t, 4>{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        std::array<std::uint32_t, 4>{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        std::array<std::uint32_t, 4>{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("stream draws") {
  PhiloxStream a(7, 3), b(7, 3), c(7, 4);
  CHECK(a.next_u64() == b.next_u64());
  CHECK(a() != c());
  PhiloxStream r(kDefaultSeed, 0);
  double s = 0, s2 = 0;
  std::vector<int> hist(5, 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double x = r.normal();
    s += x;
    s2 += x * x;
    const double u = r.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    ++hist[r.below(5)];
  }
  CHECK(std::abs(s / n) < 4 / std::sqrt(double(n)));
  CHECK(s2 / n == Approx(1.0).epsilon(0.02));
  for (int h : hist) CHECK(std::abs(h - n / 5.0) < 4 * std::sqrt(n * 0.16));
}

TEST_CASE("Haar samplers") {
  for (int d : {1, 2, 5, 16}) {
    const CMatrix u = sample_haar_unitary(d, kDefaultSeed, d);
    CHECK((u.adjoint() * u - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(sample_haar_state(d, kDefaultSeed, d).norm() == Approx(1.0).epsilon(1e-12));
  }
  CHECK(sample_haar_unitary(4, 1, 2) == sample_haar_unitary(4, 1, 2));
  CHECK(sample_haar_unitary(4, 1, 2) != sample_haar_unitary(4, 1, 3));
}

TEST_CASE("first-moment twirl") {
  const int d = 3;
  CMatrix x(d, d);
  x << 1, 2, 0, Complex(0, 1), -1, 3, 0.5, 0, 2;
  const Complex tr = x.trace();
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      const Complex want = r == c ? tr / double(d) : Complex(0);
      const auto re = mc_estimate(10000, kDefaultSeed, 1, [&](PhiloxStream& g) {
        const CMatrix u = haar_unitary(d, g);
        return (u * x * u.adjoint())(r, c).real();
      });
      CHECK(std::abs(re.z_score(want.real())) <= 4);
    }
}

TEST_CASE("Pauli ensemble") {
  const auto p1 = pauli_ensemble(1);
  REQUIRE(p1.size() == 4);
  CHECK(group_frame_potential(p1, 1) == 1);
  const auto p2 = pauli_ensemble(2);
  CHECK(group_frame_potential(p2, 1) == 1);
  CHECK(group_frame_potential(p2, 2) > 2);
  // Every two-qubit Pauli maps computational states to computational states up to phase,
  // so its Choi rho_AC across the qubit cut is pure.
  for (const auto& u : p2) CHECK(choi_ac_spectrum(u, ChoiPartition::equal(2, 2)).max() == Approx(1.0));
  CHECK(pauli_string(2, 0) == CMatrix::Identity(4, 4));
}

TEST_CASE("Clifford group enumeration") {
  const auto& c1 = clifford_group(1);
  const auto& c2 = clifford_group(2);
  CHECK(c1.size() == 24);
  CHECK(c2.size() == 11520);
  for (int t = 1; t <= 3; ++t) CHECK(group_frame_potential(c1, t) == frame_potential_floor(t, 2));
  CHECK(group_frame_potential(c1, 4) > frame_potential_floor(4, 2));
  CHECK(group_frame_potential(c2, 1) == 1);
  CHECK(group_frame_potential(c2, 2) == 2);
  CHECK(group_frame_potential(c2, 3) == 6);
  CHECK(group_frame_potential(c2, 4) > 24);
  // The identity alone is as far from a 1-design as possible.
  CHECK(group_frame_potential({CMatrix::Identity(2, 2)}, 1) == 4);
}

TEST_CASE("Clifford sampler") {
  for (int n = 1; n <= 5; ++n) {
    const CMatrix u = clifford_sampler(n, kDefaultSeed, n);
    const int d = 1 << n;
    CHECK((u.adjoint() * u - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-10);
    // Conjugation maps Z on qubit 0 to a signed Pauli: U Z U^dagger squares to I and has zero trace.
    const CMatrix z0 = kron(pauli_1q(3), CMatrix::Identity(d / 2, d / 2));
    const CMatrix img = u * z0 * u.adjoint();
    CHECK((img * img - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(std::abs(img.trace()) < 1e-10);
    int nonzero = 0;
    for (int c = 0; c < d; ++c) nonzero += std::abs(img(0, c)) > 1e-9;
    CHECK(nonzero == 1);
  }
  CHECK_THROWS(clifford_sampler(6, 1, 0));
  // Single-qubit samples hit all 24 elements up to phase.
  std::set<std::vector<long long>> seen;
  for (int i = 0; i < 2000; ++i) seen.insert(detail::phase_key(clifford_sampler(1, kDefaultSeed, i)));
  CHECK(seen.size() == 24);
}

TEST_CASE("stabilizer orbits as projective designs") {
  const auto o1 = orbit_of_zero(clifford_group(1));
  CHECK(o1.size() == 6);
  CHECK(projective_frame_potential(o1, 3) == Approx(4.0).epsilon(1e-12));
  const auto o2 = orbit_of_zero(clifford_group(2));
  CHECK(o2.size() == 60);
  CHECK(projective_frame_potential(o2, 3) == Approx(20.0).epsilon(1e-12));
  CHECK(projective_frame_potential(o2, 4) > to_double(sym_subspace_dim(4, 4)) * 1.01);
}

TEST_CASE("local circuits") {
  PhiloxStream rng(kDefaultSeed, 0);
  CHECK(local_random_circuit(3, 0, rng) == CMatrix::Identity(8, 8));
  const CMatrix u = local_random_circuit(4, 10, rng);
  CHECK((u.adjoint() * u - CMatrix::Identity(16, 16)).cwiseAbs().maxCoeff() < 1e-10);
  // Depth sweep: entanglement grows and saturates near the Haar value.
  MomentQuery q;
  q.choi = ChoiPartition::equal(4, 4);
  q.alpha = 2;
  double prev = kInf;
  for (int depth : {1, 3, 8, 20}) {
    const auto e = mc_moment(qubit_spec(EnsembleKind::local_circuit, 4, depth), q, 2000, kDefaultSeed, 2);
    CHECK(e.mean < prev);
    prev = e.mean;
  }
  const auto deep = mc_moment(qubit_spec(EnsembleKind::local_circuit, 4, 40), q, 2000, kDefaultSeed, 2);
  CHECK(std::abs(deep.mean / (2.0 / 17) - 1) < 0.05);
}

TEST_CASE("partial scrambler") {
  PhiloxStream rng(kDefaultSeed, 0);
  const CMatrix inner = haar_unitary(16, rng);
  CHECK(partial_scrambler(16, 4, inner) == inner);
  CHECK(partial_scrambler(16, 0, CMatrix()) == CMatrix::Identity(16, 16));
  const CMatrix v = partial_scrambler(64, 4, inner);
  CHECK((v.adjoint() * v - CMatrix::Identity(64, 64)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK_THROWS(partial_scrambler(15, 2, inner));
  CHECK_THROWS(partial_scrambler(64, 3, inner));
  // Fixed beta: sqrt(d) - D = d^{1/4}, so the unscrambled corner keeps the gap growing with d.
  double prev = -1;
  for (int r : {4, 8, 16}) {
    const int d = r * r;
    const int D = r - static_cast<int>(std::lround(std::sqrt(double(r))));
    auto spec = partial_scrambler_spec(d, D);
    const auto e = mc_entropy(spec, Region::choi_ac, ChoiPartition::equal(r, r), 0, 0, EntropyOrder::renyi(3), 200, kDefaultSeed, 2);
    const double gap = std::log2(double(d)) - e.mean;
    CHECK(gap > prev);
    prev = gap;
  }
}

TEST_CASE("Monte Carlo estimator") {
  Welford a, b, all;
  for (int i = 0; i < 10; ++i) {
    (i < 4 ? a : b).push(i * i);
    all.push(i * i);
  }
  a.merge(b);
  CHECK(a.mean == Approx(all.mean));
  CHECK(a.variance() == Approx(all.variance()));

  MomentQuery q;
  q.choi = ChoiPartition::equal(2, 2);
  q.alpha = 2;
  const auto spec = haar_unitary_spec(4);
  const auto e1 = mc_moment(spec, q, 1000, 99, 1);
  const auto e4 = mc_moment(spec, q, 1000, 99, 4);
  CHECK(e1.mean == e4.mean);
  CHECK(e1.stderr() == e4.stderr());
  CHECK(mc_moment(spec, q, 1000, 100, 1).mean != e1.mean);
  CHECK_THROWS(mc_estimate(0, 1, 1, [](PhiloxStream&) { return 0.0; }));
  CHECK_THROWS(mc_moment(haar_unitary_spec(9), q, 10, 1, 1));
  CHECK_THROWS(mc_moment(haar_state_spec(2, 2), q, 10, 1, 1));

  MomentQuery s;
  s.setting = Setting::state;
  s.dA = s.dB = 4;
  s.alpha = 2;
  const auto es = mc_moment(haar_state_spec(4, 4), s, 20000, kDefaultSeed, 2);
  CHECK(std::abs(es.z_score(8.0 / 17)) <= 4);
}

TEST_CASE("sample entropies respect the Jensen floor and the min-entropy ordering") {
  const auto spec = haar_unitary_spec(16);
  const auto p = ChoiPartition::equal(4, 4);
  for (double a : {2.0, 3.0}) {
    const auto e = mc_entropy(spec, Region::choi_ac, p, 0, 0, EntropyOrder::renyi(a), 2000, kDefaultSeed, 2);
    CHECK(e.mean >= jensen_renyi_floor(to_double(haar_choi_moment(p, static_cast<int>(a))), a) - 4 * e.stderr());
  }
  PhiloxStream rng(kDefaultSeed, 5);
  for (int k = 0; k < 50; ++k) {
    const auto sp = choi_ac_spectrum(haar_unitary(16, rng), p);
    for (double a : {0.5, 1.0, 2.0, 5.0}) CHECK(min_entropy(sp) <= renyi_entropy(sp, a) + 1e-12);
  }
  // -I3 at order 2 averages above log d - 2.
  const auto i3 = mc_estimate(500, kDefaultSeed, 2, [&](PhiloxStream& g) {
    return info_quantities(choi_region_entropies(haar_unitary(16, g), p, EntropyOrder::renyi(2))).minus_tripartite;
  });
  CHECK(i3.mean >= 4 - 2 - 4 * i3.stderr());
}

TEST_CASE("ensemble specs") {
  CHECK(to_string(EnsembleKind::partial_scrambler) == "partial-scrambler");
  CHECK(ensemble_kind_from_string("local-circuit") == EnsembleKind::local_circuit);
  CHECK_THROWS(ensemble_kind_from_string("gaussian"));
  CHECK(qubit_spec(EnsembleKind::clifford, 3).default_partition() == ChoiPartition(2, 4, 2, 4));
  CHECK(haar_unitary_spec(16).default_partition() == ChoiPartition::equal(4, 4));
  CHECK_THROWS(haar_unitary_spec(8).default_partition());
  EnsembleSpec bad = partial_scrambler_spec(64, 4);
  bad.inner = std::make_shared<EnsembleSpec>(haar_unitary_spec(9));
  CHECK_THROWS(bad.validate());
  CHECK_THROWS(qubit_spec(EnsembleKind::clifford, 6).validate());
}
