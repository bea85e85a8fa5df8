#include "designlab/ensembles.hpp"
#include "designlab/moments.hpp"

#include <catch_amalgamated.hpp>

using namespace designlab;
using Catch::Approx;

namespace {

// Haar average of tr rho_AC^alpha expanded entry by entry: rho_AC = M M^dagger
// with M[(k dC + m), (l dD + o)] = U[m dD + o, k dB + l] / sqrt(d), and each
// product of U and conj(U) entries integrated as a monomial.
Rational choi_moment_by_monomials(const ChoiPartition& p, int alpha) {
  const int d = p.d();
  const int rows = p.dA * p.dC, cols = p.dB * p.dD;
  auto u_row = [&](int x, int y) { return (x % p.dC) * p.dD + y % p.dD; };
  auto u_col = [&](int x, int y) { return (x / p.dC) * p.dB + y / p.dD; };
  std::vector<int> xs(alpha, 0), ys(alpha, 0);
  Rational sum = 0;
  std::vector<int> i(alpha), j(alpha), ip(alpha), jp(alpha);
  const long long nx = static_cast<long long>(std::pow(rows, alpha)), ny = static_cast<long long>(std::pow(cols, alpha));
  for (long long a = 0; a < nx; ++a) {
    long long ra = a;
    for (int k = 0; k < alpha; ++k, ra /= rows) xs[k] = static_cast<int>(ra % rows);
    for (long long b = 0; b < ny; ++b) {
      long long rb = b;
      for (int k = 0; k < alpha; ++k, rb /= cols) ys[k] = static_cast<int>(rb % cols);
      for (int k = 0; k < alpha; ++k) {
        const int xn = xs[(k + 1) % alpha];
        i[k] = u_row(xs[k], ys[k]);
        j[k] = u_col(xs[k], ys[k]);
        ip[k] = u_row(xn, ys[k]);
        jp[k] = u_col(xn, ys[k]);
      }
      // Quick reject: the row and column multisets must agree.
      auto si = i, sip = ip, sj = j, sjp = jp;
      std::sort(si.begin(), si.end());
      std::sort(sip.begin(), sip.end());
      std::sort(sj.begin(), sj.end());
      std::sort(sjp.begin(), sjp.end());
      if (si != sip || sj != sjp) continue;
      sum += haar_monomial_integral(d, i, j, ip, jp);
    }
  }
  return sum / ipow(Rational(d), alpha);
}

// Same idea for a Haar state, realised as the first column of a Haar unitary.
Rational state_moment_by_monomials(int dA, int dB, int alpha) {
  const int d = dA * dB;
  std::vector<int> as(alpha), bs(alpha), i(alpha), j(alpha, 0), ip(alpha), jp(alpha, 0);
  Rational sum = 0;
  const long long na = static_cast<long long>(std::pow(dA, alpha)), nb = static_cast<long long>(std::pow(dB, alpha));
  for (long long x = 0; x < na; ++x) {
    long long r = x;
    for (int k = 0; k < alpha; ++k, r /= dA) as[k] = static_cast<int>(r % dA);
    for (long long y = 0; y < nb; ++y) {
      long long q = y;
      for (int k = 0; k < alpha; ++k, q /= dB) bs[k] = static_cast<int>(q % dB);
      for (int k = 0; k < alpha; ++k) {
        i[k] = as[k] * dB + bs[k];
        ip[k] = as[(k + 1) % alpha] * dB + bs[k];
      }
      sum += haar_monomial_integral(d, i, j, ip, jp);
    }
  }
  return sum;
}

}  // namespace

TEST_CASE("Choi moments against the entrywise expansion") {
  for (const auto& p : {ChoiPartition::equal(2, 2), ChoiPartition(1, 4, 2, 2), ChoiPartition(2, 2, 4, 1), ChoiPartition(4, 1, 1, 4)})
    for (int a = 1; a <= 3; ++a) CHECK(haar_choi_moment(p, a) == choi_moment_by_monomials(p, a));
  CHECK(haar_choi_moment(ChoiPartition(1, 3, 3, 1), 2) == choi_moment_by_monomials(ChoiPartition(1, 3, 3, 1), 2));
}

TEST_CASE("Choi moment closed forms") {
  for (int r = 2; r <= 8; ++r) {
    const int d = r * r;
    CHECK(haar_choi_moment(ChoiPartition::equal(r, r), 2) == Rational(2, d + 1));
    CHECK(haar_choi_moment(ChoiPartition::equal(r, r), 3) == choi_third_moment_closed(d));
    CHECK(haar_choi_moment(ChoiPartition::equal(r, r), 1) == 1);
  }
  CHECK(haar_choi_moment(ChoiPartition::equal(2, 2), 3) == Rational(186, 960));
  CHECK(to_double(choi_third_moment_closed(4)) <= 5.0 / 16);
  // General partitions at alpha = 2: [(dA dC + dB dD) - (dA dD + dB dC)/d] / (d^2 - 1).
  for (const auto& p : {ChoiPartition(1, 6, 2, 3), ChoiPartition(2, 3, 6, 1), ChoiPartition(3, 4, 2, 6)}) {
    const Rational d(p.d());
    const Rational want = (Rational(p.dA * p.dC + p.dB * p.dD) - Rational(p.dA * p.dD + p.dB * p.dC) / d) / (d * d - 1);
    CHECK(haar_choi_moment(p, 2) == want);
  }
  CHECK_THROWS_AS(haar_choi_moment(ChoiPartition::equal(1, 2), 3), std::domain_error);
  CHECK_THROWS_AS(haar_choi_moment(ChoiPartition::equal(3, 3), 7), std::invalid_argument);
}

TEST_CASE("Choi moment powers") {
  for (int r = 2; r <= 4; ++r) {
    const auto p = ChoiPartition::equal(r, r);
    CHECK(haar_choi_moment_power(p, 2, 1) == haar_choi_moment(p, 2));
    CHECK(haar_choi_moment_power(p, 1, 3) == 1);
  }
  // Approach to Cat^s d^{(1 - alpha) s}.
  double prev = kInf;
  for (int r : {3, 4, 6, 8}) {
    const int d = r * r;
    const double ratio = to_double(haar_choi_moment_power(ChoiPartition::equal(r, r), 2, 2)) * d * d / 4.0;
    CHECK(std::abs(ratio - 1) < prev);
    prev = std::abs(ratio - 1);
  }
  CHECK(prev < 0.1);
  // Monte Carlo at d = 9.
  const double exact = to_double(haar_choi_moment_power(ChoiPartition::equal(3, 3), 2, 2));
  MomentQuery q;
  q.choi = ChoiPartition::equal(3, 3);
  q.alpha = 2;
  q.s = 2;
  const auto e = mc_moment(haar_unitary_spec(9), q, 20000, kDefaultSeed, 2);
  INFO("exact " << exact << " mc " << e.mean << " +- " << e.stderr());
  CHECK(std::abs(e.z_score(exact)) <= 4);
}

TEST_CASE("Choi moments do not depend on the worker count") {
  detail::ChoiCountTable a = detail::build_choi_counts(4, 1, 1);
  detail::ChoiCountTable b = detail::build_choi_counts(4, 1, 3);
  CHECK(a.entries == b.entries);
}

TEST_CASE("state moments") {
  for (int dA = 1; dA <= 8; ++dA)
    for (int dB = 1; dB <= 8; ++dB) CHECK(haar_state_moment(dA, dB, 2) == lubkin_purity(dA, dB));
  for (int d = 1; d <= 20; ++d) {
    CHECK(haar_state_moment(d, d, 3) == Rational(5 * d * d + 1, (d * d + 1) * (d * d + 2)));
    CHECK(haar_state_moment(d, d, 4) == state_moment_closed_equal(d, 4));
    CHECK(to_double(haar_state_moment(d, d, 4)) <= 14.0 / std::pow(d, 3));
  }
  CHECK(haar_state_moment(4, 4, 3) == Rational(81, 306));
  for (auto [dA, dB] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 2}, std::pair{1, 4}})
    for (int a = 1; a <= 3; ++a) CHECK(haar_state_moment(dA, dB, a) == state_moment_by_monomials(dA, dB, a));
  CHECK(haar_state_moment(3, 5, 4) == haar_state_moment(5, 3, 4));
  CHECK_THROWS(haar_state_moment(2, 2, 9));
}

TEST_CASE("symmetric subspace dimension") {
  CHECK(sym_subspace_dim(4, 2) == 10);
  CHECK(sym_subspace_dim(2, 3) == 4);
  CHECK(sym_subspace_dim(16, 4) == 3876);
}

TEST_CASE("Jensen floor and Page formula") {
  CHECK(jensen_renyi_floor(2.0 / 17, 2) == Approx(std::log2(17.0 / 2)));
  CHECK(jensen_renyi_floor(std::pow(32.0, -2), 3) == Approx(5.0));
  CHECK_THROWS(jensen_renyi_floor(0.0, 2));
  CHECK_THROWS(jensen_renyi_floor(0.5, 1));
  CHECK(page_average_entropy(2, 2) == Approx((1.0 / 3) / std::log(2.0)));
  CHECK(page_average_entropy(1, 9) == 0);
  CHECK(page_average_entropy(4, 4) > 2 - 1 / (2 * std::log(2.0)));
  CHECK_THROWS(page_average_entropy(4, 2));
  for (int a = 2; a <= 8; ++a) CHECK(std::log2(to_double(catalan(a))) / (a - 1) <= 2.0 * a / (a - 1));
}

TEST_CASE("bound reports") {
  CHECK(min_entropy_constant(256) == Approx(4 * std::pow(2.0, 7.0 / 16)));
  CHECK(min_entropy_constant(256) == Approx(5.417).epsilon(1e-3));
  CHECK(min_entropy_constant(4) == 7);
  CHECK(haar_min_entropy_floor(256).value == Approx(8 - std::log2(4 * std::pow(2.0, 7.0 / 16))));
  CHECK(haar_min_entropy_floor(256).value == Approx(5.563).epsilon(1e-3));
  CHECK(state_renyi_floor_gap2(8, 32).value == Approx(1.0));
  CHECK(h_of_q(0) == 1);
  // Near the validity edge the bound is flagged, not extrapolated.
  const auto edge = choi_trace_bound(9, 3);
  CHECK_FALSE(edge.preconditions_met);
  CHECK(std::isnan(edge.value));
  const auto ok = choi_trace_bound(64, 2);
  CHECK(ok.preconditions_met);
  CHECK(to_double(haar_choi_moment(ChoiPartition::equal(8, 8), 2)) <= ok.value);
  // m-approximate penalty with eps = 2^{-3 alpha n} vanishes as n grows.
  double prev = kInf;
  for (int n = 2; n <= 12; n += 2) {
    const double pen = m_approx_asymptotic_penalty(1 << n, 3, std::pow(2.0, -9.0 * n)).value;
    CHECK(pen < prev);
    prev = pen;
  }
  CHECK(frame_potential_floor_report(3, 4).value == 6);
  CHECK(log_design_min_entropy_floor(1 << 12, 1.0).preconditions_met);
  CHECK_FALSE(log_design_min_entropy_floor(4, 0.5).preconditions_met);
}

TEST_CASE("bound suite covers the query") {
  MomentQuery q;
  q.choi = ChoiPartition::equal(8, 8);
  q.alpha = 2;
  const auto suite = bound_suite(q, 1e-9, 0.1);
  CHECK(suite.size() >= 8);
  for (const auto& b : suite)
    if (b.preconditions_met) CHECK(std::isfinite(b.value));
  MomentQuery s;
  s.setting = Setting::state;
  s.dA = 4;
  s.dB = 16;
  s.alpha = 3;
  const double ex = to_double(haar_state_moment(4, 16, 3));
  for (const auto& b : bound_suite(s)) {
    if (b.name == "state_trace_upper") CHECK(ex <= b.value);
    if (b.name == "state_renyi_lower_ratio") CHECK(jensen_renyi_floor(ex, 3) >= b.value);
  }
  q.alpha = 7;
  CHECK_THROWS(bound_suite(q));
}
