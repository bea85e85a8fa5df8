#include "designlab/symgroup.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>

using namespace designlab;

namespace {

// Cycle count by repeated orbit walking; deliberately naive.
int orbit_count(const std::vector<int>& img) {
  std::vector<bool> seen(img.size(), false);
  int c = 0;
  for (std::size_t i = 0; i < img.size(); ++i) {
    if (seen[i]) continue;
    ++c;
    for (std::size_t j = i; !seen[j]; j = img[j]) seen[j] = true;
  }
  return c;
}

int longest_increasing(const std::vector<int>& v) {
  std::vector<int> best(v.size(), 1);
  int m = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j)
      if (v[j] < v[i]) best[i] = std::max(best[i], best[j] + 1);
    m = std::max(m, best[i]);
  }
  return m;
}

}  // namespace

TEST_CASE("permutation construction and notation") {
  const auto p = Permutation::from_cycles("(1 2)(3 4 5)", 5);
  CHECK(p.images() == std::vector<int>{1, 0, 3, 4, 2});
  CHECK(p.to_cycle_string() == "(1 2)(3 4 5)");
  CHECK(Permutation::identity(3).to_cycle_string() == "()");
  CHECK(Permutation::from_cycles("()", 4) == Permutation::identity(4));
  CHECK_THROWS_AS(Permutation(std::vector<int>{0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(Permutation::from_cycles("(1 5)", 3), std::invalid_argument);
  CHECK_THROWS_AS(Permutation::from_cycles("(1 2)(2 3)", 3), std::invalid_argument);
}

TEST_CASE("composition applies the right factor first") {
  const auto a = Permutation::from_cycles("(1 2)", 3);
  const auto b = Permutation::from_cycles("(2 3)", 3);
  // b sends 0 -> 0, then a sends 0 -> 1.
  CHECK((a * b)(0) == 1);
  CHECK((a * b).to_cycle_string() == "(1 2 3)");
  CHECK((b * a).to_cycle_string() == "(1 3 2)");
  for (const auto& p : all_permutations(4)) {
    CHECK(p * p.inverse() == Permutation::identity(4));
    CHECK(cycle_count(p) + transposition_length(p) == 4);
  }
}

TEST_CASE("cycle counts") {
  CHECK(cycle_count(Permutation::identity(3)) == 3);
  CHECK(cycle_count(Permutation::from_cycles("(1 2)", 2)) == 1);
  for (int a = 1; a <= 9; ++a) CHECK(cycle_count(canonical_cycles(a)) == 1);
  for (int n = 1; n <= 6; ++n)
    for (const auto& p : all_permutations(n)) REQUIRE(cycle_count(p) == orbit_count(p.images()));
  // Degrees above the bitmask path.
  std::vector<int> big(70);
  std::iota(big.begin(), big.end(), 0);
  std::rotate(big.begin(), big.begin() + 1, big.begin() + 35);
  CHECK(cycle_count(Permutation(big)) == 36);
  CHECK(cycle_type(Permutation(big)).front() == 35);
}

TEST_CASE("canonical cycles") {
  CHECK(canonical_cycles(2) == Permutation::from_cycles("(1 2)", 2));
  const auto t22 = canonical_cycles(2, 2);
  CHECK(t22 == Permutation::from_cycles("(1 2)(3 4)", 4));
  CHECK(cycle_count(t22) == 2);
  const auto t3 = canonical_cycles(3);
  CHECK(cycle_count(t3) == 1);
  CHECK(cycle_count(t3 * t3) == 1);
  CHECK_THROWS(canonical_cycles(0));
}

TEST_CASE("genus and the cycle lemma") {
  CHECK(genus(Permutation::identity(5), 5) == 0);
  CHECK_THROWS(genus(Permutation::identity(4), 5));
  for (int a = 1; a <= 7; ++a) {
    const auto tau = canonical_cycles(a);
    std::uint64_t saturators = 0;
    for_each_permutation(a, [&](const Permutation& s) {
      const int v = orbit_count(s.images()) + orbit_count((s * tau).images());
      REQUIRE(v <= a + 1);
      REQUIRE((a + 1 - v) % 2 == 0);
      if (v == a + 1) ++saturators;
    });
    CHECK(BigInt(saturators) == catalan(a));
  }
}

TEST_CASE("catalan numbers and bounds") {
  const std::vector<int> list{1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796};
  for (unsigned k = 0; k < list.size(); ++k) CHECK(catalan(k) == list[k]);
  const auto b1 = catalan_bounds(1);
  CHECK(b1.lower == Catch::Approx(4.0 / (std::sqrt(M_PI) * std::pow(2.0, 1.5))));
  CHECK(b1.upper == Catch::Approx(4.0 / std::sqrt(M_PI)));
  CHECK(b1.lower < 1.0);
  CHECK(1.0 < b1.upper);
}

TEST_CASE("moebius function") {
  CHECK(moebius(Permutation::identity(4)) == 1);
  CHECK(moebius(Permutation::from_cycles("(1 2)", 2)) == -1);
  CHECK(moebius(Permutation::from_cycles("(1 2 3)", 3)) == 2);
  CHECK(moebius(Permutation::from_cycles("(1 2 3 4)", 4)) == -5);
  CHECK(moebius(Permutation::from_cycles("(1 2)(3 4)", 4)) == 1);
  CHECK(moebius(Permutation::from_cycles("(1 2 3)(4 5 6)", 6)) == 4);
}

TEST_CASE("genus census") {
  const auto c4 = genus_census(4, CensusMode::brute_force);
  CHECK(c4.counts == std::map<int, BigInt>{{0, 14}, {1, 10}});
  CHECK(genus_census(5, CensusMode::exact_formula).at(0) == 42);
  CHECK(genus_count_formula(1, 5) == 70);
  for (int n = 3; n <= 9; ++n)
    CHECK(genus_count_formula(1, n) == factorial(2 * n - 3) / (6 * factorial(n - 2) * factorial(n - 3)));
  for (int n = 1; n <= 8; ++n) {
    const auto f = genus_census(n, CensusMode::exact_formula);
    const auto b = genus_census(n, CensusMode::brute_force);
    CHECK(f.counts == b.counts);
    CHECK(f.total() == factorial(n));
  }
  // Formula mode reaches past the enumeration cap.
  const auto c20 = genus_census(20, CensusMode::exact_formula);
  CHECK(c20.at(0) == catalan(20));
  CHECK(c20.total() == factorial(20));
  CHECK_THROWS(genus_census(11, CensusMode::brute_force));
}

TEST_CASE("frame potential floor counts permutations with short increasing runs") {
  for (int t = 1; t <= 7; ++t)
    for (int d = 1; d <= 4; ++d) {
      std::uint64_t n = 0;
      for_each_permutation(t, [&](const Permutation& p) {
        if (longest_increasing(p.images()) <= d) ++n;
      });
      CHECK(frame_potential_floor(t, d) == BigInt(n));
    }
  CHECK(frame_potential_floor(3, 2) == 5);
  CHECK(frame_potential_floor(4, 2) == 14);
  CHECK(frame_potential_floor(3, 5) == 6);
}
