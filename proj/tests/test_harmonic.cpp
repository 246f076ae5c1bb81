#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "antrope/harmonic.hpp"
#include "antrope/rng.hpp"
#include "oracles.hpp"

using antrope::digamma;
using antrope::euler_gamma;
using antrope::harmonic_number;
using antrope::invert_harmonic;

TEST_CASE("small harmonic numbers match hand fractions", "[harmonic]") {
  CHECK(harmonic_number(1) == 1.0);
  CHECK_THAT(harmonic_number(2), Catch::Matchers::WithinRel(1.5, 1e-15));
  CHECK_THAT(harmonic_number(4), Catch::Matchers::WithinRel(25.0 / 12.0, 1e-15));
  CHECK_THAT(harmonic_number(100), Catch::Matchers::WithinRel(5.187377517639621, 1e-15));
  CHECK_THROWS_AS(harmonic_number(0), std::domain_error);
}

TEST_CASE("harmonic numbers agree with brute summation up to the crossover", "[harmonic]") {
  for (std::uint64_t m : {10ull, 1000ull, 123456ull, 9'999'999ull, 10'000'000ull}) {
    const double expected = static_cast<double>(oracle::harmonic_brute(m));
    CHECK(std::abs(harmonic_number(m) - expected) < 1e-12);
  }
}

TEST_CASE("the asymptotic branch continues the direct branch seamlessly", "[harmonic]") {
  // H_{m+1} = H_m + 1/(m+1) across the 10^7 switch point
  const double direct = harmonic_number(10'000'000ull);
  const double asymptotic = harmonic_number(10'000'001ull);
  CHECK(std::abs(asymptotic - (direct + 1.0 / 10'000'001.0)) < 1e-12);
}

TEST_CASE("digamma matches its classic special values", "[harmonic]") {
  CHECK(std::abs(digamma(1.0) + euler_gamma) < 1e-15);
  CHECK(std::abs(digamma(2.0) - (1.0 - euler_gamma)) < 1e-15);
  CHECK(std::abs(digamma(0.5) + euler_gamma + 2.0 * std::log(2.0)) < 2e-15);
  CHECK_THROWS_AS(digamma(0.0), std::domain_error);
  CHECK_THROWS_AS(digamma(-3.0), std::domain_error);
}

TEST_CASE("digamma satisfies the recurrence psi(x+1) = psi(x) + 1/x", "[harmonic]") {
  antrope::Substream stream(5, 0);
  for (int i = 0; i < 200; ++i) {
    const double x = 0.01 + 40.0 * stream.next_unit();
    CHECK_THAT(digamma(x + 1.0), Catch::Matchers::WithinAbs(digamma(x) + 1.0 / x, 1e-12));
  }
}

TEST_CASE("digamma links harmonic numbers through psi(m+1) + gamma", "[harmonic]") {
  for (std::uint64_t m : {1ull, 5ull, 100ull, 10000ull, 5'000'000ull}) {
    const double via_digamma = digamma(static_cast<double>(m) + 1.0) + euler_gamma;
    CHECK(std::abs(via_digamma - harmonic_number(m)) < 1e-12);
  }
}

TEST_CASE("generalized harmonic sums agree between direct and digamma routes", "[harmonic]") {
  using antrope::generalized_harmonic_digamma;
  using antrope::generalized_harmonic_direct;
  const double rs[] = {0.1, 0.5, 1.0, 2.0, 17.0, 100000.0};
  const std::uint64_t ms[] = {1, 10, 1000, 400'000};
  for (double r : rs) {
    for (std::uint64_t m : ms) {
      const double direct = generalized_harmonic_direct(m, r);
      const double via_psi = generalized_harmonic_digamma(static_cast<double>(m), r);
      CHECK_THAT(via_psi, Catch::Matchers::WithinRel(direct, 1e-10));
    }
  }
  CHECK_THROWS_AS(generalized_harmonic_direct(3, 0.0), std::domain_error);
  CHECK_THROWS_AS(generalized_harmonic_digamma(3.0, -1.0), std::domain_error);
}

TEST_CASE("harmonic inversion pins the first index at or past the target", "[harmonic]") {
  CHECK(invert_harmonic(0.0).m == 1);
  CHECK(invert_harmonic(1.0).m == 1);
  CHECK(invert_harmonic(3.0).m == 11);
  CHECK(invert_harmonic(10.0).m == 12367);
  CHECK(invert_harmonic(10.0).exact);
}

TEST_CASE("inversion brackets the crossing for a dense small grid", "[harmonic]") {
  // one cumulative pass records every crossing up to c = 14
  std::vector<std::uint64_t> crossings;
  {
    long double sum = 0.0L;
    double c = 0.5;
    for (std::uint64_t m = 1; c <= 14.0 + 1e-9; ++m) {
      sum += 1.0L / static_cast<long double>(m);
      while (c <= 14.0 + 1e-9 && sum >= static_cast<long double>(c)) {
        crossings.push_back(m);
        c += 0.5;
      }
    }
  }
  double c = 0.5;
  for (std::uint64_t expected : crossings) {
    const auto inv = invert_harmonic(c);
    REQUIRE(inv.m.has_value());
    CHECK(*inv.m == expected);
    CHECK(inv.exact);
    c += 0.5;
  }
}

TEST_CASE("inversion treats an exact harmonic value as already reached", "[harmonic]") {
  // H_1 = 1 is exactly representable, so c = 1 is a genuine tie
  CHECK(invert_harmonic(1.0).m == 1);

  // doubles near H_5 land on whichever side rounding took them; compare
  // against a brute crossing with the same >= convention
  for (double c : {harmonic_number(5), std::nextafter(harmonic_number(5), 10.0)}) {
    std::uint64_t expected = 0;
    long double sum = 0.0L;
    for (std::uint64_t m = 1; expected == 0; ++m) {
      sum += 1.0L / static_cast<long double>(m);
      if (sum >= static_cast<long double>(c)) expected = m;
    }
    CHECK(invert_harmonic(c).m == expected);
  }
}

TEST_CASE("huge targets report the asymptotic inverse in log form", "[harmonic]") {
  const auto inv = invert_harmonic(100000.0);
  CHECK_FALSE(inv.m.has_value());
  CHECK_FALSE(inv.exact);
  CHECK_THAT(inv.log10_m, Catch::Matchers::WithinAbs(43429.2, 0.1));
  // the documented asymptotic inverse, computed straight from its formula
  const double direct = (100000.0 - euler_gamma) / std::log(10.0);
  CHECK_THAT(inv.log10_m, Catch::Matchers::WithinAbs(direct, inv.log10_error + 1e-9));
  CHECK(inv.log10_error < 1e-8);
  CHECK(inv.log10_error > 0.0);
}

TEST_CASE("inversion rejects invalid targets", "[harmonic]") {
  CHECK_THROWS_AS(invert_harmonic(-0.5), std::domain_error);
  CHECK_THROWS_AS(invert_harmonic(std::nan("")), std::domain_error);
  CHECK_THROWS_AS(invert_harmonic(std::numeric_limits<double>::infinity()), std::domain_error);
}
