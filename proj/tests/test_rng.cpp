#include <doctest.h>

#include <cmath>
#include <set>

#include "parkfx/rng.hpp"

using namespace parkfx;

TEST_CASE("Philox4x32-10 known-answer vectors") {
  using C = Philox4x32::Counter;
  using K = Philox4x32::Key;
  CHECK(Philox4x32::block(C{0, 0, 0, 0}, K{0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::block(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, K{0xffffffff, 0xffffffff}) ==
        C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::block(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, K{0xa4093822, 0x299f31d0}) ==
        C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and distinct") {
  PhiloxStream a(42, 1, 2), b(42, 1, 2), c(42, 1, 3);
  std::set<std::uint32_t> seen;
  for (int i = 0; i < 100; ++i) {
    auto x = a.next_u32();
    CHECK(x == b.next_u32());
    seen.insert(x);
    CHECK(x != c.next_u32());
  }
  CHECK(seen.size() == 100);
}

TEST_CASE("uniform stays in the open unit interval") {
  PhiloxStream s(1, 0, 0);
  double sum = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    double u = s.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("normal and lognormal moments") {
  PhiloxStream s(2, 0, 0);
  const int n = 200000;
  double m = 0, v = 0, lm = 0, lv = 0;
  for (int i = 0; i < n; ++i) {
    double z = s.normal();
    m += z;
    v += z * z;
    double x = s.lognormal_mean_cv(3.0, 0.25);
    lm += x;
    lv += x * x;
  }
  m /= n;
  v = v / n - m * m;
  lm /= n;
  lv = lv / n - lm * lm;
  CHECK(std::abs(m) < 0.01);
  CHECK(v == doctest::Approx(1.0).epsilon(0.02));
  CHECK(lm == doctest::Approx(3.0).epsilon(0.01));
  CHECK(std::sqrt(lv) / lm == doctest::Approx(0.25).epsilon(0.03));
}

TEST_CASE("poisson mean and variance across both samplers") {
  for (double lambda : {0.0, 0.3, 2.5, 9.9, 10.0, 37.0, 400.0}) {
    CAPTURE(lambda);
    PhiloxStream s(3, 0, static_cast<std::uint32_t>(lambda * 10));
    const int n = 100000;
    double m = 0, v = 0;
    for (int i = 0; i < n; ++i) {
      auto k = static_cast<double>(s.poisson(lambda));
      REQUIRE(k >= 0);
      m += k;
      v += k * k;
    }
    m /= n;
    v = v / n - m * m;
    if (lambda == 0.0) {
      CHECK(m == 0.0);
      continue;
    }
    double se = std::sqrt(lambda / n);
    CHECK(std::abs(m - lambda) < 5 * se);
    CHECK(v == doctest::Approx(lambda).epsilon(0.04));
  }
}
