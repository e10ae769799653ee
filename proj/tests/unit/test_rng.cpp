#include "mrgg/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

using namespace mrgg;

TEST_CASE("streams are reproducible and distinct") {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 10; ++i) CHECK(a() == b());
  CHECK(Rng(42)() != c());
  CHECK(Rng(42).split(0)() != Rng(42).split(1)());
  CHECK(Rng(42).split(3)() == Rng(42).split(3)());
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 2));
}

TEST_CASE("derived distributions stay in range and have the right moments") {
  Rng rng(7);
  const int m = 200000;
  double su = 0, sn = 0, sn2 = 0, sb = 0;
  for (int i = 0; i < m; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    su += u;
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
    const double x = rng.beta(2.0, 5.0);
    REQUIRE(x >= 0.0);
    REQUIRE(x <= 1.0);
    sb += x;
  }
  CHECK(su / m == doctest::Approx(0.5).epsilon(0.01));
  CHECK(std::abs(sn / m) < 0.01);
  CHECK(sn2 / m == doctest::Approx(1.0).epsilon(0.02));
  CHECK(sb / m == doctest::Approx(2.0 / 7.0).epsilon(0.01));
}

TEST_CASE("uniform_open never returns an endpoint and bernoulli handles the edges") {
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform_open();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    CHECK_FALSE(rng.bernoulli(0.0));
    CHECK(rng.bernoulli(1.0));
  }
}
