#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dmesim/normal.hpp"
#include "dmesim/propagation.hpp"
#include "dmesim/quadrature.hpp"

using namespace dmesim;

TEST_CASE("path gain point values") {
  CHECK(path_gain(1.0, 4.5e-13, 3.5) == doctest::Approx(4.5e-13).epsilon(1e-14));
  CHECK(path_gain(5.0, 4.5e-13, 3.5) ==
        doctest::Approx(4.5e-13 * std::pow(5.0, -3.5)).epsilon(1e-13));
  CHECK(path_gain(2.0, 1.0, 2.0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK_THROWS_AS(path_gain(0.0, 1.0, 2.0), std::domain_error);
  CHECK_THROWS_AS(path_gain(-1.0, 1.0, 2.0), std::domain_error);
}

TEST_CASE("path gain is homogeneous and decreasing") {
  std::mt19937 gen(3);
  std::uniform_real_distribution<double> rd(0.01, 100.0), kd(0.1, 10.0),
      ad(2.1, 4.5);
  for (int i = 0; i < 2000; ++i) {
    const double r = rd(gen), k = kd(gen), alpha = ad(gen);
    const double lhs = path_gain(k * r, 1.0, alpha);
    const double rhs = std::pow(k, -alpha) * path_gain(r, 1.0, alpha);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    CHECK(path_gain(r * 1.5, 1.0, alpha) < path_gain(r, 1.0, alpha));
  }
}

TEST_CASE("slant gain point values and reduction to path gain") {
  CHECK(slant_gain(0.0, 1.0, 5.7e-10, 2.0) == doctest::Approx(5.7e-10).epsilon(1e-14));
  CHECK(slant_gain(3.0, 4.0, 1.0, 2.0) == doctest::Approx(1.0 / 25.0).epsilon(1e-14));
  CHECK(slant_gain(10.0, 1.0, 5.7e-10, 2.0) ==
        doctest::Approx(5.7e-10 / 101.0).epsilon(1e-13));
  std::mt19937 gen(4);
  std::uniform_real_distribution<double> d(0.01, 50.0);
  for (int i = 0; i < 1000; ++i) {
    const double r = d(gen), h = d(gen);
    CHECK(slant_gain(r, h, 2.0, 3.1) ==
          doctest::Approx(path_gain(std::hypot(r, h), 2.0, 3.1)).epsilon(1e-12));
  }
}

TEST_CASE("fading pair: full correlation collapses to x == y") {
  Xoshiro256 rng(99);
  for (int i = 0; i < 1000; ++i) {
    const FadingPair f = sample_fading_pair(2.3026, 1.0, rng);
    CHECK(f.x == f.y);
    CHECK(f.x > 0.0);
  }
}

TEST_CASE("fading pair: sample correlation of logs matches rho") {
  const int n = 1000000;
  const double sigma = sigma_db_to_ln(10.0);
  for (double rho : {0.0, 0.5}) {
    Xoshiro256 rng(123);
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0, sx3 = 0;
    for (int i = 0; i < n; ++i) {
      const FadingPair f = sample_fading_pair(sigma, rho, rng);
      const double a = std::log(f.x), b = std::log(f.y);
      sx += a; sy += b; sxx += a * a; syy += b * b; sxy += a * b;
      sx3 += a * a * a;
    }
    const double mx = sx / n, my = sy / n;
    const double vx = sxx / n - mx * mx, vy = syy / n - my * my;
    const double corr = (sxy / n - mx * my) / std::sqrt(vx * vy);
    if (rho == 0.0) {
      CHECK(std::fabs(corr) < 0.005);
    } else {
      CHECK(std::fabs(corr - rho) < 0.01);
    }
    // marginal normality of logs: skewness near zero
    const double skew = (sx3 / n - 3 * mx * vx - mx * mx * mx) / std::pow(vx, 1.5);
    CHECK(std::fabs(skew) < 0.01);
    // marginal variance is sigma^2 on each channel
    CHECK(vx == doctest::Approx(sigma * sigma).epsilon(0.01));
    CHECK(vy == doctest::Approx(sigma * sigma).epsilon(0.01));
  }
}

TEST_CASE("conditional fading density values") {
  const double sigma = 2.3026;
  SUBCASE("rho = 0 reduces to the marginal log-normal density") {
    for (double x : {0.1, 1.0, 7.3}) {
      const double marginal = std::exp(-0.5 * std::pow(std::log(x) / sigma, 2)) /
                              (x * sigma * std::sqrt(2.0 * 3.14159265358979323846));
      CHECK(conditional_fading_density(x, 2.0, sigma, 0.0) ==
            doctest::Approx(marginal).epsilon(1e-12));
    }
  }
  SUBCASE("x = y = 1 hits the peak value") {
    for (double rho : {0.0, 0.3, 0.9}) {
      const double expected =
          1.0 / (sigma * std::sqrt(2.0 * 3.14159265358979323846 * (1 - rho * rho)));
      CHECK(conditional_fading_density(1.0, 1.0, sigma, rho) ==
            doctest::Approx(expected).epsilon(1e-12));
    }
  }
  SUBCASE("density integrates to one") {
    for (double rho : {0.0, 0.7, 0.95}) {
      // integrate in w = ln x with Gaussian-width coverage
      const double sr = sigma * std::sqrt(1 - rho * rho);
      const double mid = rho * std::log(2.0);
      const auto f = [&](double w) {
        const double x = std::exp(w);
        return conditional_fading_density(x, 2.0, sigma, rho) * x;
      };
      const QuadResult q = integrate_adaptive(f, mid - 10 * sr, mid + 10 * sr);
      CHECK(std::fabs(q.value - 1.0) < 1e-6);
    }
  }
  SUBCASE("degenerate correlation is rejected") {
    CHECK_THROWS_AS(conditional_fading_density(1.0, 1.0, 2.3, 1.0), std::domain_error);
    CHECK_THROWS_AS(conditional_fading_density(-1.0, 1.0, 2.3, 0.5), std::domain_error);
  }
}

TEST_CASE("saturation probability") {
  TransponderScenario s;
  SUBCASE("median crossing gives one half") {
    // choose p_pu so that P_pu * g(5 km) equals the saturation level
    const double gain_db = 10.0 * std::log10(path_gain(5.0, s.c_pathloss, s.alpha));
    s.p_pu_dbm = PowerDbm(kSaturationDbm - gain_db);
    CHECK(saturation_probability(s, 5.0) == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("probability vanishes far away") {
    CHECK(saturation_probability(s, 5000.0) < 1e-30);
  }
  SUBCASE("Hata-suburban link budget keeps saturation below 2% at 5 km") {
    CHECK(saturation_probability(s, 5.0) < kBetaSaturation);
  }
  CHECK_THROWS_AS(saturation_probability(s, 0.0), std::domain_error);
}

TEST_CASE("ACR mask lookup") {
  CHECK(acr_for_offset(0) == 0.0);
  CHECK(acr_for_offset(1) == 60.0);
  CHECK(acr_for_offset(2) == 60.0);
  CHECK(acr_for_offset(10) == 60.0);
  CHECK_THROWS_AS(acr_for_offset(-1), std::domain_error);

  const AcrMask custom(std::map<int, double>{{0, 0.0}, {1, 45.0}, {3, 65.0}});
  CHECK(custom.db_for_offset(0) == 0.0);
  CHECK(custom.db_for_offset(2) == 45.0);
  CHECK(custom.db_for_offset(3) == 65.0);
  CHECK(custom.db_for_offset(100) == 65.0);
}
