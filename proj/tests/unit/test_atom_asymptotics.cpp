#include <doctest.h>

#include <cmath>
#include <random>

#include "atomiv/atom_asymptotics.hpp"
#include "atomiv/errors.hpp"
#include "atomiv/specfun.hpp"

using namespace atomiv;
using namespace atomiv::atom;
using specfun::norm_cdf;
using specfun::norm_cdf_inv;

TEST_CASE("u_k values") {
  for (double x : {-3.0, -0.5, 0.0, 1.0, 6.0}) CHECK(u_k(x, 3.0) < norm_cdf(x));
  CHECK(std::fabs(u_k(0.0, 1e6) - 0.5) < 1e-3);
  CHECK(std::fabs(u_k(0.0, 4.0) - 0.35895260411306092826) < 1e-15);
  CHECK_THROWS_AS(u_k(0.0, 0.0), DomainError);
  CHECK_THROWS_AS(u_k(0.0, -1.0), DomainError);
}

TEST_CASE("U_K left end is negative and matches the direct formula") {
  for (double L : {0.05, 0.5, 2.0, 8.0, 30.0}) {
    const double direct = norm_cdf(-std::sqrt(2.0 * L)) - std::exp(-L) / (2.0 * specfun::kSqrtPi * std::sqrt(L));
    CHECK(u_k_left(L) == doctest::Approx(direct).epsilon(1e-9));
    CHECK(u_k_left(L) < 0.0);
  }
  CHECK(u_k_left(600.0) < 0.0);  // beyond ~700 it underflows to -0
}

TEST_CASE("u_k_inv") {
  const double L50 = std::log(50.0);
  CHECK(u_k_inv(u_k(1.3, L50), L50) == doctest::Approx(1.3).epsilon(1e-10));
  for (double L : {0.3, 2.0, 8.0, 100.0}) CHECK(u_k_inv(sign_threshold(L), L) == 0.0);
  CHECK(std::fabs(u_k_inv(0.0707, 8.0) - -1.1699796203522415946) < 1e-12);
  CHECK_THROWS_AS(u_k_inv(1.0, 4.0), DomainAbove);
  CHECK_THROWS_AS(u_k_inv(u_k_left(4.0) - 1e-6, 4.0), DomainBelow);
  CHECK(u_k_inv(u_k_left(4.0), 4.0) == doctest::Approx(-std::sqrt(8.0)));
}

TEST_CASE("u_k strictly increasing on its branch") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double L = std::exp(std::log(0.1) + unit(rng) * std::log(1e3));
    const double a = -std::sqrt(2.0 * L);
    const double x1 = a + unit(rng) * (8.0 - a);
    const double x2 = x1 + 1e-3 + unit(rng);
    REQUIRE(u_k(x1, L) < u_k(x2, L));
  }
}

TEST_CASE("u_k_inv round trip and sign law") {
  for (double L : {2.0, 4.0, 8.0, 16.0}) {
    const double left = u_k_left(L);
    for (int i = 0; i <= 400; ++i) {
      const double y = left + (1.0 - 1e-9 - left) * i / 400.0;
      const double x = u_k_inv(y, L);
      REQUIRE(std::fabs(u_k(x, L) - y) <= 1e-12);
      const double t = sign_threshold(L);
      if (y > t) REQUIRE(x > 0.0);
      if (y < t) REQUIRE(x < 0.0);
    }
  }
}

TEST_CASE("smile formula values") {
  const MarketSlice slice{1.0, 1.2};
  const double K = std::exp(-6.0);
  CHECK(smile_three_term_atom(slice, K, 0.0707) == doctest::Approx(2.3087774831994550688).epsilon(1e-12));
  CHECK(smile_dmhj(slice, K, 0.0707) == doctest::Approx(2.1047670338430695178).epsilon(1e-12));
  // m = 1/2: the correction terms vanish
  CHECK(smile_dmhj(slice, K, 0.5) == doctest::Approx(std::sqrt(2.0 * 6.0 / 1.2)).epsilon(1e-15));
  CHECK(u_k_inv(0.5, 6.0) > 0.0);
  CHECK_THROWS_AS(smile_dmhj(slice, 1.0, 0.2), DomainError);
  CHECK_THROWS_AS(smile_three_term_atom(slice, 2.0, 0.2), DomainError);
}

TEST_CASE("G and p_T variants collapse to the atom formula") {
  const MarketSlice slice{2.0, 0.8};
  AtomModel model;
  model.mass = 0.13;
  model.g = [](double) { return 0.13; };
  model.p_tilde = [](double) { return 0.0; };
  for (double k : {-3.0, -7.0, -12.0}) {
    const double K = slice.x0 * std::exp(k);
    const double atom = smile_three_term_atom(slice, K, model.mass);
    CHECK(smile_three_term_G(slice, K, model) == atom);
    CHECK(smile_three_term_pT(slice, K, model) == atom);
  }
  // Precedence: explicit g wins over the put evaluator.
  model.put = [](double K) { return 0.5 * K; };
  CHECK(model_g(model, slice, 0.1) == 0.13);
  model.g = nullptr;
  CHECK(model_g(model, slice, 0.1) == doctest::Approx(0.5));
}

TEST_CASE("g_from_put") {
  const MarketSlice slice{3.0, 1.0};
  auto put = [](double K) { return 0.2 * K + K * K; };
  const double k_big = 50.0;
  CHECK(g_from_put(put, slice, k_big) == doctest::Approx(k_big * put(3.0 / k_big) / 3.0).epsilon(1e-15));
  CHECK_THROWS_AS(g_from_put(put, slice, 0.5), DomainError);
}

TEST_CASE("leading-order formula") {
  const MarketSlice slice{1.0, 1.2};
  const double m = 0.07;
  const double K = std::exp(-5.0);
  const double expected = std::sqrt(2.0 / 1.2) * (std::sqrt(std::log(1.0 / (K * m))) - std::sqrt(std::log(1.0 / m)));
  CHECK(smile_leading(slice, K, K * m) == doctest::Approx(expected).epsilon(1e-14));
  CHECK_THROWS_AS(smile_leading(slice, K, K), DomainError);
  // Ratio to sqrt(2L/T) tends to 1.
  double prev = 1.0;
  for (double L : {10.0, 100.0, 600.0}) {
    const double Kd = std::exp(-L);
    const double ratio = smile_leading(slice, Kd, Kd * m) / std::sqrt(2.0 * L / 1.2);
    CHECK(std::fabs(ratio - 1.0) < prev);
    prev = std::fabs(ratio - 1.0);
  }
  CHECK(prev < 0.1);
}

TEST_CASE("sqrt form") {
  for (double u : {-3.0, -0.4, 0.0, 0.7, 2.0}) {
    for (double L : {2.0, 9.0}) {
      const double h = u * u + u * std::sqrt(u * u + 2.0 * L);
      CHECK(sqrt_form(1.2, L, u) == doctest::Approx(std::sqrt(2.0 / 1.2) * std::sqrt(L + h)).epsilon(1e-13));
    }
  }
}

TEST_CASE("bounds with no continuous part") {
  const MarketSlice slice{1.0, 1.2};
  AtomModel model;
  model.mass = 0.2;
  const BoundsConfig cfg{0.01};
  double prev_scaled = 0.0;
  for (double L : {10.0, 30.0, 100.0, 300.0, 600.0}) {
    const auto b = smile_bounds(slice, std::exp(-L), model, cfg);
    CHECK(b.lower <= b.upper);
    prev_scaled = (b.upper - b.lower) * std::pow(L, 1.5);
    CHECK(prev_scaled < 1.0);
  }
  CHECK(prev_scaled > 0.0);
}

TEST_CASE("lower bound reports the first depth where it exists") {
  const MarketSlice slice{1.0, 1.2};
  AtomModel model;
  model.mass = 0.01;
  const BoundsConfig cfg{0.01};
  try {
    smile_lower_bound(slice, std::exp(-0.5), model, cfg);
    FAIL("expected DomainBelow");
  } catch (const DomainBelow& e) {
    const double l_min = e.minimal_log_k();
    REQUIRE(std::isfinite(l_min));
    CHECK(l_min > 0.5);
    CHECK_NOTHROW(smile_lower_bound(slice, std::exp(-l_min * 1.001), model, cfg));
  }
}

TEST_CASE("estims ratio tends to one") {
  for (double m : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const double far = estims_ratio(m, 1e4);
    const double near = estims_ratio(m, 1e2);
    CHECK(std::fabs(far - 1.0) <= 0.02);
    CHECK(std::fabs(far - 1.0) < std::fabs(near - 1.0));
  }
  CHECK_THROWS_AS(estims_ratio(1e-6, 2.0), DomainBelow);
}

TEST_CASE("sign trichotomy") {
  const double L = 9.0;
  const double t = sign_threshold(L);
  CHECK(sign_classify(t, L) == Sign::Zero);
  const double above = t + 1e-3;
  CHECK(sign_classify(above, L) == Sign::Positive);
  CHECK(u_k_inv(above, L) > 0.0);
  CHECK(norm_cdf_inv(above) < 0.0);
  CHECK(sign_classify(1e-9, L) == Sign::Negative);
  CHECK(u_k_inv(1e-9, L) < 0.0);
  CHECK_THROWS_AS(sign_classify(0.5, L), DomainError);
}

TEST_CASE("smile formulas depend only on x0 / K") {
  AtomModel model;
  model.mass = 0.0707;
  const BoundsConfig cfg;
  for (double k : {-4.0, -9.0}) {
    const auto base = evaluate({1.0, 1.2}, std::exp(k), model, cfg);
    for (double lambda : {0.05, 30.0}) {
      const auto scaled = evaluate({lambda, 1.2}, lambda * std::exp(k), model, cfg);
      CHECK(*scaled.three_term_atom == doctest::Approx(*base.three_term_atom).epsilon(1e-12));
      CHECK(*scaled.dmhj == doctest::Approx(*base.dmhj).epsilon(1e-12));
      CHECK(*scaled.upper == doctest::Approx(*base.upper).epsilon(1e-12));
      CHECK(*scaled.leading == doctest::Approx(*base.leading).epsilon(1e-12));
    }
  }
}

TEST_CASE("quantile formula error envelope") {
  AtomModel model;
  model.mass = 0.3;
  const MarketSlice slice{1.0, 2.0};
  CHECK(dmhj_error_envelope(slice, std::exp(-8.0), model) ==
        doctest::Approx(std::sqrt(2.0) / (2.0 * std::sqrt(2.0) * std::sqrt(8.0))).epsilon(1e-15));
}
