#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "cvxid/errors.hpp"
#include "cvxid/losses.hpp"
#include "cvxid/rng.hpp"
#include "doctest.h"

using namespace cvxid;

namespace {

std::vector<LossSpec> loss_menu() {
  return {LossSpec::ll(1.0),     LossSpec::ll(1.5),       LossSpec::ll(2.0),
          LossSpec::ll(3.0),     LossSpec::huber(1.0),    LossSpec::huber(0.3),
          LossSpec::logcosh(),   LossSpec::quantile(0.4), LossSpec::quantile(0.7)};
}

}  // namespace

TEST_CASE("loss values match the piecewise definitions") {
  CHECK(loss_value(LossSpec::huber(1.0), 0.5) == 0.125);  // 0.5 * 0.5^2
  CHECK(loss_value(LossSpec::huber(1.0), 3.0) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(loss_value(LossSpec::quantile(0.4), -2.0) ==
        doctest::Approx(1.2).epsilon(1e-15));  // (gamma-1) * x
  CHECK(loss_value(LossSpec::ll(2.0), 3.0) == 9.0);
  CHECK(loss_value(LossSpec::ll(1.5), 4.0) == doctest::Approx(8.0).epsilon(1e-15));
  CHECK(loss_value(LossSpec::logcosh(), 1.0) ==
        doctest::Approx(std::log(std::cosh(1.0))).epsilon(1e-15));
  for (const auto& spec : loss_menu()) {
    CAPTURE(spec.str());
    CHECK(loss_value(spec, 0.0) == 0.0);
  }
}

TEST_CASE("logcosh large-argument form is overflow safe and accurate") {
  // Exact identity log cosh t = |t| + log1p(exp(-2|t|)) - log 2; compare the
  // two branches where both are representable.
  for (double t : {19.0, 20.5, 25.0, -30.0}) {
    const double exact = std::abs(t) + std::log1p(std::exp(-2.0 * std::abs(t))) -
                         std::log(2.0);
    CHECK(loss_value(LossSpec::logcosh(), t) == doctest::Approx(exact).epsilon(1e-15));
  }
  const double huge = loss_value(LossSpec::logcosh(), 1e6);
  CHECK(std::isfinite(huge));
  CHECK(huge == doctest::Approx(1e6 - std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("subgradients and the sign convention at kinks") {
  CHECK(loss_subgradient(LossSpec::logcosh(), 1.0) == std::tanh(1.0));
  CHECK(loss_subgradient(LossSpec::huber(1.0), 3.0) == 1.0);
  CHECK(loss_subgradient(LossSpec::huber(1.0), -3.0) == -1.0);
  CHECK(loss_subgradient(LossSpec::huber(1.0), 0.25) == 0.25);
  CHECK(loss_subgradient(LossSpec::ll(1.0), 0.0) == 1.0);  // sgn(0) = +1
  CHECK(loss_subgradient(LossSpec::ll(1.0), -2.0) == -1.0);
  CHECK(loss_subgradient(LossSpec::quantile(0.4), 0.0) == 0.4);
  CHECK(loss_subgradient(LossSpec::quantile(0.4), -0.1) ==
        doctest::Approx(-0.6).epsilon(1e-15));
  CHECK(loss_subgradient(LossSpec::ll(2.0), 3.0) == 6.0);
  CHECK(loss_subgradient(LossSpec::ll(1.5), 0.0) == 0.0);
}

TEST_CASE("growth exponents are the tight ones") {
  CHECK(growth_exponent(LossSpec::ll(2.0)) == 2.0);
  CHECK(growth_exponent(LossSpec::ll(1.5)) == 1.5);
  CHECK(growth_exponent(LossSpec::huber(1.0)) == 1.0);
  CHECK(growth_exponent(LossSpec::logcosh()) == 1.0);
  CHECK(growth_exponent(LossSpec::quantile(0.4)) == 1.0);
}

TEST_CASE("smoothness classification") {
  CHECK(LossSpec::ll(2.0).smoothness() == Smoothness::SmoothEverywhere);
  CHECK(LossSpec::ll(1.5).smoothness() == Smoothness::SmoothEverywhere);
  CHECK(LossSpec::huber(1.0).smoothness() == Smoothness::SmoothEverywhere);
  CHECK(LossSpec::logcosh().smoothness() == Smoothness::SmoothEverywhere);
  CHECK(LossSpec::ll(1.0).smoothness() == Smoothness::KinkAtZero);
  CHECK(LossSpec::quantile(0.4).smoothness() == Smoothness::KinkAtZero);
  CHECK(LossSpec::ll(1.0).kink_points() == std::vector<double>{0.0});
  CHECK(LossSpec::logcosh().kink_points().empty());
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(LossSpec::ll(0.5), ConfigError);
  CHECK_THROWS_AS(LossSpec::ll(-1.0), ConfigError);
  CHECK_THROWS_AS(LossSpec::huber(0.0), ConfigError);
  CHECK_THROWS_AS(LossSpec::huber(-1.0), ConfigError);
  CHECK_THROWS_AS(LossSpec::quantile(0.0), ConfigError);
  CHECK_THROWS_AS(LossSpec::quantile(1.0), ConfigError);
  CHECK_THROWS_AS(LossSpec::quantile(-0.4), ConfigError);
}

TEST_CASE("spec string grammar") {
  CHECK(LossSpec::parse("l1").kind == LossKind::Ll);
  CHECK(LossSpec::parse("l1").l == 1.0);
  CHECK(LossSpec::parse("l1.5").l == 1.5);
  CHECK(LossSpec::parse("l2").l == 2.0);
  CHECK(LossSpec::parse("huber:1").delta == 1.0);
  CHECK(LossSpec::parse("huber:0.25").delta == 0.25);
  CHECK(LossSpec::parse("logcosh").kind == LossKind::LogCosh);
  CHECK(LossSpec::parse("quantile:0.4").gamma == 0.4);
  CHECK_THROWS_AS(LossSpec::parse("l0.5"), ConfigError);
  CHECK_THROWS_AS(LossSpec::parse("huber:"), ConfigError);
  CHECK_THROWS_AS(LossSpec::parse("huber:x"), ConfigError);
  CHECK_THROWS_AS(LossSpec::parse("tukey"), ConfigError);
  CHECK_THROWS_AS(LossSpec::parse(""), ConfigError);
  for (const auto& spec : loss_menu()) {
    const LossSpec back = LossSpec::parse(spec.str());
    CHECK(back.kind == spec.kind);
    CHECK(back.l == spec.l);
    CHECK(back.delta == spec.delta);
    CHECK(back.gamma == spec.gamma);
  }
}

TEST_CASE("nonnegativity with a strict minimum at zero") {
  for (const auto& spec : loss_menu()) {
    CAPTURE(spec.str());
    CHECK(loss_value(spec, 0.0) == 0.0);
    for (int i = 0; i < 1000; ++i) {
      const double t = -10.0 + 20.0 * (i + 0.5) / 1000.0;  // grid avoiding 0
      CHECK(loss_value(spec, t) > 0.0);
    }
  }
}

TEST_CASE("convexity on random triples") {
  Rng rng(101);
  for (const auto& spec : loss_menu()) {
    CAPTURE(spec.str());
    for (int i = 0; i < 1000; ++i) {
      const double a = rng.uniform(-10.0, 10.0);
      const double b = rng.uniform(-10.0, 10.0);
      const double lam = rng.uniform01();
      const double lhs = loss_value(spec, lam * a + (1.0 - lam) * b);
      const double rhs = lam * loss_value(spec, a) + (1.0 - lam) * loss_value(spec, b);
      CHECK(lhs <= rhs + 1e-12);
    }
  }
}

TEST_CASE("subgradient inequality") {
  Rng rng(202);
  for (const auto& spec : loss_menu()) {
    CAPTURE(spec.str());
    for (int i = 0; i < 1000; ++i) {
      const double t = rng.uniform(-10.0, 10.0);
      const double y = rng.uniform(-10.0, 10.0);
      const double gap =
          loss_value(spec, y) - loss_value(spec, t) - loss_subgradient(spec, t) * (y - t);
      CHECK(gap >= -1e-12);
    }
  }
}

TEST_CASE("subgradient matches centered finite differences") {
  Rng rng(303);
  const double h = 1e-6;
  for (const auto& spec : loss_menu()) {
    CAPTURE(spec.str());
    const bool smooth = spec.smoothness() == Smoothness::SmoothEverywhere;
    for (int i = 0; i < 1000; ++i) {
      const double t = rng.uniform(-10.0, 10.0);
      // The second derivative of |t|^1.5 blows up at 0; keep every loss away
      // from the origin at the FD scale.
      if (std::abs(t) <= (smooth ? 1e-2 : 1e-3)) continue;
      const double fd = (loss_value(spec, t + h) - loss_value(spec, t - h)) / (2.0 * h);
      const double g = loss_subgradient(spec, t);
      CHECK(std::abs(g - fd) / (1.0 + std::abs(g)) < 1e-6);
    }
  }
}

TEST_CASE("growth bound extends from the fitted constant") {
  for (const auto& spec : loss_menu()) {
    CAPTURE(spec.str());
    const double l = growth_exponent(spec);
    double ratio_max = 0.0;
    for (int i = 0; i <= 2000; ++i) {
      const double t = -10.0 + 20.0 * i / 2000.0;
      ratio_max = std::max(ratio_max,
                           loss_value(spec, t) / (std::pow(std::abs(t), l) + 1.0));
    }
    const double c = 2.0 * ratio_max;
    for (int i = 0; i <= 2000; ++i) {
      const double t = -100.0 + 200.0 * i / 2000.0;
      CHECK(loss_value(spec, t) <= c * (std::pow(std::abs(t), l) + 1.0));
    }
  }
}
