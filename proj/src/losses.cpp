#include "cvxid/losses.hpp"

#include <charconv>
#include <cmath>

#include "cvxid/errors.hpp"

namespace cvxid {

namespace {

double parse_number(const std::string& text, std::size_t pos, const char* what) {
  double value = 0.0;
  const char* first = text.data() + pos;
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw ConfigError("invalid " + std::string(what) + " in loss spec \"" + text + "\"");
  }
  return value;
}

}  // namespace

LossSpec LossSpec::ll(double exponent) {
  if (!(exponent >= 1.0) || !std::isfinite(exponent)) {
    throw ConfigError("Ll loss requires exponent l >= 1");
  }
  LossSpec spec;
  spec.kind = LossKind::Ll;
  spec.l = exponent;
  return spec;
}

LossSpec LossSpec::huber(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw ConfigError("Huber loss requires delta > 0");
  }
  LossSpec spec;
  spec.kind = LossKind::Huber;
  spec.delta = delta;
  return spec;
}

LossSpec LossSpec::logcosh() {
  LossSpec spec;
  spec.kind = LossKind::LogCosh;
  return spec;
}

LossSpec LossSpec::quantile(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw ConfigError("quantile loss requires gamma in (0, 1)");
  }
  LossSpec spec;
  spec.kind = LossKind::Quantile;
  spec.gamma = gamma;
  return spec;
}

LossSpec LossSpec::parse(const std::string& text) {
  if (text == "logcosh") return logcosh();
  if (text.rfind("huber:", 0) == 0) return huber(parse_number(text, 6, "delta"));
  if (text.rfind("quantile:", 0) == 0) return quantile(parse_number(text, 9, "gamma"));
  if (text.size() > 1 && text[0] == 'l') return ll(parse_number(text, 1, "exponent"));
  throw ConfigError("unknown loss spec \"" + text + "\"");
}

std::string LossSpec::str() const {
  auto num = [](double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
  };
  switch (kind) {
    case LossKind::Ll:
      return "l" + num(l);
    case LossKind::Huber:
      return "huber:" + num(delta);
    case LossKind::LogCosh:
      return "logcosh";
    case LossKind::Quantile:
      return "quantile:" + num(gamma);
  }
  return {};
}

Smoothness LossSpec::smoothness() const {
  switch (kind) {
    case LossKind::Ll:
      return l > 1.0 ? Smoothness::SmoothEverywhere : Smoothness::KinkAtZero;
    case LossKind::Huber:
    case LossKind::LogCosh:
      return Smoothness::SmoothEverywhere;
    case LossKind::Quantile:
      return Smoothness::KinkAtZero;
  }
  return Smoothness::SmoothEverywhere;
}

std::vector<double> LossSpec::kink_points() const {
  return smoothness() == Smoothness::KinkAtZero ? std::vector<double>{0.0}
                                                : std::vector<double>{};
}

double loss_value(const LossSpec& spec, double t) {
  switch (spec.kind) {
    case LossKind::Ll: {
      if (spec.l == 1.0) return std::abs(t);
      if (spec.l == 2.0) return t * t;
      const double a = std::abs(t);
      if (spec.l == 1.5) return a * std::sqrt(a);
      return std::pow(a, spec.l);
    }
    case LossKind::Huber: {
      const double a = std::abs(t);
      if (a <= spec.delta) return 0.5 * t * t;
      return spec.delta * a - 0.5 * spec.delta * spec.delta;
    }
    case LossKind::LogCosh: {
      const double a = std::abs(t);
      // cosh overflows near |t| ~ 710; switch to the exact tail form early.
      if (a > 20.0) return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
      return std::log(std::cosh(t));
    }
    case LossKind::Quantile:
      return t >= 0.0 ? spec.gamma * t : (spec.gamma - 1.0) * t;
  }
  return 0.0;
}

double loss_subgradient(const LossSpec& spec, double t) {
  switch (spec.kind) {
    case LossKind::Ll:
      if (spec.l == 1.0) return sign_or_one(t);
      if (spec.l == 2.0) return 2.0 * t;
      if (t == 0.0) return 0.0;
      if (spec.l == 1.5) return 1.5 * std::sqrt(std::abs(t)) * sign_or_one(t);
      return spec.l * std::pow(std::abs(t), spec.l - 1.0) * sign_or_one(t);
    case LossKind::Huber: {
      if (std::abs(t) <= spec.delta) return t;
      return spec.delta * sign_or_one(t);
    }
    case LossKind::LogCosh:
      return std::tanh(t);
    case LossKind::Quantile:
      return t >= 0.0 ? spec.gamma : spec.gamma - 1.0;
  }
  return 0.0;
}

double growth_exponent(const LossSpec& spec) {
  // Huber and logcosh have linear tails; the quantile loss is piecewise
  // linear. Only |t|^l grows faster than linearly.
  return spec.kind == LossKind::Ll ? spec.l : 1.0;
}

}  // namespace cvxid
