#pragma once

#include <string>
#include <vector>

namespace cvxid {

enum class LossKind { Ll, Huber, LogCosh, Quantile };

enum class Smoothness { SmoothEverywhere, KinkAtZero };

// Convex residual penalty. Supported families:
//   l<r>           |t|^r with r >= 1          ("l1", "l2", "l1.5", ...)
//   huber:<delta>  t^2/2 inside [-delta, delta], linear tails
//   logcosh        log(cosh t)
//   quantile:<g>   pinball loss, slope g for t >= 0 and g-1 for t < 0
struct LossSpec {
  LossKind kind = LossKind::Ll;
  double l = 2.0;      // Ll exponent, >= 1
  double delta = 1.0;  // Huber threshold, > 0
  double gamma = 0.5;  // quantile level, in (0, 1)

  static LossSpec ll(double exponent);
  static LossSpec huber(double delta);
  static LossSpec logcosh();
  static LossSpec quantile(double gamma);

  // Grammar: "l1" | "l2" | "l<r>" | "huber:<delta>" | "logcosh" | "quantile:<g>".
  static LossSpec parse(const std::string& text);
  std::string str() const;

  Smoothness smoothness() const;
  std::vector<double> kink_points() const;  // empty for smooth losses
};

// sgn with sgn(0) = +1. Fixes the subgradient selection at kinks so the
// batch subgradient and the recursive update direction agree bit for bit.
inline double sign_or_one(double t) { return t >= 0.0 ? 1.0 : -1.0; }

double loss_value(const LossSpec& spec, double t);

// Derivative where it exists; at kinks the selection follows sign_or_one
// (L1 gives +1 at 0, quantile gives gamma at 0).
double loss_subgradient(const LossSpec& spec, double t);

// Tightest l with |Phi(t)| <= c(|t|^l + 1). Drives the power-law truncation
// bound M_sigma = sigma^(1/(1+2l)): a tight exponent keeps the bound growing
// as fast as the family allows.
double growth_exponent(const LossSpec& spec);

}  // namespace cvxid
