#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cvxid/dataset.hpp"
#include "cvxid/losses.hpp"

namespace cvxid {

enum class BoundKind { PowerLaw, Geometric };

// Step sizes a_k = a0/k plus the expanding truncation bounds M_sigma:
// m0 * sigma^(1/(1+2l)) for the smooth-gradient recursion, m0 * r^(sigma-1)
// for the sign and quantile recursions. The harmonic step form is fixed; only
// a0 is configurable, which keeps a_k -> 0 and sum a_k = inf structural.
//
// m0 scales the bound without touching its growth rate. The default 10 starts
// the bound above the parameter norms seen in practice, so truncations die
// out within a handful of steps; with m0 = 1 the power-law bound needs
// sigma^(1/(1+2l)) to outgrow ||theta*|| one reset at a time, which takes
// astronomically many steps once a_k has decayed.
struct Schedule {
  double a0 = 1.0;
  BoundKind bound = BoundKind::Geometric;
  double power_exponent = 1.0 / 3.0;  // PowerLaw: 1/(1+2l)
  double m0 = 10.0;                   // bound scale (both kinds)
  double growth = 2.0;                // Geometric ratio, > 1

  static Schedule power_law(double growth_exponent_l, double a0 = 1.0,
                            double m0 = 10.0);
  static Schedule geometric(double m0 = 10.0, double growth = 2.0, double a0 = 1.0);

  double step_size(std::int64_t k) const;  // a_k, k >= 1
};

double truncation_bound(const Schedule& sched, std::int64_t sigma);

enum class UpdateKind { SmoothGradient, SignLAD, QuantileAsymmetric };

// Update direction h for one observation:
//   SmoothGradient      h = x * phi(y - theta^T x)
//   SignLAD             h = x * sgn(y - theta^T x)
//   QuantileAsymmetric  h = gamma * x if the residual is >= 0, (gamma-1) * x
//                       otherwise
struct UpdateRule {
  UpdateKind kind = UpdateKind::SmoothGradient;
  LossSpec spec;

  static UpdateRule smooth_gradient(const LossSpec& spec);
  static UpdateRule sign_lad();
  static UpdateRule quantile(double gamma);
  // L1 -> SignLAD, quantile -> QuantileAsymmetric, smooth -> SmoothGradient.
  static UpdateRule for_loss(const LossSpec& spec);

  Schedule default_schedule(double a0 = 1.0) const;
};

struct RecursiveState {
  std::vector<double> theta;
  std::int64_t sigma = 1;  // truncation counter, starts at 1
  std::int64_t k = 1;      // index of the next observation to consume
  std::vector<std::int64_t> truncation_log;

  static RecursiveState start(std::vector<double> theta1);
};

// One recursion step on (x, y): the candidate theta + a_k h is kept when its
// norm fits inside M_sigma, otherwise theta resets to the origin and sigma
// advances. Non-finite observations are rejected (state untouched).
void sa_step(RecursiveState& state, const UpdateRule& rule, const Schedule& sched,
             std::span<const double> x, double y);

struct TrajectoryPoint {
  std::int64_t k;  // observations consumed so far
  std::vector<double> theta;
  std::int64_t sigma;
};

struct RecursiveRun {
  std::vector<TrajectoryPoint> trajectory;
  RecursiveState final_state;
};

// Streams the dataset rows in order. record_every > 0 samples the trajectory
// every record_every steps plus the final state; 0 records the final state
// only.
RecursiveRun run_recursive(const Dataset& data, const UpdateRule& rule,
                           const Schedule& sched, std::vector<double> theta1,
                           std::int64_t record_every = 0);

// Effective LAD step size hiding inside the quantile recursion: a_k * gamma
// when the residual is nonnegative, a_k * (1 - gamma) when negative. The
// quantile step equals a SignLAD step run at this step size, bit for bit.
double quantile_as_scaled_lad(const UpdateRule& rule, int residual_sign, double a_k);

// Trajectory CSV "k,theta_1,...,theta_d,sigma[,error]"; the error column is
// written when theta_star is nonempty.
std::string trajectory_to_csv(const RecursiveRun& run,
                              std::span<const double> theta_star = {});

}  // namespace cvxid
