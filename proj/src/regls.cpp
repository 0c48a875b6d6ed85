#include "cvxid/regls.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numeric>

#include "cvxid/errors.hpp"

namespace cvxid {

KernelKind kernel_kind_from_string(const std::string& text) {
  if (text == "tc") return KernelKind::TC;
  if (text == "dc") return KernelKind::DC;
  if (text == "ss") return KernelKind::SS;
  if (text == "identity") return KernelKind::Identity;
  throw ConfigError("unknown kernel \"" + text + "\" (want tc|dc|ss|identity)");
}

std::string kernel_kind_to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::TC: return "tc";
    case KernelKind::DC: return "dc";
    case KernelKind::SS: return "ss";
    case KernelKind::Identity: return "identity";
  }
  return {};
}

namespace {

void validate_hyper(KernelKind kind, const KernelHyper& hyper) {
  if (kind == KernelKind::Identity) return;
  if (!(hyper.c > 0.0)) throw ConfigError("kernel scale c must be positive");
  if (!(hyper.decay > 0.0 && hyper.decay < 1.0)) {
    throw ConfigError("kernel decay must lie in (0, 1)");
  }
  if (kind == KernelKind::DC && !(hyper.corr > -1.0 && hyper.corr < 1.0)) {
    throw ConfigError("DC correlation must lie in (-1, 1)");
  }
}

double kernel_entry(KernelKind kind, const KernelHyper& h, int i, int j) {
  const double hi = std::max(i, j);
  switch (kind) {
    case KernelKind::TC:
      return h.c * std::pow(h.decay, hi);
    case KernelKind::DC:
      return h.c * std::pow(h.decay, (i + j) / 2.0) * std::pow(h.corr, std::abs(i - j));
    case KernelKind::SS:
      return h.c * (std::pow(h.decay, i + j + hi) / 2.0 - std::pow(h.decay, 3.0 * hi) / 6.0);
    case KernelKind::Identity:
      return i == j ? 1.0 : 0.0;
  }
  return 0.0;
}

Eigen::MatrixXd build_kernel(KernelKind kind, const KernelHyper& hyper,
                             const std::vector<int>& block_sizes) {
  validate_hyper(kind, hyper);
  if (block_sizes.empty()) throw ConfigError("block_sizes must be nonempty");
  for (int m : block_sizes) {
    if (m < 1) throw ConfigError("block sizes must be positive");
  }
  const int d = std::accumulate(block_sizes.begin(), block_sizes.end(), 0);
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(d, d);
  int offset = 0;
  for (int m : block_sizes) {
    for (int i = 1; i <= m; ++i) {
      for (int j = 1; j <= m; ++j) {
        p(offset + i - 1, offset + j - 1) = kernel_entry(kind, hyper, i, j);
      }
    }
    offset += m;
  }
  p = ((p + p.transpose()) / 2.0).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(p, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-10) {
    throw ConfigError("kernel matrix is not positive semi-definite");
  }
  return p;
}

}  // namespace

std::vector<double> kernel_matrix(KernelKind kind, const KernelHyper& hyper,
                                  const std::vector<int>& block_sizes) {
  const Eigen::MatrixXd p = build_kernel(kind, hyper, block_sizes);
  std::vector<double> out(p.size());
  for (int i = 0; i < p.rows(); ++i) {
    for (int j = 0; j < p.cols(); ++j) out[i * p.cols() + j] = p(i, j);
  }
  return out;
}

ReglsFit regls_fit(const Dataset& data, const ReglsConfig& cfg) {
  if (data.empty()) throw ArgumentError("dataset is empty");
  if (!(cfg.reg_lambda > 0.0)) throw ConfigError("reg_lambda must be positive");
  const int d = data.dim();
  if (std::accumulate(cfg.block_sizes.begin(), cfg.block_sizes.end(), 0) != d) {
    throw ConfigError("block_sizes must sum to the regressor dimension");
  }

  Eigen::MatrixXd p = build_kernel(cfg.kernel, cfg.hyper, cfg.block_sizes);
  ReglsFit fit;
  Eigen::MatrixXd p_inv;
  for (int attempt = 0; attempt < 2; ++attempt) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(p);
    p_inv = ldlt.solve(Eigen::MatrixXd::Identity(d, d));
    if (ldlt.info() == Eigen::Success &&
        (p * p_inv - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-6) {
      break;
    }
    if (attempt == 1) throw NumericError("kernel matrix is numerically singular");
    p.diagonal().array() += 1e-10;
    fit.jittered = true;
  }

  const std::int64_t n = data.rows();
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(d, d);
  Eigen::VectorXd xty = Eigen::VectorXd::Zero(d);
  for (std::int64_t k = 0; k < n; ++k) {
    Eigen::Map<const Eigen::VectorXd> x(data.x(k).data(), d);
    gram.noalias() += x * x.transpose();
    xty.noalias() += x * data.y(k);
  }
  const Eigen::MatrixXd system =
      gram + static_cast<double>(n) * cfg.reg_lambda * p_inv;

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
  Eigen::VectorXd theta = lu.solve(xty);
  // One refinement step keeps the relative residual near machine precision.
  theta += lu.solve(xty - system * theta);

  const double denom = std::max(xty.norm(), 1e-300);
  const double rel_residual = (system * theta - xty).norm() / denom;
  if (!(rel_residual <= 1e-10)) {
    throw NumericError("regularized normal equations ill-conditioned: relative residual " +
                       std::to_string(rel_residual));
  }

  fit.theta.assign(theta.data(), theta.data() + d);
  return fit;
}

TuneResult tune_hyperparameters(const Dataset& data, KernelKind kind,
                                const HyperGrid& grid,
                                const std::vector<int>& block_sizes) {
  if (grid.reg_lambda.empty()) throw ArgumentError("reg_lambda grid is empty");
  if (!(grid.holdout_fraction > 0.0 && grid.holdout_fraction < 1.0)) {
    throw ArgumentError("holdout fraction must lie in (0, 1)");
  }
  const std::int64_t n = data.rows();
  const std::int64_t n_holdout = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::floor(grid.holdout_fraction * n)));
  const std::int64_t n_fit = n - n_holdout;
  if (n_fit < 1) throw ArgumentError("dataset too small to split for tuning");
  const Dataset fit_part = data.slice(0, n_fit);

  // Identity ignores the kernel hyperparameters; the other kernels need
  // nonempty c/decay grids; corr only matters for DC.
  std::vector<double> cs = grid.c, decays = grid.decay, corrs = grid.corr;
  if (kind == KernelKind::Identity) {
    cs = {1.0};
    decays = {0.5};
    corrs = {0.0};
  } else if (kind != KernelKind::DC) {
    corrs = {0.0};
  }
  if (cs.empty() || decays.empty() || corrs.empty()) {
    throw ArgumentError("hyperparameter grid is empty");
  }

  TuneResult best;
  bool have_best = false;
  for (double c : cs) {
    for (double decay : decays) {
      for (double corr : corrs) {
        for (double lambda : grid.reg_lambda) {
          ReglsConfig cfg;
          cfg.kernel = kind;
          cfg.hyper = {c, decay, corr};
          cfg.reg_lambda = lambda;
          cfg.block_sizes = block_sizes;
          const ReglsFit fit = regls_fit(fit_part, cfg);
          double mse = 0.0;
          for (std::int64_t k = n_fit; k < n; ++k) {
            const auto x = data.x(k);
            double pred = 0.0;
            for (int i = 0; i < data.dim(); ++i) pred += fit.theta[i] * x[i];
            const double e = data.y(k) - pred;
            mse += e * e;
          }
          mse /= static_cast<double>(n_holdout);
          if (!have_best || mse < best.holdout_mse) {
            best.config = cfg;
            best.holdout_mse = mse;
            have_best = true;
          }
        }
      }
    }
  }
  return best;
}

}  // namespace cvxid
