#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tgap/tensorop.hpp"

namespace tgap {

/// Largest-singular-value estimate with its convergence certificate. value
/// is sqrt(lambda) for the Rayleigh quotient lambda = <v, A*Av> of a concrete
/// unit vector v, hence always a valid lower bound on ||A||; residual is
/// ||(A*A)v - lambda v|| / lambda at the returned eigenpair and quantifies
/// the upper-side uncertainty.
struct NormEstimate {
  double value = 0.0;
  double residual = 0.0;
  std::uint64_t iterations = 0;
  std::uint64_t seed = 0;
  bool converged = false;
};

struct SpectralOptions {
  double tol = 1e-8;
  std::uint64_t max_iters = 20'000;
  std::vector<std::uint64_t> seeds{1, 2, 3};
};

/// Power iteration on A*A from a seeded random start, one run per seed;
/// returns the best converged estimate (or the best overall with
/// converged=false when no seed converged, never silently). The per-run
/// Rayleigh quotients are nondecreasing. Pass per_seed to obtain every
/// run's estimate, lambda_trace to record the first run's Rayleigh history.
NormEstimate norm_power(const LinearOperatorHandle& A, const SpectralOptions& opts = {},
                        std::vector<NormEstimate>* per_seed = nullptr,
                        std::vector<double>* lambda_trace = nullptr);

/// Accelerated path: two-pass Lanczos on A*A with the same certificate
/// semantics (the final residual is recomputed from the returned Ritz
/// vector). Must agree with norm_power wherever both run.
NormEstimate norm_lanczos(const LinearOperatorHandle& A, const SpectralOptions& opts = {},
                          std::vector<NormEstimate>* per_seed = nullptr);

enum class NormMethod { Auto, Power, Lanczos };

/// Auto picks power iteration up to kPowerAutoDim and Lanczos above.
inline constexpr std::uint64_t kPowerAutoDim = 1'500'000;
NormEstimate estimate_norm(const LinearOperatorHandle& A, NormMethod method,
                           const SpectralOptions& opts = {},
                           std::vector<NormEstimate>* per_seed = nullptr);
const char* norm_method_name(NormMethod method, std::uint64_t dim);

/// Dense oracle: largest singular value by full decomposition.
double norm_dense(const Eigen::MatrixXcd& M, std::uint64_t cap = 2000);

/// D(m, delta) = sqrt(m^2 - delta^2/2); requires 0 <= delta <= m*sqrt(2).
struct GapBound {
  int m = 0;
  double delta = 0.0;
  double D = 0.0;
};
GapBound gap_bound(int m, double delta);

/// Deterministic reductions: fixed 4096-element blocks summed independently,
/// block partials combined in index order, so results do not depend on the
/// thread count.
cdouble det_dot(std::span<const cdouble> a, std::span<const cdouble> b);
double det_norm(std::span<const cdouble> a);

LinearOperatorHandle handle_from_dense(const Eigen::MatrixXcd& M);

}  // namespace tgap
