#include "tgap/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "tgap/error.hpp"
#include "tgap/rng.hpp"

namespace tgap {

namespace {

constexpr std::size_t kBlock = 4096;

void axpy(std::span<cdouble> y, double a, std::span<const cdouble> x) {
  const std::int64_t n = static_cast<std::int64_t>(y.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale(std::span<cdouble> y, double a) {
  const std::int64_t n = static_cast<std::int64_t>(y.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) y[i] *= a;
}

// ||y - a*x||, computed blockwise without a temporary
double diff_norm(std::span<const cdouble> y, double a, std::span<const cdouble> x) {
  const std::size_t n = y.size();
  const std::size_t nblocks = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(nblocks, 0.0);
  const std::int64_t nb = static_cast<std::int64_t>(nblocks);
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < nb; ++b) {
    const std::size_t lo = b * kBlock, hi = std::min(n, lo + kBlock);
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const cdouble d = y[i] - a * x[i];
      acc += d.real() * d.real() + d.imag() * d.imag();
    }
    partial[b] = acc;
  }
  double total = 0.0;
  for (const double p : partial) total += p;
  return std::sqrt(total);
}

}  // namespace

cdouble det_dot(std::span<const cdouble> a, std::span<const cdouble> b) {
  if (a.size() != b.size()) throw PreconditionError("det_dot: size mismatch");
  const std::size_t n = a.size();
  const std::size_t nblocks = (n + kBlock - 1) / kBlock;
  std::vector<cdouble> partial(nblocks, cdouble{0.0, 0.0});
  const std::int64_t nb = static_cast<std::int64_t>(nblocks);
#pragma omp parallel for schedule(static)
  for (std::int64_t blk = 0; blk < nb; ++blk) {
    const std::size_t lo = blk * kBlock, hi = std::min(n, lo + kBlock);
    cdouble acc{0.0, 0.0};
    for (std::size_t i = lo; i < hi; ++i) acc += std::conj(a[i]) * b[i];
    partial[blk] = acc;
  }
  cdouble total{0.0, 0.0};
  for (const cdouble p : partial) total += p;
  return total;
}

double det_norm(std::span<const cdouble> a) {
  const std::size_t n = a.size();
  const std::size_t nblocks = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(nblocks, 0.0);
  const std::int64_t nb = static_cast<std::int64_t>(nblocks);
#pragma omp parallel for schedule(static)
  for (std::int64_t blk = 0; blk < nb; ++blk) {
    const std::size_t lo = blk * kBlock, hi = std::min(n, lo + kBlock);
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i)
      acc += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
    partial[blk] = acc;
  }
  double total = 0.0;
  for (const double p : partial) total += p;
  return std::sqrt(total);
}

namespace {

void seeded_unit_vector(std::uint64_t seed, std::vector<cdouble>& v) {
  PortableRng rng(seed);
  rng.fill(v);
  const double nv = det_norm(v);
  if (nv == 0.0) {
    v.assign(v.size(), cdouble{0.0, 0.0});
    v[0] = 1.0;
  } else {
    scale(v, 1.0 / nv);
  }
}

NormEstimate power_single(const LinearOperatorHandle& A, std::uint64_t seed, double tol,
                          std::uint64_t max_iters, std::vector<double>* lambda_trace) {
  const std::size_t n = A.dim;
  std::vector<cdouble> v(n), t(n), w(n);
  seeded_unit_vector(seed, v);

  NormEstimate est;
  est.seed = seed;
  for (std::uint64_t it = 1; it <= max_iters; ++it) {
    A.apply(v, t);
    A.apply_adjoint(t, w);
    const double lambda = std::max(0.0, det_dot(v, w).real());
    est.iterations = it;
    if (lambda < 1e-300) {
      est.value = 0.0;
      est.residual = 0.0;
      est.converged = true;
      return est;
    }
    const double residual = diff_norm(w, lambda, v) / lambda;
    est.value = std::sqrt(lambda);
    est.residual = residual;
    if (lambda_trace) lambda_trace->push_back(lambda);
    if (residual <= tol) {
      est.converged = true;
      return est;
    }
    const double nw = det_norm(w);
    std::swap(v, w);
    scale(v, 1.0 / nw);
  }
  est.converged = false;
  return est;
}

}  // namespace

NormEstimate norm_power(const LinearOperatorHandle& A, const SpectralOptions& opts,
                        std::vector<NormEstimate>* per_seed, std::vector<double>* lambda_trace) {
  if (A.dim < 1) throw PreconditionError("norm_power: dim must be >= 1");
  if (!(opts.tol > 0)) throw PreconditionError("norm_power: tol must be positive");
  if (opts.seeds.empty()) throw PreconditionError("norm_power: need at least one seed");
  NormEstimate best;
  bool have_converged = false;
  bool any = false;
  bool first = true;
  for (const std::uint64_t seed : opts.seeds) {
    const NormEstimate e =
        power_single(A, seed, opts.tol, opts.max_iters, first ? lambda_trace : nullptr);
    first = false;
    if (per_seed) per_seed->push_back(e);
    const bool better = e.converged == have_converged ? e.value > best.value : e.converged;
    if (!any || better) {
      best = e;
      have_converged = have_converged || e.converged;
      any = true;
    }
  }
  return best;
}

namespace {

// largest eigenvalue and eigenvector of the symmetric tridiagonal (alpha, beta)
void tridiag_top(const std::vector<double>& alpha, const std::vector<double>& beta, double& theta,
                 std::vector<double>& u) {
  const std::size_t j = alpha.size();
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(j, j);
  for (std::size_t i = 0; i < j; ++i) {
    T(i, i) = alpha[i];
    if (i + 1 < j) T(i, i + 1) = T(i + 1, i) = beta[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  std::size_t top = j - 1;
  theta = es.eigenvalues()(top);
  u.resize(j);
  for (std::size_t i = 0; i < j; ++i) u[i] = es.eigenvectors()(i, top);
}

NormEstimate lanczos_single(const LinearOperatorHandle& A, std::uint64_t seed, double tol,
                            std::uint64_t max_iters) {
  const std::size_t n = A.dim;
  const std::size_t max_steps = std::min<std::size_t>(std::max<std::size_t>(n, 1), 240);
  std::vector<cdouble> start(n), q_prev(n), q(n), w(n), t(n), y(n);
  seeded_unit_vector(seed, start);

  NormEstimate est;
  est.seed = seed;
  std::uint64_t applies = 0;

  auto apply_h = [&](const std::vector<cdouble>& in, std::vector<cdouble>& out) {
    A.apply(in, t);
    A.apply_adjoint(t, out);
    ++applies;
  };

  for (int restart = 0; restart < 64 && applies < max_iters; ++restart) {
    std::vector<double> alpha, beta;
    q = start;
    std::fill(q_prev.begin(), q_prev.end(), cdouble{0.0, 0.0});
    double beta_prev = 0.0;
    std::size_t steps = 0;
    bool breakdown = false;
    while (steps < max_steps && applies < max_iters) {
      apply_h(q, w);
      if (beta_prev != 0.0) axpy(w, -beta_prev, q_prev);
      const double a = det_dot(q, w).real();
      axpy(w, -a, q);
      // one extra local orthogonalization pass
      const cdouble ca = det_dot(q, w);
      const std::int64_t nn = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
      for (std::int64_t i = 0; i < nn; ++i) w[i] -= ca * q[i];
      const double b = det_norm(w);
      alpha.push_back(a);
      ++steps;
      if (b < 1e-12 * std::max(1.0, std::abs(a))) {
        breakdown = true;
        break;
      }
      beta.push_back(b);
      beta_prev = b;
      std::swap(q_prev, q);
      std::swap(q, w);
      scale(q, 1.0 / b);
      if (steps % 16 == 0) {
        double theta;
        std::vector<double> u;
        tridiag_top(alpha, beta, theta, u);
        if (theta > 0 && b * std::abs(u.back()) <= 0.1 * tol * theta) break;
      }
    }
    if (alpha.empty()) break;  // iteration budget exhausted before any step
    if (!beta.empty() && beta.size() == alpha.size()) beta.pop_back();

    double theta;
    std::vector<double> u;
    tridiag_top(alpha, beta, theta, u);

    // second pass: rebuild the Krylov basis and accumulate the Ritz vector
    std::fill(y.begin(), y.end(), cdouble{0.0, 0.0});
    q = start;
    std::fill(q_prev.begin(), q_prev.end(), cdouble{0.0, 0.0});
    beta_prev = 0.0;
    for (std::size_t jstep = 0; jstep < alpha.size(); ++jstep) {
      axpy(y, u[jstep], q);
      if (jstep + 1 == alpha.size() || jstep >= beta.size()) break;
      apply_h(q, w);
      if (beta_prev != 0.0) axpy(w, -beta_prev, q_prev);
      axpy(w, -alpha[jstep], q);
      const cdouble ca = det_dot(q, w);
      const std::int64_t nn = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
      for (std::int64_t i = 0; i < nn; ++i) w[i] -= ca * q[i];
      beta_prev = beta[jstep];
      std::swap(q_prev, q);
      std::swap(q, w);
      scale(q, 1.0 / beta_prev);
    }
    const double ny = det_norm(y);
    if (ny == 0.0) {
      seeded_unit_vector(seed + 0x9e3779b97f4a7c15ull, start);
      continue;
    }
    scale(y, 1.0 / ny);

    // certify from the concrete vector
    apply_h(y, w);
    const double lambda = std::max(0.0, det_dot(y, w).real());
    est.iterations = applies;
    if (lambda < 1e-300) {
      est.value = 0.0;
      est.residual = 0.0;
      est.converged = true;
      return est;
    }
    const double residual = diff_norm(w, lambda, y) / lambda;
    if (std::sqrt(lambda) > est.value) {
      est.value = std::sqrt(lambda);
      est.residual = residual;
    }
    if (residual <= tol) {
      est.value = std::sqrt(lambda);
      est.residual = residual;
      est.converged = true;
      return est;
    }
    start = y;
    (void)breakdown;
  }
  est.converged = false;
  return est;
}

}  // namespace

NormEstimate norm_lanczos(const LinearOperatorHandle& A, const SpectralOptions& opts,
                          std::vector<NormEstimate>* per_seed) {
  if (A.dim < 1) throw PreconditionError("norm_lanczos: dim must be >= 1");
  if (!(opts.tol > 0)) throw PreconditionError("norm_lanczos: tol must be positive");
  if (opts.seeds.empty()) throw PreconditionError("norm_lanczos: need at least one seed");
  NormEstimate best;
  bool have_converged = false;
  bool any = false;
  for (const std::uint64_t seed : opts.seeds) {
    const NormEstimate e = lanczos_single(A, seed, opts.tol, opts.max_iters);
    if (per_seed) per_seed->push_back(e);
    const bool better = e.converged == have_converged ? e.value > best.value : e.converged;
    if (!any || better) {
      best = e;
      have_converged = have_converged || e.converged;
      any = true;
    }
  }
  return best;
}

const char* norm_method_name(NormMethod method, std::uint64_t dim) {
  switch (method) {
    case NormMethod::Power: return "power";
    case NormMethod::Lanczos: return "lanczos";
    case NormMethod::Auto: return dim <= kPowerAutoDim ? "power" : "lanczos";
  }
  return "power";
}

NormEstimate estimate_norm(const LinearOperatorHandle& A, NormMethod method,
                           const SpectralOptions& opts, std::vector<NormEstimate>* per_seed) {
  const std::string name = norm_method_name(method, A.dim);
  if (name == "lanczos") return norm_lanczos(A, opts, per_seed);
  return norm_power(A, opts, per_seed, nullptr);
}

double norm_dense(const Eigen::MatrixXcd& M, std::uint64_t cap) {
  if (static_cast<std::uint64_t>(std::max(M.rows(), M.cols())) > cap)
    throw CapExceededError("norm_dense: dimension cap exceeded");
  if (M.rows() == 0 || M.cols() == 0) return 0.0;
  const Eigen::MatrixXcd G = M.adjoint() * M;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G, Eigen::EigenvaluesOnly);
  const double lmax = es.eigenvalues().maxCoeff();
  return std::sqrt(std::max(0.0, lmax));
}

GapBound gap_bound(int m, double delta) {
  if (m < 1) throw PreconditionError("gap_bound: m must be >= 1");
  if (delta < 0) throw PreconditionError("gap_bound: delta must be nonnegative");
  const double limit = m * std::sqrt(2.0);
  if (delta > limit * (1.0 + 1e-12))
    throw PreconditionError("gap_bound: delta exceeds m*sqrt(2)");
  const double d2 = static_cast<double>(m) * m - delta * delta / 2.0;
  return GapBound{m, delta, std::sqrt(std::max(0.0, d2))};
}

LinearOperatorHandle handle_from_dense(const Eigen::MatrixXcd& M) {
  auto mat = std::make_shared<Eigen::MatrixXcd>(M);
  if (mat->rows() != mat->cols())
    throw PreconditionError("handle_from_dense: matrix must be square");
  const std::uint64_t n = mat->rows();
  return {n,
          [mat](std::span<const cdouble> in, std::span<cdouble> out) {
            Eigen::Map<const Eigen::VectorXcd> x(in.data(), in.size());
            Eigen::Map<Eigen::VectorXcd> y(out.data(), out.size());
            y = (*mat) * x;
          },
          [mat](std::span<const cdouble> in, std::span<cdouble> out) {
            Eigen::Map<const Eigen::VectorXcd> x(in.data(), in.size());
            Eigen::Map<Eigen::VectorXcd> y(out.data(), out.size());
            y = mat->adjoint() * x;
          }};
}

}  // namespace tgap
