#include "tgap/tensorop.hpp"

#include "tgap/error.hpp"

namespace tgap {

namespace {

std::vector<std::uint32_t> inverse_perm(const std::vector<std::uint32_t>& p) {
  std::vector<std::uint32_t> inv(p.size());
  for (std::uint32_t j = 0; j < p.size(); ++j) inv[p[j]] = j;
  return inv;
}

std::vector<cdouble> phases_of(const GenPermOperator& op, bool conj) {
  const auto tab = phase_table(op.order);
  std::vector<cdouble> out(op.dim);
  for (std::uint32_t j = 0; j < op.dim; ++j) {
    const cdouble z = (*tab)[op.phase[j]];
    out[j] = conj ? std::conj(z) : z;
  }
  return out;
}

}  // namespace

TensorSumOperator::TensorSumOperator(std::vector<GenPermOperator> left,
                                     std::vector<GenPermOperator> right)
    : left_(std::move(left)), right_(std::move(right)) {
  if (left_.empty() || left_.size() != right_.size())
    throw PreconditionError("TensorSumOperator: term lists must be equal-length and nonempty");
  d1_ = left_[0].dim;
  d2_ = right_[0].dim;
  for (const auto& a : left_)
    if (a.dim != d1_) throw PreconditionError("TensorSumOperator: left dims differ");
  for (const auto& b : right_)
    if (b.dim != d2_) throw PreconditionError("TensorSumOperator: right dims differ");

  auto make_term = [](const GenPermOperator& a, const GenPermOperator& b) {
    Term t;
    t.inv_left = inverse_perm(a.perm);
    t.perm_right = b.perm;
    t.phase_left = phases_of(a, /*conj=*/false);
    t.phase_right = phases_of(b, /*conj=*/true);  // right factor enters conjugated
    return t;
  };
  for (std::size_t i = 0; i < left_.size(); ++i) {
    fwd_.push_back(make_term(left_[i], right_[i]));
    adj_.push_back(make_term(op_adjoint(left_[i]), op_adjoint(right_[i])));
  }
}

template <bool Parallel>
void TensorSumOperator::run(const std::vector<Term>& terms, std::span<const cdouble> in,
                            std::span<cdouble> out) const {
  if (in.size() != dim() || out.size() != dim())
    throw PreconditionError("TensorSumOperator: dimension mismatch");
  const std::int64_t d1 = d1_, d2 = d2_;
  const cdouble* __restrict vin = in.data();
  cdouble* __restrict vout = out.data();
#pragma omp parallel for schedule(static) if (Parallel)
  for (std::int64_t rho = 0; rho < d1; ++rho) {
    cdouble* __restrict orow = vout + rho * d2;
    for (std::int64_t s = 0; s < d2; ++s) orow[s] = cdouble{0.0, 0.0};
    for (const Term& t : terms) {
      const std::uint32_t r = t.inv_left[rho];
      const cdouble fl = t.phase_left[r];
      const cdouble* __restrict vrow = vin + std::int64_t(r) * d2;
      const std::uint32_t* __restrict pr = t.perm_right.data();
      const cdouble* __restrict fr = t.phase_right.data();
      for (std::int64_t s = 0; s < d2; ++s) orow[pr[s]] += (fl * fr[s]) * vrow[s];
    }
  }
}

void TensorSumOperator::apply(std::span<const cdouble> in, std::span<cdouble> out) const {
  run<true>(fwd_, in, out);
}
void TensorSumOperator::apply_serial(std::span<const cdouble> in, std::span<cdouble> out) const {
  run<false>(fwd_, in, out);
}
void TensorSumOperator::apply_adjoint(std::span<const cdouble> in, std::span<cdouble> out) const {
  run<true>(adj_, in, out);
}
void TensorSumOperator::apply_adjoint_serial(std::span<const cdouble> in,
                                             std::span<cdouble> out) const {
  run<false>(adj_, in, out);
}

LinearOperatorHandle TensorSumOperator::handle() const {
  return {dim(), [this](std::span<const cdouble> in, std::span<cdouble> out) { apply(in, out); },
          [this](std::span<const cdouble> in, std::span<cdouble> out) { apply_adjoint(in, out); }};
}

LinearOperatorHandle TensorSumOperator::handle_serial() const {
  return {dim(),
          [this](std::span<const cdouble> in, std::span<cdouble> out) { apply_serial(in, out); },
          [this](std::span<const cdouble> in, std::span<cdouble> out) {
            apply_adjoint_serial(in, out);
          }};
}

TensorSumOperator TensorSumOperator::conjugated() const {
  std::vector<GenPermOperator> l, r;
  for (const auto& a : left_) l.push_back(op_conj(a));
  for (const auto& b : right_) r.push_back(op_conj(b));
  return TensorSumOperator(std::move(l), std::move(r));
}

Eigen::MatrixXcd TensorSumOperator::dense(std::uint64_t cap) const {
  if (dim() > cap || dim() > 20'000)
    throw CapExceededError("TensorSumOperator::dense: dimension cap exceeded");
  const std::int64_t d = static_cast<std::int64_t>(dim());
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(d, d);
  for (std::size_t i = 0; i < left_.size(); ++i) {
    const Eigen::MatrixXcd A = op_dense(left_[i]);
    const Eigen::MatrixXcd B = op_dense(right_[i]).conjugate();
    for (std::int64_t r = 0; r < d1_; ++r)
      for (std::int64_t c = 0; c < d1_; ++c)
        if (A(r, c) != cdouble{0.0, 0.0})
          M.block(r * d2_, c * d2_, d2_, d2_) += A(r, c) * B;
  }
  return M;
}

TensorSumOperator tensor_sum(const ProjectiveRep& a, const ProjectiveRep& b,
                             const std::vector<Word>& words) {
  std::vector<GenPermOperator> l, r;
  for (const Word& w : words) {
    l.push_back(a.op(reduce_word(w, *a.group)));
    r.push_back(b.op(reduce_word(w, *b.group)));
  }
  return TensorSumOperator(std::move(l), std::move(r));
}

TensorSumOperator operator_sum(const ProjectiveRep& a, const std::vector<Word>& words) {
  std::vector<GenPermOperator> l, r;
  for (const Word& w : words) {
    l.push_back(a.op(reduce_word(w, *a.group)));
    r.push_back(GenPermOperator::identity(1));
  }
  return TensorSumOperator(std::move(l), std::move(r));
}

}  // namespace tgap
