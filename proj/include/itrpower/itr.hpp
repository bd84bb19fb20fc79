// Single-core infinite tensor rings: transfer operators and canonical form.
#pragma once

#include "itrpower/linalg.hpp"
#include "itrpower/types.hpp"

namespace itrpower::itr {

enum class TransferFlavor { plain, left_weighted, right_weighted };

// Matrix-free transfer operator of one or two (possibly weight-dressed)
// cores. Acting on a matricized r x r environment V:
//   right action  V -> sum_i C(i) V C(i)^T   (applied through the chain
//                                             right-to-left for two cores)
//   left action   V -> sum_i C(i)^T V C(i)   (left-to-right)
// so that apply() on vec(V) realizes sum_i C(i) (x) C(i) in chain order.
class TransferOp {
 public:
  // flavor dresses the core: left_weighted uses w*X(i), right_weighted X(i)*w.
  TransferOp(const Core& x, TransferFlavor flavor, const BondWeights* w = nullptr);
  // two-core chain, e.g. T_{XY}; each core dressed by its own flavor/weights
  TransferOp(const Core& x, TransferFlavor fx, const BondWeights* wx, const Core& y,
             TransferFlavor fy, const BondWeights* wy);

  Eigen::Index rank() const { return r_; }
  Eigen::Index dim() const { return r_ * r_; }

  Matrix apply_right(const Matrix& v) const;
  Matrix apply_left(const Matrix& v) const;

  // vec() view; apply = right action, apply_transpose = left action
  linalg::LinearOperator linop() const;

 private:
  std::vector<std::vector<Matrix>> chain_;  // dressed slices in chain order
  Eigen::Index r_ = 0;
};

// sum_i C(i) V C(i)^T (side=right) or sum_i C(i)^T V C(i) (side=left) for
// vectorized v; thin wrapper used by callers that hold plain vectors.
Vector transfer_apply(const TransferOp& op, const Vector& v, linalg::Side side);

// Canonical single-core state: chain ... Q(i) Sigma Q(j) Sigma ... with
//   sum_i (Sigma Q(i))^T (Sigma Q(i)) = eta I
//   sum_i (Q(i) Sigma) (Q(i) Sigma)^T = eta I,  ||Sigma||_F = 1.
struct CanonicalITR {
  Core q;
  BondWeights sigma;
  double eta = 1.0;
};

// Gauge-transforms a square core into canonical form from the dominant
// left/right transfer fixed points; the result is normalized so eta = 1.
CanonicalITR canonicalize(const Core& x, double tol = 1e-12);

// Dominant transfer eigenvalue eta of T_X.
double itr_norm_factor(const Core& x, double tol = 1e-12);

// Matricizes vec(v) column-major into r x r.
inline Matrix unvec(const Vector& v, Eigen::Index r) {
  return Eigen::Map<const Matrix>(v.data(), r, r);
}
inline Vector vec(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

}  // namespace itrpower::itr
