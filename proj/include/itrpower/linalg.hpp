// Dense and matrix-free linear algebra kernels.
#pragma once

#include <functional>

#include "itrpower/types.hpp"

namespace itrpower::linalg {

// Matrix-free operator. apply_transpose may be left empty for symmetric
// operators; callers that need the transpose action will then reuse apply.
struct LinearOperator {
  Eigen::Index dim = 0;
  std::function<Vector(const Vector&)> apply;
  std::function<Vector(const Vector&)> apply_transpose;

  Vector transpose_apply(const Vector& v) const {
    return apply_transpose ? apply_transpose(v) : apply(v);
  }
};

struct SvdResult {
  Matrix W;        // left singular vectors, one column per kept value
  Vector S;        // kept singular values, descending
  Matrix V;        // right singular vectors; A ~ W * S.asDiagonal() * V^T
  Vector discarded;  // singular values dropped by the rank cut
};

// Thin SVD truncated to at most max_rank values; values below
// 1e-14 * S(0) are dropped as numerically zero. Column signs are fixed so
// each left singular vector's largest-magnitude entry is positive.
SvdResult truncated_svd(const Matrix& a, Eigen::Index max_rank);

// exp(-M t) for symmetric M via eigendecomposition. Rejects asymmetric
// input (relative Frobenius asymmetry above 1e-12).
Matrix expm_neg_sym(const Matrix& m, double t);

enum class Side { right, left };

struct EigOptions {
  double tol = 1e-12;     // relative residual target
  int krylov_dim = 30;    // per-restart Arnoldi size (capped at dim)
  int max_restarts = 300;
  bool densify_small = false;  // optional dense fallback for dim <= 400
};

struct EigPair {
  double eta = 0.0;  // largest-magnitude eigenvalue (real)
  Vector v;          // unit 2-norm, largest-magnitude entry positive
};

// Dominant eigenpair of a real (generally nonsymmetric) operator by
// restarted Arnoldi iteration. side selects the right eigenvector of op or
// of its transpose. Throws DegenerateDominance when the top magnitude is
// shared (including complex-conjugate pairs), ConvergenceFailure when the
// restart budget runs out.
EigPair dominant_eigenpair(const LinearOperator& op, Side side, const EigOptions& opts = {});

struct SolveOptions {
  double tol = 1e-8;  // relative residual target
  int restart = 30;
  int max_restart_cycles = 400;
};

// Solves (I - T) x = b for a contractive matrix-free T (deflated transfer
// operator) with restarted GMRES. transpose=true solves with T^T.
Vector solve_deflated(const LinearOperator& t_op, const Vector& b, bool transpose = false,
                      const SolveOptions& opts = {});

// Flips v so its largest-magnitude entry is positive (first such entry on ties).
void fix_sign(Vector& v);

}  // namespace itrpower::linalg
