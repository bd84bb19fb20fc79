// Two-core infinite tensor rings: canonical form, Rayleigh quotients,
// residual norms and the projected averaged-operator eigenvalue.
#pragma once

#include "itrpower/itr.hpp"
#include "itrpower/types.hpp"

namespace itrpower::itr2 {

// Alternating chain ... Q(i) Sigma U(j) Omega Q(k) Sigma ... In canonical
// form all four dressed Gram sums are the identity:
//   sum_i (Omega Q(i))^T (Omega Q(i)) = I,  sum_i (Q(i) Sigma)(Q(i) Sigma)^T = I,
//   sum_j (Sigma U(j))^T (Sigma U(j)) = I,  sum_j (U(j) Omega)(U(j) Omega)^T = I,
// with ||Sigma||_F = ||Omega||_F = 1.
struct ITR2State {
  Core q;
  Core u;
  BondWeights sigma;  // bond between Q and U
  BondWeights omega;  // bond between U and Q
  bool canonical = false;

  int d() const { return q.d(); }
  Eigen::Index rank() const { return q.r_left(); }
};

// Center cores Omega Q(i) Sigma and Sigma U(i) Omega.
Core q_center(const ITR2State& s);
Core u_center(const ITR2State& s);

struct OrthogonalityResiduals {
  double ql = 0, qr = 0, ul = 0, ur = 0;
  double max() const { return std::max(std::max(ql, qr), std::max(ul, ur)); }
};

// Frobenius distances of the four dressed Gram sums from the projector onto
// the live directions of the matching bond (the identity at full rank).
OrthogonalityResiduals orthogonality_residuals(const ITR2State& s);

// Canonicalizes the two-core chain ... X Y X Y ...: merges into a supercore,
// canonicalizes it, then re-splits the weighted center by truncated SVD back
// to the input bond dimension.
ITR2State canonicalize2(const Core& x, const Core& y, double tol = 1e-12);

// Rebuilds the canonical frame of an existing state: same state, weights and
// orthogonality refreshed. This is the measurement-grade way to evaluate a
// state that drifted off canonical form (e.g. under fast evolution).
ITR2State recanonicalize(const ITR2State& s, double tol = 1e-12);

struct RqResult {
  double theta = 0;   // (theta1 + theta2) / 2
  double theta1 = 0;  // gate on a (Q, U) site pair
  double theta2 = 0;  // gate on a (U, Q) site pair
};

// Rayleigh quotient of the two-site gate sum in canonical coordinates.
// Accepts nearly-canonical states; warns on stderr when the orthogonality
// residuals exceed 1e-6 for a state not flagged canonical.
RqResult rayleigh_quotient(const ITR2State& s, const Matrix& m);

// General (non-canonical) quotient from the dominant left/right eigenpairs
// of the pair transfer operators T_XY and T_YX, normalized to v_L^T v_R = 1
// and divided by the pair eigenvalue. X = Y recovers the single-core form.
RqResult rayleigh_quotient_general(const Core& x, const Core& y, const Matrix& m,
                                   double tol = 1e-12);

struct ResidualReport {
  double res_norm = 0;
  double theta = 0;
  double theta1 = 0;
  double theta2 = 0;
  double sigma_min = 0;
  double omega_min = 0;
};

// Gradient-style residual of the averaged projected eigenproblem: assembles
// the Q-centered and U-centered residual vectors (four environment terms and
// the theta deflation each) and reports the 2-norm of their concatenation.
ResidualReport residual(const ITR2State& s, const Matrix& m, double theta,
                        double solve_tol = 1e-8);

// Single-core analog: five-term residual vector norm for a canonical iTR.
// For Q = U, Sigma = Omega it equals the iTR2 res_norm times sqrt(2).
double residual_single(const itr::CanonicalITR& c, const Matrix& m, double theta,
                       double solve_tol = 1e-8);

// Smallest eigenvalue of the averaged projected operator in the Q-centered
// frame, computed matrix-free via a spectral shift sigma = d*||M||_2 + |theta|.
double projected_avg_eigenvalue(const ITR2State& s, const Matrix& m, double theta,
                                double tol = 1e-12, double solve_tol = 1e-8);

}  // namespace itrpower::itr2
