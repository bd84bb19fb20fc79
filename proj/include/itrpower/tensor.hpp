// Core merging, truncated splitting and two-site gate application.
#pragma once

#include "itrpower/types.hpp"

namespace itrpower::tensor {

// Contracts two cores over the shared bond: slice (i*d + j) = X(i) * Y(j).
SuperCore merge(const Core& x, const Core& y);

struct SplitResult {
  Core c1;              // r_left x d x k
  BondWeights weights;  // unnormalized singular values, descending
  Core c2;              // k x d x r_right
  double trunc_err;     // sqrt(sum discarded s^2 / sum all s^2)
};

// Truncated SVD split of a supercore. The matricization fuses (bond, phys)
// on rows as alpha*d + i and (phys, bond) on columns as j*r_right + beta.
SplitResult split(const SuperCore& z, Eigen::Index r_max);

// Applies a two-site gate: out slice p = sum_q G(p, q) * Z(q).
SuperCore apply_gate(const Matrix& g, const SuperCore& z);

}  // namespace itrpower::tensor
