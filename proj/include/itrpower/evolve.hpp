// One Trotter half-step (odd or even bonds) applied to a two-core state.
#pragma once

#include "itrpower/itr2.hpp"
#include "itrpower/types.hpp"

namespace itrpower::evolve {

// odd applies the propagator across every Sigma bond (Q-U pairs),
// even across every Omega bond (U-Q pairs).
enum class Parity { odd, even };

// canonical restores the full two-core canonical form after the local
// update; fast keeps only the local SVD (state flagged non-canonical) and
// relies on alternating parities for approximate canonicality.
enum class Variant { canonical, fast };

struct StepResult {
  itr2::ITR2State state;
  double trunc_err = 0.0;  // relative Frobenius weight of the discarded tail
};

// Applies the two-site propagator exp_mt (d^2 x d^2, symmetric) to every
// bond of the given parity: folds the outer weights into a center supercore,
// applies the gate, splits back by truncated SVD to at most r_max (never
// growing the bond; dropped directions are kept as zero-padded weights so
// the unit cell stays square), renormalizes the refreshed weights.
StepResult trotter_half_step(const itr2::ITR2State& s, const Matrix& exp_mt, Parity parity,
                             Variant variant, Eigen::Index r_max, double tol = 1e-12);

}  // namespace itrpower::evolve
