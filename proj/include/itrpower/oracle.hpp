// Brute-force references: dense transfer matrices, finite periodic chains,
// dense Trotter products, and finite-ring evaluation of two-core states.
#pragma once

#include "itrpower/itr.hpp"
#include "itrpower/itr2.hpp"
#include "itrpower/types.hpp"

namespace itrpower::oracle {

// Explicit r^2 x r^2 transfer matrix sum_i C(i) (x) C(i) of the dressed
// core, acting on column-major vec(V) as the right action. Guard: r <= 8.
Matrix dense_transfer(const Core& x, itr::TransferFlavor flavor,
                      const BondWeights* w = nullptr);

struct GroundResult {
  double e0 = 0;        // smallest eigenvalue of the chain Hamiltonian
  double per_site = 0;  // e0 / L
};

// Smallest eigenvalue of the length-L chain of two-site terms (L bonds when
// periodic, L-1 when open). Dense diagonalization for small problems, a
// self-contained Lanczos iteration above; guard d^L <= 4096.
GroundResult finite_chain_ground(const Matrix& m, int L, bool periodic);

// Dense d^L x d^L chain Hamiltonian (guard d^L <= 2048).
Matrix finite_chain_hamiltonian(const Matrix& m, int L, bool periodic);

// Applies the exact bond propagators exp(-m t) of a length-L ring to
// x_dense: first all odd-start bonds (1,2), (3,4), ..., (L-1,0), then all
// even-start bonds (0,1), (2,3), ... Guard d^L <= 4096; L even.
Vector dense_trotter_ring(const Matrix& m, int L, double t, const Vector& x_dense);

// d^L coordinate vector of the two-core state closed into a length-L ring
// (site 0 is the most significant index digit). offset 0 places Q at site 0,
// offset 1 places U at site 0. Guard d^L <= 4096; L even.
Vector ring_eval(const itr2::ITR2State& s, int L, int offset = 0);

}  // namespace itrpower::oracle
