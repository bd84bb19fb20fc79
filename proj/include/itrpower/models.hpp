// Benchmark model gates and reference ground energies per site.
#pragma once

#include <functional>
#include <optional>
#include <string>

#include "itrpower/types.hpp"

namespace itrpower::models {

enum class ModelKind { ising, heisenberg_s1, heisenberg_half };

struct ModelSpec {
  ModelKind kind = ModelKind::ising;
  double g = 1.0;      // transverse field (ising only)
  double delta = 1.0;  // anisotropy (heisenberg only)
};

// "ising" | "heisenberg-s1" | "heisenberg-half"; throws InvalidParam otherwise.
ModelKind parse_model(const std::string& name);
std::string model_name(ModelKind kind);

int phys_dim(ModelKind kind);

// Symmetric d^2 x d^2 nearest-neighbor coefficient matrix on the fused pair
// index p = i*d + j with i the left site.
Matrix build_gate(const ModelSpec& spec);

// Smallest eigenvalue per site where a closed form or an established
// high-precision reference exists; nullopt otherwise.
std::optional<double> exact_eigenvalue(const ModelSpec& spec);

// Adaptive Gauss-Kronrod (G7/K15) quadrature to absolute tolerance tol.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-14);

}  // namespace itrpower::models
