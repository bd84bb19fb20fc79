// Shared tensor containers and error types.
#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace itrpower {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Malformed numerical input (asymmetric gate, non-finite entries, ...).
struct InvalidInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dimension mismatch between tensors/operators.
struct ShapeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad configuration value (flags, ranks, timesteps).
struct InvalidParam : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Iterative solver failed to reach its tolerance.
struct ConvergenceFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dominant transfer eigenvalue is not simple (two Ritz values of equal magnitude).
struct DegenerateDominance : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Fixed-point or weight matrix is numerically unusable (rank deficient / indefinite).
struct IllConditioned : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Problem dimension exceeds a hard guard (dense oracles only).
struct TooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Order-3 tensor stored as d slices of r_left x r_right matrices.
// Slice i is the matrix X(i); a translation-invariant state is
// x(..., i_0, i_1, ...) = trace(... X(i_0) X(i_1) ...).
struct Core {
  std::vector<Matrix> slices;

  Core() = default;
  explicit Core(std::vector<Matrix> s) : slices(std::move(s)) { validate(); }

  int d() const { return static_cast<int>(slices.size()); }
  Eigen::Index r_left() const { return slices.empty() ? 0 : slices[0].rows(); }
  Eigen::Index r_right() const { return slices.empty() ? 0 : slices[0].cols(); }

  void validate() const {
    if (slices.empty()) throw ShapeError("Core: needs at least one slice");
    for (const auto& m : slices) {
      if (m.rows() != r_left() || m.cols() != r_right())
        throw ShapeError("Core: inconsistent slice shapes");
      if (!m.allFinite()) throw InvalidInput("Core: non-finite entries");
    }
  }
};

// Two merged sites: d*d slices, fused physical index p = i*d + j where i
// belongs to the left site.
struct SuperCore {
  int d = 0;  // single-site physical dimension
  std::vector<Matrix> slices;

  SuperCore() = default;
  SuperCore(int d_, std::vector<Matrix> s) : d(d_), slices(std::move(s)) { validate(); }

  Eigen::Index r_left() const { return slices.empty() ? 0 : slices[0].rows(); }
  Eigen::Index r_right() const { return slices.empty() ? 0 : slices[0].cols(); }
  const Matrix& slice(int i, int j) const { return slices[static_cast<size_t>(i) * d + j]; }
  Matrix& slice(int i, int j) { return slices[static_cast<size_t>(i) * d + j]; }

  void validate() const {
    if (d <= 0 || slices.size() != static_cast<size_t>(d) * d)
      throw ShapeError("SuperCore: slice count must be d*d");
    for (const auto& m : slices) {
      if (m.rows() != r_left() || m.cols() != r_right())
        throw ShapeError("SuperCore: inconsistent slice shapes");
      if (!m.allFinite()) throw InvalidInput("SuperCore: non-finite entries");
    }
  }
};

// Non-negative bond weights in descending order. normalized() rescales to
// unit 2-norm (Frobenius norm of the diagonal matrix).
struct BondWeights {
  Vector w;

  BondWeights() = default;
  explicit BondWeights(Vector v) : w(std::move(v)) { validate(); }

  Eigen::Index size() const { return w.size(); }
  double min() const { return w.size() ? w.minCoeff() : 0.0; }
  double norm() const { return w.norm(); }

  BondWeights normalized() const {
    double n = w.norm();
    if (n <= 0.0) throw IllConditioned("BondWeights: cannot normalize zero weights");
    return BondWeights(w / n);
  }

  Eigen::DiagonalWrapper<const Vector> diag() const { return w.asDiagonal(); }

  // Entrywise pseudo-inverse: entries below rel_clamp * max are treated as
  // zero directions and excluded instead of amplified.
  Vector pinv(double rel_clamp) const {
    double wmax = w.size() ? w.maxCoeff() : 0.0;
    if (!(wmax > 0.0)) throw IllConditioned("BondWeights: cannot invert zero weights");
    Vector inv(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i)
      inv[i] = w[i] < rel_clamp * wmax ? 0.0 : 1.0 / w[i];
    return inv;
  }

  void validate() const {
    if (w.size() == 0) throw ShapeError("BondWeights: empty");
    if (!w.allFinite()) throw InvalidInput("BondWeights: non-finite entries");
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      if (w[i] < 0.0) throw InvalidInput("BondWeights: negative weight");
      if (i > 0 && w[i] > w[i - 1] + 1e-12 * std::abs(w[0]))
        throw InvalidInput("BondWeights: not descending");
    }
  }
};

}  // namespace itrpower
