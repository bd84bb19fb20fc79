#include "itrpower/tensor.hpp"

#include <cmath>

#include "itrpower/linalg.hpp"

namespace itrpower::tensor {

SuperCore merge(const Core& x, const Core& y) {
  if (x.d() != y.d()) throw ShapeError("merge: physical dimensions differ");
  if (x.r_right() != y.r_left()) throw ShapeError("merge: bond dimensions do not match");
  const int d = x.d();
  std::vector<Matrix> slices;
  slices.reserve(static_cast<size_t>(d) * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) slices.push_back(x.slices[i] * y.slices[j]);
  return SuperCore(d, std::move(slices));
}

SplitResult split(const SuperCore& z, Eigen::Index r_max) {
  if (r_max < 1) throw InvalidParam("split: r_max must be >= 1");
  const int d = z.d;
  const Eigen::Index rl = z.r_left(), rr = z.r_right();
  Matrix b(rl * d, d * rr);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const Matrix& s = z.slice(i, j);
      for (Eigen::Index a = 0; a < rl; ++a)
        for (Eigen::Index c = 0; c < rr; ++c) b(a * d + i, j * rr + c) = s(a, c);
    }
  auto svd = linalg::truncated_svd(b, r_max);
  const Eigen::Index k = svd.S.size();

  SplitResult out;
  std::vector<Matrix> c1(static_cast<size_t>(d), Matrix(rl, k));
  std::vector<Matrix> c2(static_cast<size_t>(d), Matrix(k, rr));
  for (int i = 0; i < d; ++i)
    for (Eigen::Index a = 0; a < rl; ++a) c1[static_cast<size_t>(i)].row(a) = svd.W.row(a * d + i);
  for (int j = 0; j < d; ++j)
    for (Eigen::Index c = 0; c < rr; ++c)
      c2[static_cast<size_t>(j)].col(c) = svd.V.row(j * rr + c).transpose();
  out.c1 = Core(std::move(c1));
  out.c2 = Core(std::move(c2));
  out.weights = BondWeights(svd.S);
  double kept = svd.S.squaredNorm();
  double dropped = svd.discarded.squaredNorm();
  out.trunc_err = (kept + dropped) > 0.0 ? std::sqrt(dropped / (kept + dropped)) : 0.0;
  return out;
}

SuperCore apply_gate(const Matrix& g, const SuperCore& z) {
  const int dsq = z.d * z.d;
  if (g.rows() != dsq || g.cols() != dsq) throw ShapeError("apply_gate: gate dimension mismatch");
  if (!g.allFinite()) throw InvalidInput("apply_gate: non-finite gate");
  std::vector<Matrix> slices(static_cast<size_t>(dsq));
  for (int p = 0; p < dsq; ++p) {
    Matrix acc = Matrix::Zero(z.r_left(), z.r_right());
    for (int q = 0; q < dsq; ++q) {
      double c = g(p, q);
      if (c != 0.0) acc.noalias() += c * z.slices[static_cast<size_t>(q)];
    }
    slices[static_cast<size_t>(p)] = std::move(acc);
  }
  return SuperCore(z.d, std::move(slices));
}

}  // namespace itrpower::tensor
