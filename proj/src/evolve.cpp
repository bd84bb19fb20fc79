#include "itrpower/evolve.hpp"

#include <cmath>

#include "itrpower/tensor.hpp"

namespace itrpower::evolve {

StepResult trotter_half_step(const itr2::ITR2State& s, const Matrix& exp_mt, Parity parity,
                             Variant variant, Eigen::Index r_max, double tol) {
  const int d = s.d();
  if (exp_mt.rows() != d * d || exp_mt.cols() != d * d)
    throw ShapeError("trotter_half_step: propagator must be d^2 x d^2");
  if (!exp_mt.allFinite()) throw InvalidInput("trotter_half_step: non-finite propagator");
  if ((exp_mt - exp_mt.transpose()).norm() > 1e-10 * std::max(1.0, exp_mt.norm()))
    throw InvalidInput("trotter_half_step: propagator must be symmetric");
  if (r_max < 1) throw InvalidParam("trotter_half_step: r_max must be positive");

  const bool odd = parity == Parity::odd;
  const Core& a = odd ? s.q : s.u;
  const Core& b = odd ? s.u : s.q;
  const BondWeights& outer = odd ? s.omega : s.sigma;  // bond enclosing the pair
  const BondWeights& inner = odd ? s.sigma : s.omega;  // bond the gate acts across

  const Eigen::Index r = s.rank();
  const Eigen::Index target = std::min(r_max, r);

  // center supercore: outer * A(i) * inner * B(j) * outer
  std::vector<Matrix> la(a.slices.size()), rb(b.slices.size());
  for (size_t i = 0; i < la.size(); ++i)
    la[i] = outer.diag() * a.slices[i] * inner.diag();
  for (size_t j = 0; j < rb.size(); ++j) rb[j] = b.slices[j] * outer.diag();
  SuperCore center = tensor::merge(Core(std::move(la)), Core(std::move(rb)));
  center = tensor::apply_gate(exp_mt, center);
  auto sp = tensor::split(center, target);

  const Eigen::Index k = sp.weights.size();
  Vector outer_inv = outer.pinv(1e-12);
  std::vector<Matrix> a_new(static_cast<size_t>(d)), b_new(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) {
    Matrix ai = outer_inv.asDiagonal() * sp.c1.slices[static_cast<size_t>(i)];
    Matrix bi = sp.c2.slices[static_cast<size_t>(i)] * outer_inv.asDiagonal();
    if (k < r) {  // pad dropped directions with zeros to keep the cell square
      ai.conservativeResize(r, r);
      ai.rightCols(r - k).setZero();
      bi.conservativeResize(r, r);
      bi.bottomRows(r - k).setZero();
    }
    a_new[static_cast<size_t>(i)] = std::move(ai);
    b_new[static_cast<size_t>(i)] = std::move(bi);
  }
  Vector w = Vector::Zero(r);
  w.head(k) = sp.weights.w;
  BondWeights inner_new = BondWeights(w).normalized();

  StepResult out;
  out.trunc_err = sp.trunc_err;
  itr2::ITR2State& st = out.state;
  if (odd) {
    st.q = Core(std::move(a_new));
    st.u = Core(std::move(b_new));
    st.sigma = inner_new;
    st.omega = outer;
  } else {
    st.u = Core(std::move(a_new));
    st.q = Core(std::move(b_new));
    st.omega = inner_new;
    st.sigma = outer;
  }
  st.canonical = false;

  if (variant == Variant::canonical) out.state = itr2::recanonicalize(st, tol);
  return out;
}

}  // namespace itrpower::evolve
