#include "itrpower/models.hpp"

#include <cmath>
#include <numbers>

namespace itrpower::models {

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// 15-point Kronrod rule with embedded 7-point Gauss rule on [-1, 1].
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double k15;
  double err;
};

Panel panel(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fc = f(c);
  double k15 = kWgk[7] * fc;
  double g7 = kWg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    double fl = f(c - h * kXgk[i]);
    double fr = f(c + h * kXgk[i]);
    k15 += kWgk[i] * (fl + fr);
    if (i % 2 == 1) g7 += kWg[i / 2] * (fl + fr);
  }
  Panel p;
  p.k15 = k15 * h;
  p.err = std::abs((k15 - g7) * h);
  return p;
}

double adapt(const std::function<double(double)>& f, double a, double b, double tol, int depth) {
  Panel p = panel(f, a, b);
  if (p.err <= tol || depth >= 60) {
    if (depth >= 60 && p.err > tol * 1e3)
      throw ConvergenceFailure("integrate: panel error did not decay");
    return p.k15;
  }
  double mid = 0.5 * (a + b);
  return adapt(f, a, mid, 0.5 * tol, depth + 1) + adapt(f, mid, b, 0.5 * tol, depth + 1);
}

// XXZ-type pair coupling X(x)X - Ytil(x)Ytil + delta Z(x)Z with the
// imaginary factor of the middle generator folded into a real antisymmetric
// Ytil, so the gate stays real symmetric.
Matrix xxz_gate(const Matrix& x, const Matrix& ytil, const Matrix& z, double delta) {
  return kron(x, x) - kron(ytil, ytil) + delta * kron(z, z);
}

}  // namespace

ModelKind parse_model(const std::string& name) {
  if (name == "ising") return ModelKind::ising;
  if (name == "heisenberg-s1") return ModelKind::heisenberg_s1;
  if (name == "heisenberg-half") return ModelKind::heisenberg_half;
  throw InvalidParam("unknown model: " + name);
}

std::string model_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::ising: return "ising";
    case ModelKind::heisenberg_s1: return "heisenberg-s1";
    case ModelKind::heisenberg_half: return "heisenberg-half";
  }
  throw InvalidParam("unknown model kind");
}

int phys_dim(ModelKind kind) { return kind == ModelKind::heisenberg_s1 ? 3 : 2; }

Matrix build_gate(const ModelSpec& spec) {
  if (!std::isfinite(spec.g) || !std::isfinite(spec.delta))
    throw InvalidParam("model parameters must be finite");
  switch (spec.kind) {
    case ModelKind::ising: {
      Matrix sz = (Matrix(2, 2) << 1, 0, 0, -1).finished();
      Matrix sx = (Matrix(2, 2) << 0, 1, 1, 0).finished();
      Matrix id = Matrix::Identity(2, 2);
      return -kron(sz, sz) - spec.g * kron(id, sx);
    }
    case ModelKind::heisenberg_s1: {
      const double s = 1.0 / std::numbers::sqrt2;
      Matrix x = (Matrix(3, 3) << 0, s, 0, s, 0, s, 0, s, 0).finished();
      Matrix ytil = (Matrix(3, 3) << 0, -s, 0, s, 0, -s, 0, s, 0).finished();
      Matrix z = (Matrix(3, 3) << 1, 0, 0, 0, 0, 0, 0, 0, -1).finished();
      return xxz_gate(x, ytil, z, spec.delta);
    }
    case ModelKind::heisenberg_half: {
      Matrix x = (Matrix(2, 2) << 0, 0.5, 0.5, 0).finished();
      Matrix ytil = (Matrix(2, 2) << 0, 0.5, -0.5, 0).finished();
      Matrix z = (Matrix(2, 2) << 0.5, 0, 0, -0.5).finished();
      return xxz_gate(x, ytil, z, spec.delta);
    }
  }
  throw InvalidParam("unknown model kind");
}

std::optional<double> exact_eigenvalue(const ModelSpec& spec) {
  switch (spec.kind) {
    case ModelKind::ising: {
      const double g = spec.g;
      auto eps = [g](double x) { return std::sqrt(1.0 + g * g - 2.0 * g * std::cos(x)); };
      // integrand is even and 2*pi-periodic
      double val = integrate(eps, 0.0, std::numbers::pi, 1e-14);
      return -val / std::numbers::pi;
    }
    case ModelKind::heisenberg_s1:
      if (spec.delta == 1.0) return -1.4014840389712;  // high-precision numerical reference
      return std::nullopt;
    case ModelKind::heisenberg_half:
      if (spec.delta == 1.0) return 0.25 - std::numbers::ln2;
      return std::nullopt;
  }
  return std::nullopt;
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (!(tol > 0.0)) throw InvalidParam("integrate: tolerance must be positive");
  if (a == b) return 0.0;
  return adapt(f, a, b, tol, 0);
}

}  // namespace itrpower::models
