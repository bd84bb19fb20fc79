#include "itrpower/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "itrpower/linalg.hpp"

namespace itrpower::oracle {

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

int gate_dim(const Matrix& m) {
  int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m.rows()))));
  if (m.rows() != m.cols() || static_cast<Eigen::Index>(d) * d != m.rows())
    throw ShapeError("oracle: gate must be square with d^2 rows");
  return d;
}

long chain_dim(int d, int L) {
  if (L < 2) throw InvalidParam("oracle: chain length must be at least 2");
  double n = std::pow(static_cast<double>(d), L);
  if (n > 4096.0) throw TooLarge("oracle: d^L exceeds 4096");
  return static_cast<long>(std::lround(n));
}

// y += (term on sites (k, k+1 mod L)) applied to x, site 0 most significant
void apply_bond(const Matrix& m, int d, int L, int k, const Vector& x, Vector& y) {
  const long n = x.size();
  const int dd = d * d;
  if (k < L - 1) {
    long suffix = 1;
    for (int s = 0; s < L - 2 - k; ++s) suffix *= d;
    const long prefix = n / (suffix * dd);
    for (long a = 0; a < prefix; ++a)
      for (long b = 0; b < suffix; ++b) {
        const long base = a * dd * suffix + b;
        for (int pp = 0; pp < dd; ++pp) {
          double acc = 0.0;
          for (int p = 0; p < dd; ++p) {
            double c = m(pp, p);
            if (c != 0.0) acc += c * x[base + p * suffix];
          }
          y[base + pp * suffix] += acc;
        }
      }
  } else {
    // wrap bond: left site L-1 (stride 1), right site 0 (stride d^{L-1})
    const long hi = n / d;
    const long mid = hi / d;
    for (long mm = 0; mm < mid; ++mm)
      for (int i0n = 0; i0n < d; ++i0n)
        for (int iln = 0; iln < d; ++iln) {
          double acc = 0.0;
          for (int i0 = 0; i0 < d; ++i0)
            for (int il = 0; il < d; ++il) {
              double c = m(iln * d + i0n, il * d + i0);
              if (c != 0.0) acc += c * x[static_cast<long>(i0) * hi + mm * d + il];
            }
          y[static_cast<long>(i0n) * hi + mm * d + iln] += acc;
        }
  }
}

Vector apply_chain(const Matrix& m, int d, int L, bool periodic, const Vector& x) {
  Vector y = Vector::Zero(x.size());
  const int bonds = periodic ? L : L - 1;
  for (int k = 0; k < bonds; ++k) apply_bond(m, d, L, k, x, y);
  return y;
}

// Self-contained Lanczos with full reorthogonalization for the smallest
// eigenvalue of a symmetric matrix-free operator.
double lanczos_smallest(const std::function<Vector(const Vector&)>& apply, long n) {
  std::mt19937_64 eng(0x5eedULL);
  Vector v(n);
  for (long i = 0; i < n; ++i)
    v[i] = 2.0 * (static_cast<double>(eng() >> 11) * (1.0 / 9007199254740992.0)) - 1.0;
  v.normalize();

  const int max_k = static_cast<int>(std::min<long>(n, 500));
  Matrix basis(n, max_k);
  std::vector<double> alpha, beta;  // beta[j] couples step j to j+1
  basis.col(0) = v;
  double last = 0.0;
  bool have_last = false;

  for (int k = 0; k < max_k; ++k) {
    Vector w = apply(basis.col(k));
    double a = basis.col(k).dot(w);
    alpha.push_back(a);
    w -= a * basis.col(k);
    if (k > 0) w -= beta[static_cast<size_t>(k) - 1] * basis.col(k - 1);
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j <= k; ++j) w -= basis.col(j).dot(w) * basis.col(j);
    double b = w.norm();

    const bool breakdown = b < 1e-13;
    const bool full = k + 1 == max_k;
    if (breakdown || full || (k + 1) % 20 == 0) {
      const int kk = k + 1;
      Matrix tri = Matrix::Zero(kk, kk);
      for (int j = 0; j < kk; ++j) {
        tri(j, j) = alpha[static_cast<size_t>(j)];
        if (j + 1 < kk) tri(j, j + 1) = tri(j + 1, j) = beta[static_cast<size_t>(j)];
      }
      Eigen::SelfAdjointEigenSolver<Matrix> es(tri);
      Eigen::Index imin = 0;
      es.eigenvalues().minCoeff(&imin);
      double theta = es.eigenvalues()[imin];
      double resid = b * std::abs(es.eigenvectors()(kk - 1, imin));
      double scale = std::max(1.0, std::abs(theta));
      if (breakdown || resid < 1e-11 * scale ||
          (have_last && std::abs(theta - last) < 1e-13 * scale && resid < 1e-8 * scale))
        return theta;
      last = theta;
      have_last = true;
      if (full) break;
    }
    beta.push_back(b);
    basis.col(k + 1) = w / b;
  }
  throw ConvergenceFailure("finite_chain_ground: Lanczos did not converge");
}

}  // namespace

Matrix dense_transfer(const Core& x, itr::TransferFlavor flavor, const BondWeights* w) {
  if (x.r_left() != x.r_right()) throw ShapeError("dense_transfer: core must be square");
  const Eigen::Index r = x.r_left();
  if (r > 8) throw TooLarge("dense_transfer: rank exceeds 8");
  if (flavor != itr::TransferFlavor::plain) {
    if (w == nullptr) throw InvalidParam("dense_transfer: weighted flavor needs weights");
    if (w->size() != r) throw ShapeError("dense_transfer: weight size mismatch");
  }
  Matrix t = Matrix::Zero(r * r, r * r);
  for (const auto& s : x.slices) {
    Matrix c = s;
    if (flavor == itr::TransferFlavor::left_weighted) c = w->diag() * s;
    if (flavor == itr::TransferFlavor::right_weighted) c = s * w->diag();
    t += kron(c, c);
  }
  return t;
}

Matrix finite_chain_hamiltonian(const Matrix& m, int L, bool periodic) {
  const int d = gate_dim(m);
  const long n = chain_dim(d, L);
  if (n > 2048) throw TooLarge("finite_chain_hamiltonian: d^L exceeds 2048");
  Matrix h = Matrix::Zero(n, n);
  Vector e = Vector::Zero(n);
  for (long j = 0; j < n; ++j) {
    e[j] = 1.0;
    h.col(j) = apply_chain(m, d, L, periodic, e);
    e[j] = 0.0;
  }
  return h;
}

GroundResult finite_chain_ground(const Matrix& m, int L, bool periodic) {
  const int d = gate_dim(m);
  if (!m.allFinite()) throw InvalidInput("finite_chain_ground: non-finite gate");
  const long n = chain_dim(d, L);
  GroundResult out;
  if (n <= 512) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(finite_chain_hamiltonian(m, L, periodic));
    out.e0 = es.eigenvalues().minCoeff();
  } else {
    out.e0 = lanczos_smallest(
        [&](const Vector& x) { return apply_chain(m, d, L, periodic, x); }, n);
  }
  out.per_site = out.e0 / L;
  return out;
}

Vector dense_trotter_ring(const Matrix& m, int L, double t, const Vector& x_dense) {
  const int d = gate_dim(m);
  const long n = chain_dim(d, L);
  if (L % 2 != 0) throw InvalidParam("dense_trotter_ring: L must be even");
  if (x_dense.size() != n) throw ShapeError("dense_trotter_ring: state dimension mismatch");
  const Matrix g = linalg::expm_neg_sym(m, t);
  Vector cur = x_dense;
  for (int parity = 1; parity >= 0; --parity) {  // odd-start bonds first
    Vector next = Vector::Zero(n);
    Vector tmp = cur;
    for (int k = parity; k < L; k += 2) {
      next.setZero();
      apply_bond(g, d, L, k, tmp, next);
      tmp = next;
    }
    cur = tmp;
  }
  return cur;
}

Vector ring_eval(const itr2::ITR2State& s, int L, int offset) {
  if (L < 2 || L % 2 != 0) throw InvalidParam("ring_eval: L must be even and >= 2");
  if (offset != 0 && offset != 1) throw InvalidParam("ring_eval: offset must be 0 or 1");
  const int d = s.d();
  const long n = chain_dim(d, L);
  const Eigen::Index r = s.rank();

  std::vector<Matrix> qs(static_cast<size_t>(d)), us(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) {
    qs[static_cast<size_t>(i)] = s.q.slices[static_cast<size_t>(i)] * s.sigma.diag();
    us[static_cast<size_t>(i)] = s.u.slices[static_cast<size_t>(i)] * s.omega.diag();
  }

  Vector out(n);
  long idx = 0;
  // depth-first over index strings, sharing prefix products
  std::vector<Matrix> stack(static_cast<size_t>(L) + 1);
  stack[0] = Matrix::Identity(r, r);
  std::vector<int> digit(static_cast<size_t>(L), 0);
  int pos = 0;
  while (pos >= 0) {
    if (pos == L) {
      out[idx++] = stack[static_cast<size_t>(L)].trace();
      --pos;
      continue;
    }
    int& i = digit[static_cast<size_t>(pos)];
    if (i == d) {
      i = 0;
      --pos;
      continue;
    }
    const auto& core = ((pos + offset) % 2 == 0) ? qs[static_cast<size_t>(i)]
                                                 : us[static_cast<size_t>(i)];
    stack[static_cast<size_t>(pos) + 1] = stack[static_cast<size_t>(pos)] * core;
    ++i;
    ++pos;
  }
  return out;
}

}  // namespace itrpower::oracle
