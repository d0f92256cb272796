#include "optomech/gaussian.hpp"

#include <Eigen/LU>
#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <string>

namespace optomech {

CovarianceMatrix::CovarianceMatrix(Eigen::MatrixXd entries) : m_(std::move(entries)) {
  if (m_.rows() != m_.cols() || m_.rows() < 2 || m_.rows() % 2 != 0) {
    throw std::invalid_argument("covariance matrix must be square with even dimension");
  }
  n_modes_ = static_cast<int>(m_.rows()) / 2;
  const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
  const double asym = (m_ - m_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) {
    throw std::invalid_argument("covariance matrix is not symmetric");
  }
  m_ = ((m_ + m_.transpose()) / 2.0).eval();
}

CovarianceMatrix CovarianceMatrix::vacuum(int n_modes) {
  if (n_modes < 1) throw std::invalid_argument("n_modes must be >= 1");
  return CovarianceMatrix(0.5 * Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes));
}

CovarianceMatrix CovarianceMatrix::thermal(const std::vector<double>& n_bar) {
  if (n_bar.empty()) throw std::invalid_argument("need at least one mode");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n_bar.size(), 2 * n_bar.size());
  for (std::size_t k = 0; k < n_bar.size(); ++k) {
    if (n_bar[k] < 0.0) throw std::invalid_argument("thermal occupation must be >= 0");
    m(2 * k, 2 * k) = m(2 * k + 1, 2 * k + 1) = n_bar[k] + 0.5;
  }
  return CovarianceMatrix(std::move(m));
}

double CovarianceMatrix::max_abs() const { return m_.cwiseAbs().maxCoeff(); }

Eigen::MatrixXd symplectic_form(int n_modes) {
  if (n_modes < 1) throw std::invalid_argument("n_modes must be >= 1");
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  for (int k = 0; k < n_modes; ++k) {
    j(2 * k, 2 * k + 1) = 1.0;
    j(2 * k + 1, 2 * k) = -1.0;
  }
  return j;
}

CovarianceMatrix partial_transpose(const CovarianceMatrix& v, int mode_index) {
  if (mode_index < 0 || mode_index >= v.n_modes()) {
    throw std::out_of_range("mode index out of range: " + std::to_string(mode_index));
  }
  Eigen::MatrixXd m = v.matrix();
  const int p = 2 * mode_index + 1;
  m.row(p) *= -1.0;
  m.col(p) *= -1.0;
  return CovarianceMatrix(std::move(m));
}

namespace detail {

double jacobi_min_eigenvalue(__float128* a, int n) {
  auto at = [&](int i, int j) -> __float128& { return a[i * n + j]; };

  __float128 frob = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) frob += at(i, j) * at(i, j);
  // off-diagonal floor of the iteration itself: roughly (n*eps*|A|_F)^2
  const __float128 stop = frob * FLT128_EPSILON * FLT128_EPSILON * n * n;

  const int max_sweeps = 200;
  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    __float128 off = 0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += at(p, q) * at(p, q);
    if (off <= stop) break;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const __float128 apq = at(p, q);
        if (apq == 0) continue;

        const __float128 h = at(q, q) - at(p, p);
        __float128 t;
        if (fabsq(h) > 1e30Q * fabsq(apq)) {
          t = apq / h;
        } else {
          const __float128 theta = h / (2 * apq);
          t = 1 / (fabsq(theta) + sqrtq(1 + theta * theta));
          if (theta < 0) t = -t;
        }
        const __float128 c = 1 / sqrtq(1 + t * t);
        const __float128 s = t * c;
        const __float128 tau = s / (1 + c);

        const __float128 delta = t * apq;
        at(p, p) -= delta;
        at(q, q) += delta;
        at(p, q) = 0;
        at(q, p) = 0;
        for (int r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const __float128 arp = at(r, p);
          const __float128 arq = at(r, q);
          at(r, p) = arp - s * (arq + tau * arp);
          at(p, r) = at(r, p);
          at(r, q) = arq + s * (arp - tau * arq);
          at(q, r) = at(r, q);
        }
      }
    }
  }
  if (sweep == max_sweeps) {
    throw std::runtime_error("Jacobi eigenvalue iteration did not converge");
  }

  __float128 mn = at(0, 0);
  for (int i = 1; i < n; ++i) mn = std::min(mn, at(i, i));
  return static_cast<double>(mn);
}

double min_eigenvalue_hermitian(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const int n = static_cast<int>(a.rows());
  // [[A, -B], [B, A]] carries the spectrum of A + iB, each value doubled.
  std::vector<__float128> e(static_cast<std::size_t>(4 * n * n), 0);
  auto at = [&](int i, int j) -> __float128& { return e[i * 2 * n + j]; };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      at(i, j) = a(i, j);
      at(n + i, n + j) = a(i, j);
      at(i, n + j) = -b(i, j);
      at(n + i, j) = b(i, j);
    }
  }
  return jacobi_min_eigenvalue(e.data(), 2 * n);
}

// When V has no X-P cross correlations (true for every state in this
// family), the Hermitian problem W + iJ/2 reduces to the real symmetric
// matrix [[Wxx, I/2], [I/2, Wpp]] of half the embedded size.
bool xp_decoupled(const Eigen::MatrixXd& w) {
  const int n = static_cast<int>(w.rows()) / 2;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (w(2 * i, 2 * j + 1) != 0.0 || w(2 * i + 1, 2 * j) != 0.0) return false;
  return true;
}

double min_eigenvalue_test_matrix(const Eigen::MatrixXd& w) {
  const int n = static_cast<int>(w.rows()) / 2;
  if (xp_decoupled(w)) {
    std::vector<__float128> e(static_cast<std::size_t>(4 * n * n), 0);
    auto at = [&](int i, int j) -> __float128& { return e[i * 2 * n + j]; };
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        at(i, j) = w(2 * i, 2 * j);
        at(n + i, n + j) = w(2 * i + 1, 2 * j + 1);
      }
      at(i, n + i) = 0.5Q;
      at(n + i, i) = 0.5Q;
    }
    return jacobi_min_eigenvalue(e.data(), 2 * n);
  }
  return min_eigenvalue_hermitian(w, symplectic_form(n) / 2.0);
}

}  // namespace detail

double npt_min_eigenvalue(const CovarianceMatrix& v, int mode_index) {
  const CovarianceMatrix pt = partial_transpose(v, mode_index);
  return detail::min_eigenvalue_test_matrix(pt.matrix());
}

EntropyPair symplectic_eigenvalues_2mode(const CovarianceMatrix& v) {
  if (v.n_modes() != 2) {
    throw std::invalid_argument("symplectic_eigenvalues_2mode expects a 4x4 CM");
  }
  const Eigen::Matrix<long double, 4, 4> m = v.matrix().cast<long double>();
  const long double det_a = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  const long double det_b = m(2, 2) * m(3, 3) - m(2, 3) * m(3, 2);
  const long double det_c = m(0, 2) * m(1, 3) - m(0, 3) * m(1, 2);
  const long double det_v = m.determinant();
  const long double delta = det_a + det_b + 2 * det_c;

  const long double scale = std::max<long double>(1.0L, delta * delta);
  if (det_v < -1e-12L * scale) {
    throw std::runtime_error("symplectic eigenvalues: negative determinant, not a valid CM");
  }
  long double disc = delta * delta - 4 * det_v;
  if (disc < -1e-12L * scale) {
    throw std::runtime_error("symplectic eigenvalues: negative discriminant, not a valid CM");
  }
  disc = std::max<long double>(disc, 0.0L);
  const long double root = sqrtl(disc);
  const long double hi = (delta + root) / 2;
  if (hi < 0) {
    throw std::runtime_error("symplectic eigenvalues: negative radicand, not a valid CM");
  }
  // n_minus via the conjugate form; avoids the cancellation in delta - root.
  const long double lo = hi > 0 ? std::max<long double>(det_v / hi, 0.0L) : 0.0L;
  return EntropyPair{static_cast<double>(sqrtl(hi)), static_cast<double>(sqrtl(lo))};
}

namespace {

long double entropy_term(long double n) {
  const long double x = n - 0.5L;
  if (x <= 0) return 0.0L;  // pure-mode contribution
  return (n + 0.5L) * log2l(n + 0.5L) - x * log2l(x);
}

}  // namespace

double von_neumann_entropy(const EntropyPair& n) {
  return static_cast<double>(entropy_term(n.n_plus) + entropy_term(n.n_minus));
}

double von_neumann_entropy(const CovarianceMatrix& v) {
  return von_neumann_entropy(symplectic_eigenvalues_2mode(v));
}

bool is_valid_cm(const CovarianceMatrix& v, double tol) {
  const double threshold = tol * std::max(1.0, v.max_abs());
  return detail::min_eigenvalue_test_matrix(v.matrix()) >= -threshold;
}

}  // namespace optomech
