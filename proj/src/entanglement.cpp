#include "optomech/entanglement.hpp"

#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace optomech {

const char* to_string(EntClass c) {
  switch (c) {
    case EntClass::FullyInseparable: return "1 (fully inseparable)";
    case EntClass::OneModeBiseparable: return "2 (one-mode biseparable)";
    case EntClass::TwoModeBiseparable: return "3 (two-mode biseparable)";
    case EntClass::SeparableOrBound: return "4or5 (separable across all splits)";
  }
  return "?";
}

namespace {

// Test matrix for the (mode | rest) split in the X/P-split symmetric
// form [[Vx, I/2], [I/2, Vp']], with the partial transposition applied
// to the P block, assembled directly from 128-bit coefficients.
double eta_q(const ScaledParams& s, int mode) {
  const detail::CoefficientSetQ q = detail::coefficients_q(s.t_prime, s.r, s.n_bar);
  const __float128 half = 0.5Q;
  __float128 vx[9] = {q.a + half, q.c,        q.f,
                      q.c,        q.b + half, -q.d,
                      q.f,        -q.d,       q.e + half};
  __float128 vp[9] = {q.a + half, -q.c,       -q.f,
                      -q.c,       q.b + half, -q.d,
                      -q.f,       -q.d,       q.e + half};
  for (int j = 0; j < 3; ++j) vp[mode * 3 + j] = -vp[mode * 3 + j];
  for (int i = 0; i < 3; ++i) vp[i * 3 + mode] = -vp[i * 3 + mode];

  __float128 m[36] = {};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      m[i * 6 + j] = vx[i * 3 + j];
      m[(3 + i) * 6 + (3 + j)] = vp[i * 3 + j];
    }
    m[i * 6 + (3 + i)] = half;
    m[(3 + i) * 6 + i] = half;
  }
  return detail::jacobi_min_eigenvalue(m, 6);
}

}  // namespace

double npt_eta(const ScaledParams& s, Mode mode) {
  return eta_q(s, static_cast<int>(mode));
}

double classification_tolerance(const ScaledParams& s) {
  const CoefficientSet q = coefficients(s);
  const double scale =
      std::max({1.0, std::abs(q.a), std::abs(q.b), std::abs(q.e), std::abs(q.c),
                std::abs(q.d), std::abs(q.f)});
  return std::max(1e-13, 1e4 * static_cast<double>(FLT128_EPSILON) * scale);
}

ClassificationResult classify(const ScaledParams& s, double tol) {
  if (tol <= 0.0) tol = classification_tolerance(s);
  ClassificationResult out;
  out.tolerance = tol;
  out.eta_stokes = npt_eta(s, Mode::Stokes);
  out.eta_mirror = npt_eta(s, Mode::Mirror);
  out.eta_anti_stokes = npt_eta(s, Mode::AntiStokes);
  const int nonneg = (out.eta_stokes >= -tol) + (out.eta_mirror >= -tol) +
                     (out.eta_anti_stokes >= -tol);
  switch (nonneg) {
    case 0: out.label = EntClass::FullyInseparable; break;
    case 1: out.label = EntClass::OneModeBiseparable; break;
    case 2: out.label = EntClass::TwoModeBiseparable; break;
    default: out.label = EntClass::SeparableOrBound; break;
  }
  return out;
}

std::optional<double> log_negativity_b(const ScaledParams& s) {
  const double eta = npt_eta(s, Mode::Mirror);
  if (eta >= 0.0) return std::nullopt;
  return std::log10(-eta);
}

SimonMarker simon_marker(const ScaledParams& s, int j) {
  if (j < 1 || j > 3) throw std::invalid_argument("traced mode index must be 1, 2 or 3");
  const detail::CoefficientSetQ q = detail::coefficients_q(s.t_prime, s.r, s.n_bar);
  // alpha_1 = alpha_4 = E, alpha_2 = B, alpha_3 = A, alpha_5 = D,
  // alpha_6 = C, alpha_7 = F; the marker uses (alpha_j, alpha_j+1, alpha_j+4).
  const __float128 alpha[8] = {0, q.e, q.b, q.a, q.e, q.d, q.c, q.f};
  const __float128 a = alpha[j] + 0.5Q;
  const __float128 b = alpha[j + 1] + 0.5Q;
  const __float128 g = alpha[j + 4];
  const __float128 v = (a * b - g * g) * (a * b - g * g) + __float128(1) / 16 -
                       g * g / 2 - (a * a + b * b) / 4;
  const __float128 scale =
      std::max({__float128(1), fabsq(a * b), a * a, b * b, g * g});
  const double noise =
      static_cast<double>(256 * FLT128_EPSILON * scale * scale);
  return SimonMarker{j, static_cast<double>(v), noise};
}

CovarianceMatrix reduced_cm(const CovarianceMatrix& v, int keep_a, int keep_b) {
  const int n = v.n_modes();
  if (keep_a < 0 || keep_a >= n || keep_b < 0 || keep_b >= n || keep_a == keep_b) {
    throw std::out_of_range("reduced_cm: invalid mode pair");
  }
  const int rows[4] = {2 * keep_a, 2 * keep_a + 1, 2 * keep_b, 2 * keep_b + 1};
  Eigen::MatrixXd m(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = v(rows[i], rows[j]);
  return CovarianceMatrix(std::move(m));
}

CovarianceMatrix heterodyne_conditioned_cm(const ScaledParams& s) {
  // The subtractions cancel entries of order (r^2-1)^-2 down to order
  // one, so they are carried out in 128-bit floats before rounding.
  const detail::CoefficientSetQ q = detail::coefficients_q(s.t_prime, s.r, s.n_bar);
  const double da = static_cast<double>(q.a + 0.5Q - q.f * q.f / (q.e + 1));
  const double db = static_cast<double>(q.b + 0.5Q - q.d * q.d / (q.e + 1));
  const double off = static_cast<double>(q.c + q.f * q.d / (q.e + 1));
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
  m(0, 0) = m(1, 1) = da;
  m(2, 2) = m(3, 3) = db;
  m(0, 2) = m(2, 0) = off;
  m(1, 3) = m(3, 1) = -off;
  return CovarianceMatrix(std::move(m));
}

}  // namespace optomech
