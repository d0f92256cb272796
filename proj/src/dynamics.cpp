#include "optomech/dynamics.hpp"

#include <quadmath.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace optomech {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double reduce_mod_2pi(double t) {
  double x = std::fmod(t, kTwoPi);
  if (x < 0.0) x += kTwoPi;
  return x;
}

}  // namespace

Couplings couplings_from_physical(const PhysicalParams& p) {
  if (p.power_w <= 0 || p.carrier_frequency_rad_s <= 0 || p.mechanical_frequency_rad_s <= 0 ||
      p.detection_bandwidth_hz <= 0 || p.mode_bandwidth_hz <= 0 || p.effective_mass_kg <= 0) {
    throw std::invalid_argument("physical parameters must be strictly positive");
  }
  if (p.mechanical_frequency_rad_s >= p.carrier_frequency_rad_s) {
    throw std::invalid_argument("mechanical frequency must be below the carrier");
  }
  if (p.incidence_angle_rad < 0 || p.incidence_angle_rad >= std::numbers::pi / 2) {
    throw std::invalid_argument("incidence angle must lie in [0, pi/2)");
  }
  const double w0 = p.carrier_frequency_rad_s;
  const double wm = p.mechanical_frequency_rad_s;
  const double chi =
      std::cos(p.incidence_angle_rad) *
      std::sqrt(p.power_w * p.detection_bandwidth_hz * p.detection_bandwidth_hz * (w0 - wm) /
                (2.0 * p.effective_mass_kg * wm * kSpeedOfLight * kSpeedOfLight *
                 p.mode_bandwidth_hz));
  const double r = std::sqrt((w0 + wm) / (w0 - wm));
  const double theta = chi * r;
  return Couplings{chi, theta, r, chi * std::sqrt((r - 1.0) * (r + 1.0))};
}

ScaledParams::ScaledParams(double t_prime_, double r_, double n_bar_)
    : t_prime(t_prime_), r(r_), n_bar(n_bar_) {
  if (!std::isfinite(t_prime)) throw std::invalid_argument("t' must be finite");
  if (!(r > 1.0 + 1e-12)) throw std::invalid_argument("coupling ratio r must exceed 1");
  if (!(n_bar >= 0.0) || !std::isfinite(n_bar)) {
    throw std::invalid_argument("n_bar must be finite and >= 0");
  }
}

CoefficientSet coefficients(const ScaledParams& sp) {
  const double t = reduce_mod_2pi(sp.t_prime);
  const double r = sp.r;
  // (r-1)(r+1) keeps full precision where r*r - 1 would round at ulp(1)
  const double d = (r - 1.0) * (r + 1.0);
  const double s = std::sin(t);
  const double c = std::cos(t);
  const double half = std::sin(t / 2.0);
  const double u = 2.0 * half * half;  // 1 - cos t, cancellation-free
  const double k = sp.n_bar * d - 1.0;
  // 1 - cos 2t = 2 sin^2 t, 1 + cos 2t = 2 cos^2 t, sin 2t = 2 s c.
  CoefficientSet out;
  out.a = (s * s * k + 2.0 * r * r * u) / (d * d);
  out.b = sp.n_bar * c * c + s * s / d;
  out.c = s * (r * r + c * k) / (d * std::sqrt(d));
  out.d = -r * s * (1.0 + c * k) / (d * std::sqrt(d));
  out.e = r * r * (s * s * k + 2.0 * u) / (d * d);
  out.f = r * (s * s * k + (1.0 + r * r) * u) / (d * d);
  return out;
}

namespace detail {

CoefficientSetQ coefficients_q(double t_prime, double r_, double n_bar) {
  // Reduce by the same double-precision period as the double path, so
  // t' = 2*pi maps to the exact initial state in both.
  const __float128 two_pi = __float128(kTwoPi);
  __float128 t = fmodq(t_prime, two_pi);
  if (t < 0) t += two_pi;
  const __float128 r = r_;
  const __float128 nb = n_bar;
  const __float128 d = (r - 1) * (r + 1);
  const __float128 s = sinq(t);
  const __float128 c = cosq(t);
  const __float128 half = sinq(t / 2);
  const __float128 u = 2 * half * half;
  const __float128 k = nb * d - 1;
  const __float128 d32 = d * sqrtq(d);
  CoefficientSetQ out;
  out.a = (s * s * k + 2 * r * r * u) / (d * d);
  out.b = nb * c * c + s * s / d;
  out.c = s * (r * r + c * k) / d32;
  out.d = -r * s * (1 + c * k) / d32;
  out.e = r * r * (s * s * k + 2 * u) / (d * d);
  out.f = r * (s * s * k + (1 + r * r) * u) / (d * d);
  return out;
}

}  // namespace detail

CovarianceMatrix initial_cm(double n_bar) {
  return CovarianceMatrix::thermal({0.0, n_bar, 0.0});
}

CovarianceMatrix full_cm(const ScaledParams& sp) {
  const CoefficientSet q = coefficients(sp);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(6, 6);
  m(0, 0) = m(1, 1) = q.a + 0.5;
  m(2, 2) = m(3, 3) = q.b + 0.5;
  m(4, 4) = m(5, 5) = q.e + 0.5;
  m(0, 2) = m(2, 0) = q.c;
  m(1, 3) = m(3, 1) = -q.c;
  m(0, 4) = m(4, 0) = q.f;
  m(1, 5) = m(5, 1) = -q.f;
  m(2, 4) = m(4, 2) = -q.d;
  m(3, 5) = m(5, 3) = -q.d;
  return CovarianceMatrix(std::move(m));
}

Eigen::Matrix<double, 6, 6> heisenberg_symplectic(double t_prime, double r) {
  if (!(r > 1.0)) throw std::invalid_argument("coupling ratio r must exceed 1");
  const double t = reduce_mod_2pi(t_prime);
  const double d = (r - 1.0) * (r + 1.0);
  const double g = 1.0 / std::sqrt(d);  // chi / Theta; theta / Theta = r g
  const double s = std::sin(t);
  const double c = std::cos(t);
  const double half = std::sin(t / 2.0);
  const double u = 2.0 * half * half;

  // Bogoliubov coefficients of a1(t), b(t), a2(t) on (a1, b^dag, a2^dag)(0)
  // and conjugates, written in terms of r and t'.
  const double m1 = 1.0 + u / d;       // (theta^2 - chi^2 cos)/Theta^2
  const double nb = s * g;             // chi sin / Theta
  const double n2 = -r * u / d;        // -chi theta (1 - cos)/Theta^2
  const double np1 = s * g;
  const double mp2 = -r * s * g;
  const double npp1 = r * u / d;
  const double mbb = r * s * g;
  const double m2 = c - u / d;         // (theta^2 cos - chi^2)/Theta^2

  // Per source mode j, a coefficient m on a_j and n on a_j^dag map to
  // X-weight m+n and P-weight m-n.
  Eigen::Matrix<double, 6, 6> s_mat = Eigen::Matrix<double, 6, 6>::Zero();
  s_mat(0, 0) = m1;   s_mat(0, 2) = nb;   s_mat(0, 4) = n2;
  s_mat(1, 1) = m1;   s_mat(1, 3) = -nb;  s_mat(1, 5) = -n2;
  s_mat(2, 0) = np1;  s_mat(2, 2) = c;    s_mat(2, 4) = mp2;
  s_mat(3, 1) = -np1; s_mat(3, 3) = c;    s_mat(3, 5) = mp2;
  s_mat(4, 0) = npp1; s_mat(4, 2) = mbb;  s_mat(4, 4) = m2;
  s_mat(5, 1) = -npp1; s_mat(5, 3) = mbb; s_mat(5, 5) = m2;
  return s_mat;
}

CovarianceMatrix evolve_cm_oracle(const CovarianceMatrix& v0, double t_prime, double r) {
  if (v0.n_modes() != 3) throw std::invalid_argument("expected a 3-mode CM");
  const Eigen::Matrix<double, 6, 6> s = heisenberg_symplectic(t_prime, r);
  Eigen::MatrixXd out = s * v0.matrix() * s.transpose();
  out = ((out + out.transpose()) / 2.0).eval();
  return CovarianceMatrix(std::move(out));
}

namespace detail {

Eigen::Matrix<double, 6, 6> ode_propagator(double t_prime, double r, int steps) {
  if (!(r > 1.0)) throw std::invalid_argument("coupling ratio r must exceed 1");
  const double t_end = reduce_mod_2pi(t_prime);
  if (steps <= 0) steps = 20000;
  const double h = t_end / steps;
  if (t_end > 0.0 && !(h > 0.0)) {
    throw std::runtime_error("ode_oracle: step size underflow");
  }

  // dX1 = g Xb, dXb = g X1 - rg X2, dX2 = rg Xb; P sector mirrors with
  // the parametric sign flipped.
  const double g = 1.0 / std::sqrt((r - 1.0) * (r + 1.0));
  Eigen::Matrix<double, 6, 6> k = Eigen::Matrix<double, 6, 6>::Zero();
  k(0, 2) = g;
  k(2, 0) = g;
  k(2, 4) = -r * g;
  k(4, 2) = r * g;
  k(1, 3) = -g;
  k(3, 1) = -g;
  k(3, 5) = -r * g;
  k(5, 3) = r * g;

  using Mat6 = Eigen::Matrix<double, 6, 6>;
  Mat6 s = Mat6::Identity();
  for (int i = 0; i < steps; ++i) {
    const Mat6 k1 = k * s;
    const Mat6 k2 = k * (s + 0.5 * h * k1);
    const Mat6 k3 = k * (s + 0.5 * h * k2);
    const Mat6 k4 = k * (s + h * k3);
    s += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return s;
}

}  // namespace detail

CovarianceMatrix ode_oracle(const CovarianceMatrix& v0, double t_prime, double r, int steps) {
  if (v0.n_modes() != 3) throw std::invalid_argument("expected a 3-mode CM");
  const Eigen::Matrix<double, 6, 6> s = detail::ode_propagator(t_prime, r, steps);
  Eigen::MatrixXd out = s * v0.matrix() * s.transpose();
  out = ((out + out.transpose()) / 2.0).eval();
  return CovarianceMatrix(std::move(out));
}

double tms_squeezing_parameter(double r) {
  if (!(r > 1.0)) throw std::invalid_argument("coupling ratio r must exceed 1");
  const double d = (r - 1.0) * (r + 1.0);
  return std::asinh(2.0 * r * (r * r + 1.0) / (d * d));
}

}  // namespace optomech
