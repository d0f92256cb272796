#pragma once

#include <Eigen/Core>

#include "optomech/gaussian.hpp"

namespace optomech {

/// Laboratory inputs for the driven-mirror configuration.
struct PhysicalParams {
  double power_w;                  // laser power
  double carrier_frequency_rad_s;  // optical carrier omega_0
  double mechanical_frequency_rad_s;
  double detection_bandwidth_hz;
  double mode_bandwidth_hz;        // sideband (= laser) bandwidth
  double effective_mass_kg;
  double incidence_angle_rad;      // phi_0, cos(phi_0) = c q_0 / omega_0
};

inline constexpr double kSpeedOfLight = 2.99792458e8;     // m/s
inline constexpr double kHBar = 1.054571817e-34;          // J s (drops out of chi)

/// Effective interaction strengths of the two scattering processes.
struct Couplings {
  double chi;        // Stokes (parametric) coupling, rad/s
  double theta;      // anti-Stokes (beam-splitter) coupling, rad/s
  double ratio;      // r = theta/chi > 1
  double big_theta;  // Theta = sqrt(theta^2 - chi^2), rad/s
};

/**
 * chi   = cos(phi0) sqrt(P dnu_det^2 (w0 - W) / (2 M W c^2 dnu_mode)),
 * theta = chi sqrt((w0 + W)/(w0 - W)).
 *
 * Throws std::invalid_argument for non-positive inputs, W >= w0, or an
 * incidence angle outside [0, pi/2).
 */
Couplings couplings_from_physical(const PhysicalParams& p);

/// Physical-time entry point: t' = Theta * t.
inline double scaled_time(const Couplings& c, double t_seconds) {
  return c.big_theta * t_seconds;
}

/**
 * Dimensionless evolution inputs: scaled time t' = Theta*t, coupling
 * ratio r, and initial mean thermal phonon number of the mirror mode.
 * t' is reduced modulo 2*pi before any evaluation, so the dynamics is
 * exactly periodic. r must exceed 1 + 1e-12 (the closed forms divide by
 * powers of r^2 - 1).
 */
struct ScaledParams {
  ScaledParams(double t_prime, double r, double n_bar);
  double t_prime;
  double r;
  double n_bar;
};

/// The six time-dependent coefficients of the Gaussian characteristic
/// function: a, b, e are the mode occupations of Stokes, mirror and
/// anti-Stokes; c, f are the two squeezing-type correlations and d the
/// beam-splitter-type one.
struct CoefficientSet {
  double a, b, c, d, e, f;
};

CoefficientSet coefficients(const ScaledParams& s);

/// Initial state: vacuum (x) thermal(n_bar) (x) vacuum.
CovarianceMatrix initial_cm(double n_bar);

/// The full 6x6 covariance matrix in the ordering (X1,P1,Xb,Pb,X2,P2).
CovarianceMatrix full_cm(const ScaledParams& s);

/// Real linear quadrature map of the closed-form Heisenberg solutions;
/// symplectic (S J S^T = J) for every (t', r).
Eigen::Matrix<double, 6, 6> heisenberg_symplectic(double t_prime, double r);

/// S V0 S^T with S = heisenberg_symplectic. Independent cross-check of
/// full_cm when V0 = initial_cm(n_bar).
CovarianceMatrix evolve_cm_oracle(const CovarianceMatrix& v0, double t_prime, double r);

/// Brute-force check: integrates the linear quadrature equations of
/// motion with fixed-step RK4 in scaled time. steps <= 0 picks a default
/// for which tenfold refinement changes nothing at the 1e-8 level.
CovarianceMatrix ode_oracle(const CovarianceMatrix& v0, double t_prime, double r,
                            int steps = 0);

/// Two-mode squeezing parameter of the t' = pi sideband state,
/// asinh(2r(r^2+1)/(r^2-1)^2).
double tms_squeezing_parameter(double r);

namespace detail {

/// Coefficient evaluation in 128-bit floats. The entanglement tests need
/// eigenvalues around 1e-12 out of matrices with entries around 1e13;
/// double-rounded coefficients cannot support that.
struct CoefficientSetQ {
  __float128 a, b, c, d, e, f;
};
CoefficientSetQ coefficients_q(double t_prime, double r, double n_bar);

/// RK4-integrated quadrature propagator behind ode_oracle.
Eigen::Matrix<double, 6, 6> ode_propagator(double t_prime, double r, int steps);

}  // namespace detail

}  // namespace optomech
