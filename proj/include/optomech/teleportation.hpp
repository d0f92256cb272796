#pragma once

#include "optomech/dynamics.hpp"
#include "optomech/entanglement.hpp"

namespace optomech {

enum class ChannelKind { TracedOut, HeterodyneConditioned };

/// Two-mode (Stokes, mirror) state used as the teleportation resource.
struct TeleportChannel {
  ChannelKind kind;
  CovarianceMatrix cm;  // ordering (X1, P1, Xb, Pb)
};

TeleportChannel channel(const ScaledParams& s, ChannelKind kind);

/// Covariance map of the Bell-measurement + feedforward protocol for an
/// arbitrary single-mode Gaussian input:
///   V11 += V11 + 2 V13 + V33,  V12 += V14 - V12 + V34 - V23,
///   V22 += V22 - 2 V24 + V44   (channel indices, 1-based).
CovarianceMatrix teleport_output_cm(const CovarianceMatrix& input,
                                    const TeleportChannel& ch);

struct FidelityPoint {
  double t_prime;
  double fidelity;   // in (0, 1]; > 1/2 beats any classical strategy
  ChannelKind kind;
};

/// Coherent-state fidelity with the anti-Stokes mode ignored:
/// F = 1 / (2 + a + b + 2c).
FidelityPoint fidelity_traced(const ScaledParams& s);

/// Coherent-state fidelity with the anti-Stokes mode heterodyned:
/// F = 1 / (2 + a + b + 2c - (f-d)^2/(e+1)).
FidelityPoint fidelity_heterodyne(const ScaledParams& s);

/// Entropy gained by the heterodyne detection, S(V1b) - S(V1b_het), bits.
double information_gain(const ScaledParams& s);

/// Mirror occupation right after teleporting in the vacuum:
/// n_eff = 1 + a + b + 2c - (f-d)^2/(e+1) = 1/F_het - 1.
double effective_thermal_number(const ScaledParams& s);

/// Displacement gains applied by the receiving side; homodyne gains are
/// the protocol constants +-sqrt(2), the heterodyne pair scales the
/// measured coherent amplitude.
struct FeedforwardGains {
  double x_homodyne;    // on X_+
  double p_homodyne;    // on P_-
  double x_heterodyne;  // on Re(alpha)
  double p_heterodyne;  // on Im(alpha)
};

FeedforwardGains feedforward_gains(const ScaledParams& s);

/// Weights of b^dag(0), a1(0), a2^dag(0) in the readout combination
/// Z(t) = a1(t) - a2^dag(t) measured by the second (reading) pulse:
///   c_bdag  = (chi + theta) sin(Theta t) / Theta,
///   c_a1    = [theta^2 - chi^2 cos - chi theta + chi theta cos] / Theta^2,
///   c_a2dag = -[chi theta + chi theta cos - chi^2 - theta^2 cos] / Theta^2.
/// When cos(Theta t) = 0 and Theta(theta+chi) >> theta(theta-chi) the
/// b^dag term dominates and the detector reads the mirror state.
struct ReadoutCoefficients {
  double b_dagger;
  double a1;
  double a2_dagger;
};

ReadoutCoefficients readout_coefficients(double t_seconds, const Couplings& c);

struct FidelityScanResult {
  double t_prime_max;
  double fidelity_max;
};

/// Locate the fidelity peak on [t_lo, t_hi]: coarse scan (default 2e4
/// points) followed by golden-section refinement to 1e-12 in t'. Ties go
/// to the smallest t'. Throws std::invalid_argument on an empty range.
FidelityScanResult optimal_fidelity_scan(double t_lo, double t_hi, double r,
                                         double n_bar, ChannelKind kind,
                                         int coarse_points = 20000);

}  // namespace optomech
