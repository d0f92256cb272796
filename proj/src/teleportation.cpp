#include "optomech/teleportation.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "parallel.hpp"

namespace optomech {

TeleportChannel channel(const ScaledParams& s, ChannelKind kind) {
  if (kind == ChannelKind::TracedOut) {
    return TeleportChannel{kind, reduced_cm(full_cm(s), 0, 1)};
  }
  return TeleportChannel{kind, heterodyne_conditioned_cm(s)};
}

CovarianceMatrix teleport_output_cm(const CovarianceMatrix& input,
                                    const TeleportChannel& ch) {
  if (input.n_modes() != 1) throw std::invalid_argument("input must be a single-mode CM");
  const Eigen::MatrixXd& c = ch.cm.matrix();
  Eigen::MatrixXd out(2, 2);
  out(0, 0) = input(0, 0) + c(0, 0) + 2.0 * c(0, 2) + c(2, 2);
  out(0, 1) = out(1, 0) = input(0, 1) + c(0, 3) - c(0, 1) + c(2, 3) - c(1, 2);
  out(1, 1) = input(1, 1) + c(1, 1) - 2.0 * c(1, 3) + c(3, 3);
  return CovarianceMatrix(std::move(out));
}

FidelityPoint fidelity_traced(const ScaledParams& s) {
  const CoefficientSet q = coefficients(s);
  return FidelityPoint{s.t_prime, 1.0 / (2.0 + q.a + q.b + 2.0 * q.c),
                       ChannelKind::TracedOut};
}

FidelityPoint fidelity_heterodyne(const ScaledParams& s) {
  const CoefficientSet q = coefficients(s);
  const double sub = (q.f - q.d) * (q.f - q.d) / (q.e + 1.0);
  return FidelityPoint{s.t_prime, 1.0 / (2.0 + q.a + q.b + 2.0 * q.c - sub),
                       ChannelKind::HeterodyneConditioned};
}

double information_gain(const ScaledParams& s) {
  const CovarianceMatrix v = reduced_cm(full_cm(s), 0, 1);
  const CovarianceMatrix vh = heterodyne_conditioned_cm(s);
  return von_neumann_entropy(v) - von_neumann_entropy(vh);
}

double effective_thermal_number(const ScaledParams& s) {
  return 1.0 / fidelity_heterodyne(s).fidelity - 1.0;
}

FeedforwardGains feedforward_gains(const ScaledParams& s) {
  const CoefficientSet q = coefficients(s);
  const double rt2 = std::sqrt(2.0);
  return FeedforwardGains{rt2, -rt2, rt2 * (q.f - q.d) / (q.e + 1.0),
                          rt2 * (q.f + q.d) / (q.e + 1.0)};
}

ReadoutCoefficients readout_coefficients(double t_seconds, const Couplings& c) {
  if (!(c.big_theta > 0.0)) throw std::invalid_argument("Theta must be positive");
  const double th = c.big_theta;
  const double co = std::cos(th * t_seconds);
  const double si = std::sin(th * t_seconds);
  ReadoutCoefficients out;
  out.b_dagger = (c.chi + c.theta) * si / th;
  out.a1 = (c.theta * c.theta - c.chi * c.chi * co - c.chi * c.theta +
            c.chi * c.theta * co) /
           (th * th);
  out.a2_dagger = -(c.chi * c.theta + c.chi * c.theta * co - c.chi * c.chi -
                    c.theta * c.theta * co) /
                  (th * th);
  return out;
}

FidelityScanResult optimal_fidelity_scan(double t_lo, double t_hi, double r,
                                         double n_bar, ChannelKind kind,
                                         int coarse_points) {
  if (!(t_lo < t_hi)) throw std::invalid_argument("scan range is empty");
  if (coarse_points < 2) throw std::invalid_argument("need at least 2 scan points");

  auto eval = [&](double t) {
    const ScaledParams s(t, r, n_bar);
    return kind == ChannelKind::TracedOut ? fidelity_traced(s).fidelity
                                          : fidelity_heterodyne(s).fidelity;
  };

  const int n = coarse_points;
  std::vector<double> f(n);
  const double step = (t_hi - t_lo) / (n - 1);
  detail::parallel_for(static_cast<std::size_t>(n),
                       [&](std::size_t i) { f[i] = eval(t_lo + step * i); });

  // Deterministic argmax: smallest t' wins ties (within 1e-15).
  int best = 0;
  for (int i = 1; i < n; ++i) {
    if (f[i] > f[best] + 1e-15) best = i;
  }

  double a = t_lo + step * std::max(0, best - 1);
  double b = t_lo + step * std::min(n - 1, best + 1);
  const double inv_golden = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_golden * (b - a);
  double x2 = a + inv_golden * (b - a);
  double f1 = eval(x1), f2 = eval(x2);
  while (b - a > 1e-12) {
    if (f1 > f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_golden * (b - a);
      f1 = eval(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_golden * (b - a);
      f2 = eval(x2);
    }
  }
  const double tm = (a + b) / 2.0;
  return FidelityScanResult{tm, eval(tm)};
}

}  // namespace optomech
