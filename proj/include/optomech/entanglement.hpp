#pragma once

#include <optional>

#include "optomech/dynamics.hpp"
#include "optomech/gaussian.hpp"

namespace optomech {

/// Mode indices of the three-mode state.
enum class Mode : int { Stokes = 0, Mirror = 1, AntiStokes = 2 };

/// Tripartite separability classes. Classes 4 and 5 (bound entangled vs
/// fully separable) are reported merged; the NPT tests cannot tell them
/// apart and the distinction never matters for this state family.
enum class EntClass : int {
  FullyInseparable = 1,
  OneModeBiseparable = 2,
  TwoModeBiseparable = 3,
  SeparableOrBound = 4,
};

const char* to_string(EntClass c);

struct ClassificationResult {
  EntClass label;
  double eta_stokes;      // eta_1
  double eta_mirror;      // eta_b
  double eta_anti_stokes; // eta_2
  double tolerance;
};

/// Minimum test-matrix eigenvalue for the split (mode | rest), evaluated
/// through the extended-precision coefficient path. Equivalent to
/// npt_min_eigenvalue(full_cm(s), mode) but immune to the double rounding
/// of the matrix entries, which near t' = m*pi exceeds |eta| itself.
double npt_eta(const ScaledParams& s, Mode mode);

/// Default classification tolerance: absolute floor 1e-13, scaled up once
/// the matrix norm makes even 128-bit eigenvalues coarser than that.
double classification_tolerance(const ScaledParams& s);

/// Count the negative etas: 3 -> class 1, 2 -> class 2, 1 -> class 3,
/// 0 -> class 4or5. tol <= 0 selects classification_tolerance(s).
ClassificationResult classify(const ScaledParams& s, double tol = -1.0);

/// log10|eta_b| when eta_b < 0; empty when there is no negativity to
/// report. The CLI clamps the diverging separable limit, not the library.
std::optional<double> log_negativity_b(const ScaledParams& s);

/// Bipartite marker for the pair left after tracing mode j (1 = Stokes,
/// 2 = anti-Stokes, 3 = mirror); negative value certifies entanglement of
/// the remaining pair.
///
/// noise_bound is the evaluation's absolute rounding bound. The marker is
/// a difference of terms up to the fourth power of the variances, and for
/// a pure initial state (n_bar = 0) the traced-Stokes marker is an exact
/// zero of such terms, so values inside +-noise_bound carry no sign
/// information.
struct SimonMarker {
  int traced_mode;     // j
  double value;        // Upsilon^(j)
  double noise_bound;
};

SimonMarker simon_marker(const ScaledParams& s, int j);

/// 4x4 CM of the pair (keep_a, keep_b) obtained by deleting the third
/// mode's rows and columns.
CovarianceMatrix reduced_cm(const CovarianceMatrix& v, int keep_a, int keep_b);

/// CM of the (Stokes, mirror) pair conditioned on a heterodyne detection
/// of the anti-Stokes mode; independent of the measurement outcome.
CovarianceMatrix heterodyne_conditioned_cm(const ScaledParams& s);

}  // namespace optomech
