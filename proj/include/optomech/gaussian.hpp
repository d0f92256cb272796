#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <vector>

namespace optomech {

/**
 * Covariance matrix of an N-mode Gaussian state.
 *
 * Entries are symmetrized second moments of the quadratures in the
 * ordering (X1, P1, X2, P2, ...), dimensionless, with vacuum variance 1/2
 * on the diagonal. The matrix is stored exactly symmetric; construction
 * rejects inputs whose asymmetry exceeds a small multiple of the entry
 * scale and symmetrizes the rest.
 */
class CovarianceMatrix {
 public:
  explicit CovarianceMatrix(Eigen::MatrixXd entries);

  static CovarianceMatrix vacuum(int n_modes);
  /// Product of single-mode thermal states, one mean occupation per mode.
  static CovarianceMatrix thermal(const std::vector<double>& n_bar);

  int n_modes() const { return n_modes_; }
  int dim() const { return 2 * n_modes_; }
  const Eigen::MatrixXd& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  /// Largest absolute entry; used to scale tolerances.
  double max_abs() const;

 private:
  int n_modes_;
  Eigen::MatrixXd m_;
};

/// Block-diagonal symplectic form J = diag([[0,1],[-1,0]], ...), 2N x 2N.
Eigen::MatrixXd symplectic_form(int n_modes);

/// Flip the sign of mode k's momentum row and column (phase-space
/// transposition of that mode). Involutive.
CovarianceMatrix partial_transpose(const CovarianceMatrix& v, int mode_index);

/**
 * Minimum eigenvalue of the Hermitian test matrix  L_k V L_k + (i/2) J,
 * where L_k is the partial transposition of mode k. A negative value
 * certifies entanglement of the split (mode k | rest).
 *
 * The eigenproblem is solved on a real symmetric embedding with extended
 * precision, so values remain meaningful for the very large matrix norms
 * this state family produces. Throws std::runtime_error if the Jacobi
 * iteration fails to converge.
 */
double npt_min_eigenvalue(const CovarianceMatrix& v, int mode_index);

/// Symplectic eigenvalues n_+ >= n_- of a two-mode covariance matrix.
/// Both equal 1/2 exactly for a pure state.
struct EntropyPair {
  double n_plus;
  double n_minus;
};

/**
 * Closed-form symplectic eigenvalues of a 4x4 covariance matrix from its
 * 2x2 blocks A, B, C:
 *
 *   n_pm = sqrt[(Delta -+ sqrt(Delta^2 - 4 det V)) / 2],
 *   Delta = det A + det B + 2 det C.
 *
 * Throws std::invalid_argument for non-4x4 input and std::runtime_error
 * when Delta^2 - 4 det V is negative beyond tolerance (not a CM).
 */
EntropyPair symplectic_eigenvalues_2mode(const CovarianceMatrix& v);

/// Von Neumann entropy of a two-mode Gaussian state in bits,
///   S = sum_i (n_i + 1/2) log2(n_i + 1/2) - (n_i - 1/2) log2(n_i - 1/2);
/// terms with n_i = 1/2 contribute zero.
double von_neumann_entropy(const CovarianceMatrix& v);
double von_neumann_entropy(const EntropyPair& n);

/// True iff v is symmetric and v + (i/2)J is positive semidefinite within
/// tol scaled by the largest entry (uncertainty principle).
bool is_valid_cm(const CovarianceMatrix& v, double tol = 1e-9);

namespace detail {

/// Minimum eigenvalue of the Hermitian matrix A + iB (A symmetric, B
/// antisymmetric, both real n x n) via its real symmetric embedding,
/// computed with 128-bit floats.
double min_eigenvalue_hermitian(const Eigen::MatrixXd& a,
                                const Eigen::MatrixXd& b);

/// Jacobi eigenvalue iteration on a symmetric matrix held in a flat
/// row-major buffer. Returns the smallest eigenvalue.
double jacobi_min_eigenvalue(__float128* a, int n);

}  // namespace detail

}  // namespace optomech
