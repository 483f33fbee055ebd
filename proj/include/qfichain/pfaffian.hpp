#pragma once

#include <Eigen/Dense>

#include <complex>

namespace qfi {

/// Pfaffian of an even-dimensional complex antisymmetric matrix, computed
/// by Parlett-Reid tridiagonalization with partial pivoting, O(n^3).
/// Throws std::invalid_argument for odd dimension or a matrix that is not
/// antisymmetric within tolerance.
std::complex<double> pfaffian(const Eigen::MatrixXcd& m, double antisym_tol = 1e-10);

/// Same, but destroys the working copy handed in (no antisymmetry check).
std::complex<double> pfaffian_inplace(Eigen::MatrixXcd& m);

/// log pf(m): real part log|pf|, imaginary part the accumulated phase.
/// Returns {-inf, 0} for a singular matrix.  Destroys the working copy.
std::complex<double> log_pfaffian_inplace(Eigen::MatrixXcd& m);

}  // namespace qfi
