#include "qfichain/pfaffian.hpp"

#include <limits>
#include <numbers>
#include <stdexcept>

namespace qfi {

using cdouble = std::complex<double>;

std::complex<double> pfaffian_inplace(Eigen::MatrixXcd& m) {
  const Eigen::Index n = m.rows();
  if (n == 0) return 1.0;
  if (n % 2 != 0) throw std::invalid_argument("pfaffian: dimension must be even");

  cdouble result = 1.0;
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    // Pivot: bring the largest entry of column k below the diagonal to row k+1.
    Eigen::Index kp = k + 1;
    double best = std::abs(m(kp, k));
    for (Eigen::Index i = k + 2; i < n; ++i) {
      if (std::abs(m(i, k)) > best) {
        best = std::abs(m(i, k));
        kp = i;
      }
    }
    if (kp != k + 1) {
      m.row(k + 1).swap(m.row(kp));
      m.col(k + 1).swap(m.col(kp));
      result = -result;
    }
    const cdouble pivot = m(k, k + 1);
    if (pivot == 0.0) return 0.0;
    result *= pivot;
    if (k + 2 >= n) break;
    // Eliminate the trailing entries of rows/columns k and k+1.
    Eigen::VectorXcd tau = m.col(k).segment(k + 2, n - k - 2) / pivot;
    auto block = m.block(k + 2, k + 2, n - k - 2, n - k - 2);
    Eigen::VectorXcd w = m.col(k + 1).segment(k + 2, n - k - 2);
    block.noalias() += w * tau.transpose();
    block.noalias() -= tau * w.transpose();
  }
  return result;
}

std::complex<double> log_pfaffian_inplace(Eigen::MatrixXcd& m) {
  const Eigen::Index n = m.rows();
  if (n == 0) return 0.0;
  if (n % 2 != 0) throw std::invalid_argument("pfaffian: dimension must be even");

  double log_mag = 0.0, phase = 0.0;
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    Eigen::Index kp = k + 1;
    double best = std::abs(m(kp, k));
    for (Eigen::Index i = k + 2; i < n; ++i) {
      if (std::abs(m(i, k)) > best) {
        best = std::abs(m(i, k));
        kp = i;
      }
    }
    if (kp != k + 1) {
      m.row(k + 1).swap(m.row(kp));
      m.col(k + 1).swap(m.col(kp));
      phase += std::numbers::pi;
    }
    const cdouble pivot = m(k, k + 1);
    if (pivot == 0.0) return {-std::numeric_limits<double>::infinity(), 0.0};
    log_mag += std::log(std::abs(pivot));
    phase += std::arg(pivot);
    if (k + 2 >= n) break;
    Eigen::VectorXcd tau = m.col(k).segment(k + 2, n - k - 2) / pivot;
    auto block = m.block(k + 2, k + 2, n - k - 2, n - k - 2);
    Eigen::VectorXcd w = m.col(k + 1).segment(k + 2, n - k - 2);
    block.noalias() += w * tau.transpose();
    block.noalias() -= tau * w.transpose();
  }
  return {log_mag, phase};
}

std::complex<double> pfaffian(const Eigen::MatrixXcd& m, double antisym_tol) {
  if ((m + m.transpose()).cwiseAbs().maxCoeff() >
      antisym_tol * std::max(1.0, m.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("pfaffian: matrix is not antisymmetric");
  Eigen::MatrixXcd work = m;
  return pfaffian_inplace(work);
}

}  // namespace qfi
