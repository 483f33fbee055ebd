#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

namespace qfi {

/// Inclusive range of chain sites, 0-based within a window.
struct SiteRange {
  Eigen::Index first = 0;
  Eigen::Index last = 0;
  Eigen::Index size() const { return last - first + 1; }
};

/// Majorana correlation matrix Gamma = I - <a (x) a> of a fermionic Gaussian
/// state on a window of sites.  Site j owns Majorana indices 2j (x-type,
/// Jordan-Wigner string times sigma^x) and 2j+1 (y-type).  Gamma is
/// antisymmetric; states built from real density matrices have purely
/// imaginary entries, so Gamma is then also Hermitian.
class CorrelationMatrix {
 public:
  CorrelationMatrix() = default;
  explicit CorrelationMatrix(Eigen::MatrixXcd gamma);

  Eigen::Index n_sites() const { return data_.rows() / 2; }
  Eigen::Index dim() const { return data_.rows(); }
  const Eigen::MatrixXcd& data() const { return data_; }
  Eigen::MatrixXcd& data() { return data_; }

  /// Largest violation of Gamma^T = -Gamma (should be ~0 by construction).
  double antisymmetry_defect() const;
  /// Singular values, descending; physical states have them in [0, 1].
  Eigen::VectorXd singular_values() const;
  bool is_physical(double tol = 1e-10) const;
  /// Pure Gaussian state: every singular value equals 1.
  bool is_pure(double tol = 1e-8) const;

 private:
  Eigen::MatrixXcd data_;
};

/// Principal submatrix on a contiguous Majorana index range [first, last].
CorrelationMatrix restrict_majorana(const CorrelationMatrix& g, Eigen::Index first,
                                    Eigen::Index last);
/// Restriction to a contiguous range of sites.
CorrelationMatrix restrict_sites(const CorrelationMatrix& g, SiteRange sites);

/// D Gamma D for a diagonal sign matrix D (signs in {-1, +1}).
CorrelationMatrix conjugate_by_signs(const CorrelationMatrix& g,
                                     const std::vector<int>& signs);

/// <sigma^x_l sigma^x_n> = i^{n-l} pf(Gamma restricted to the Majorana
/// indices strictly between the x-strings), 1 for l == n.
double two_point_x(const CorrelationMatrix& g, Eigen::Index l, Eigen::Index n);

/// Binary snapshot: 16-byte header (magic "GFQF", version u32, n_sites u32,
/// reserved u32) followed by the row-major complex doubles, little endian.
void save_correlations(const CorrelationMatrix& g, const std::string& path);
CorrelationMatrix load_correlations(const std::string& path);

}  // namespace qfi
