#include "qfichain/correlation_matrix.hpp"

#include "qfichain/pfaffian.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace qfi {

CorrelationMatrix::CorrelationMatrix(Eigen::MatrixXcd gamma) {
  if (gamma.rows() != gamma.cols() || gamma.rows() % 2 != 0)
    throw std::invalid_argument("correlation matrix must be even-dimensional square");
  const double defect = (gamma + gamma.transpose()).cwiseAbs().maxCoeff();
  if (defect > 1e-12 * std::max(1.0, gamma.cwiseAbs().maxCoeff()) + 1e-12) {
    // Antisymmetrize; construction inputs are allowed roundoff-level defects.
    if (defect > 1e-8 * std::max(1.0, gamma.cwiseAbs().maxCoeff()))
      throw std::invalid_argument("correlation matrix is not antisymmetric");
  }
  data_ = 0.5 * (gamma - gamma.transpose().eval());
}

double CorrelationMatrix::antisymmetry_defect() const {
  if (data_.size() == 0) return 0.0;
  return (data_ + data_.transpose()).cwiseAbs().maxCoeff();
}

Eigen::VectorXd CorrelationMatrix::singular_values() const {
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(data_).singularValues();
}

bool CorrelationMatrix::is_physical(double tol) const {
  if (data_.size() == 0) return true;
  Eigen::VectorXd sv = singular_values();
  return sv.size() == 0 || sv(0) <= 1.0 + tol;
}

bool CorrelationMatrix::is_pure(double tol) const {
  if (data_.size() == 0) return true;
  Eigen::VectorXd sv = singular_values();
  return sv(sv.size() - 1) >= 1.0 - tol && sv(0) <= 1.0 + tol;
}

CorrelationMatrix restrict_majorana(const CorrelationMatrix& g, Eigen::Index first,
                                    Eigen::Index last) {
  if (first < 0 || last >= g.dim() || last < first)
    throw std::out_of_range("restrict_majorana: index range out of bounds");
  const Eigen::Index len = last - first + 1;
  if (len % 2 != 0)
    throw std::invalid_argument("restrict_majorana: range must have even cardinality");
  return CorrelationMatrix(g.data().block(first, first, len, len));
}

CorrelationMatrix restrict_sites(const CorrelationMatrix& g, SiteRange sites) {
  if (sites.first < 0 || sites.last >= g.n_sites() || sites.last < sites.first)
    throw std::out_of_range("restrict_sites: site range out of bounds");
  return restrict_majorana(g, 2 * sites.first, 2 * sites.last + 1);
}

CorrelationMatrix conjugate_by_signs(const CorrelationMatrix& g,
                                     const std::vector<int>& signs) {
  if (static_cast<Eigen::Index>(signs.size()) != g.dim())
    throw std::invalid_argument("conjugate_by_signs: sign vector has wrong length");
  Eigen::VectorXd d(g.dim());
  for (Eigen::Index j = 0; j < g.dim(); ++j) {
    if (signs[j] != 1 && signs[j] != -1)
      throw std::invalid_argument("conjugate_by_signs: signs must be +1 or -1");
    d(j) = signs[j];
  }
  Eigen::MatrixXcd out = d.asDiagonal() * g.data() * d.asDiagonal();
  return CorrelationMatrix(std::move(out));
}

namespace {
std::complex<double> i_power(Eigen::Index p) {
  switch (((p % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}
}  // namespace

double two_point_x(const CorrelationMatrix& g, Eigen::Index l, Eigen::Index n) {
  if (l > n) std::swap(l, n);
  if (l < 0 || n >= g.n_sites()) throw std::out_of_range("two_point_x: site out of window");
  if (l == n) return 1.0;
  Eigen::MatrixXcd section =
      g.data().block(2 * l + 1, 2 * l + 1, 2 * (n - l), 2 * (n - l));
  std::complex<double> value = i_power(n - l) * pfaffian_inplace(section);
  return value.real();
}

void save_correlations(const CorrelationMatrix& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  const char magic[4] = {'G', 'F', 'Q', 'F'};
  const std::uint32_t version = 1;
  const std::uint32_t n_sites = static_cast<std::uint32_t>(g.n_sites());
  const std::uint32_t reserved = 0;
  out.write(magic, 4);
  out.write(reinterpret_cast<const char*>(&version), 4);
  out.write(reinterpret_cast<const char*>(&n_sites), 4);
  out.write(reinterpret_cast<const char*>(&reserved), 4);
  // Row-major on disk; Eigen default storage is column-major.
  Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>
      rm = g.data();
  out.write(reinterpret_cast<const char*>(rm.data()),
            static_cast<std::streamsize>(sizeof(std::complex<double>) * rm.size()));
  if (!out) throw std::runtime_error("short write to " + path);
}

CorrelationMatrix load_correlations(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[4];
  std::uint32_t version = 0, n_sites = 0, reserved = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), 4);
  in.read(reinterpret_cast<char*>(&n_sites), 4);
  in.read(reinterpret_cast<char*>(&reserved), 4);
  if (!in || std::memcmp(magic, "GFQF", 4) != 0)
    throw std::runtime_error(path + ": not a GFQF correlation file");
  if (version != 1) throw std::runtime_error(path + ": unsupported GFQF version");
  const Eigen::Index dim = 2 * static_cast<Eigen::Index>(n_sites);
  Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>
      rm(dim, dim);
  in.read(reinterpret_cast<char*>(rm.data()),
          static_cast<std::streamsize>(sizeof(std::complex<double>) * rm.size()));
  if (!in) throw std::runtime_error(path + ": truncated GFQF payload");
  return CorrelationMatrix(Eigen::MatrixXcd(rm));
}

}  // namespace qfi
