#include "qfichain/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace qfi::oracle {

using cdouble = std::complex<double>;
namespace {
constexpr cdouble kI{0.0, 1.0};

Eigen::Matrix2cd pauli(char axis) {
  Eigen::Matrix2cd m;
  switch (axis) {
    case 'x': m << 0, 1, 1, 0; break;
    case 'y': m << 0, -kI, kI, 0; break;
    case 'z': m << 1, 0, 0, -1; break;
    case 'i': m << 1, 0, 0, 1; break;
    default: throw std::invalid_argument("unknown Pauli axis");
  }
  return m;
}

// Product of single-site factors, site 0 on the lowest bit.
Eigen::MatrixXcd site_product(Eigen::Index L, const std::vector<char>& axes) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Ones(1, 1);
  for (Eigen::Index j = 0; j < L; ++j) {
    const Eigen::Matrix2cd f = pauli(axes[j]);
    Eigen::MatrixXcd next(out.rows() * 2, out.cols() * 2);
    next.block(0, 0, out.rows(), out.cols()) = f(0, 0) * out;
    next.block(0, out.cols(), out.rows(), out.cols()) = f(0, 1) * out;
    next.block(out.rows(), 0, out.rows(), out.cols()) = f(1, 0) * out;
    next.block(out.rows(), out.cols(), out.rows(), out.cols()) = f(1, 1) * out;
    out.swap(next);
  }
  return out;
}

void check_size(Eigen::Index L) {
  if (L < 1 || L > 14) throw std::invalid_argument("oracle supports 1 <= L <= 14");
}
}  // namespace

double DenseState::hermiticity_defect() const {
  return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

double DenseState::trace_defect() const { return std::abs(rho.trace() - 1.0); }

Eigen::MatrixXcd pauli_at(Eigen::Index L, Eigen::Index j, char axis) {
  check_size(L);
  if (j < 0 || j >= L) throw std::out_of_range("pauli_at: site out of range");
  std::vector<char> axes(L, 'i');
  axes[j] = axis;
  return site_product(L, axes);
}

Eigen::MatrixXcd majorana_at(Eigen::Index L, Eigen::Index m) {
  check_size(L);
  if (m < 0 || m >= 2 * L) throw std::out_of_range("majorana_at: index out of range");
  const Eigen::Index site = m / 2;
  std::vector<char> axes(L, 'i');
  for (Eigen::Index j = 0; j < site; ++j) axes[j] = 'z';
  axes[site] = (m % 2 == 0) ? 'x' : 'y';
  return site_product(L, axes);
}

Eigen::MatrixXcd order_parameter_x(Eigen::Index L, Eigen::Index first, Eigen::Index last) {
  check_size(L);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(Eigen::Index(1) << L, Eigen::Index(1) << L);
  for (Eigen::Index j = first; j <= last; ++j) out += pauli_at(L, j, 'x');
  return out;
}

Eigen::MatrixXcd build_hamiltonian(Eigen::Index L, double h, double gamma,
                                   Boundary boundary) {
  check_size(L);
  const Eigen::Index dim = Eigen::Index(1) << L;
  Eigen::MatrixXcd ham = Eigen::MatrixXcd::Zero(dim, dim);
  auto bond = [&](Eigen::Index a, Eigen::Index b) {
    ham -= 0.5 * (1.0 + gamma) * (pauli_at(L, a, 'x') * pauli_at(L, b, 'x'));
    ham -= 0.5 * (1.0 - gamma) * (pauli_at(L, a, 'y') * pauli_at(L, b, 'y'));
  };
  for (Eigen::Index j = 0; j + 1 < L; ++j) bond(j, j + 1);
  if (boundary == Boundary::periodic && L > 2) bond(L - 1, 0);
  for (Eigen::Index j = 0; j < L; ++j) ham -= h * pauli_at(L, j, 'z');
  return ham;
}

DenseState thermal_state(const Eigen::MatrixXcd& h, double beta, double gap_tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  const Eigen::Index dim = h.rows();
  Eigen::VectorXd w(dim);
  if (std::isinf(beta)) {
    const double e0 = es.eigenvalues()(0);
    for (Eigen::Index i = 0; i < dim; ++i)
      w(i) = (es.eigenvalues()(i) - e0 < gap_tol) ? 1.0 : 0.0;
  } else {
    const double e0 = es.eigenvalues()(0);
    for (Eigen::Index i = 0; i < dim; ++i)
      w(i) = std::exp(-beta * (es.eigenvalues()(i) - e0));
  }
  w /= w.sum();
  DenseState out;
  out.n_sites = static_cast<Eigen::Index>(std::lround(std::log2(double(dim))));
  out.rho = es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
  return out;
}

DenseState pure_state(const Eigen::VectorXcd& psi) {
  DenseState out;
  out.n_sites = static_cast<Eigen::Index>(std::lround(std::log2(double(psi.size()))));
  const double norm = psi.norm();
  out.rho = (psi / norm) * (psi / norm).adjoint();
  return out;
}

StateSpectrum reduced_spectrum_of_pure(const Eigen::VectorXcd& psi,
                                       Eigen::Index first_sites) {
  const Eigen::Index total =
      static_cast<Eigen::Index>(std::lround(std::log2(double(psi.size()))));
  if (first_sites < 1 || first_sites >= total)
    throw std::invalid_argument("reduced_spectrum_of_pure: bad subsystem size");
  const Eigen::Index dim_a = Eigen::Index(1) << first_sites;
  const Eigen::Index dim_e = Eigen::Index(1) << (total - first_sites);
  // site 0 on the lowest bit: index n = a + dim_a * e
  Eigen::MatrixXcd amplitudes(dim_a, dim_e);
  for (Eigen::Index e = 0; e < dim_e; ++e)
    for (Eigen::Index a = 0; a < dim_a; ++a) amplitudes(a, e) = psi(a + dim_a * e);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(amplitudes, Eigen::ComputeThinU);
  StateSpectrum out;
  out.weights = svd.singularValues().array().square();
  out.weights /= out.weights.sum();
  out.vectors = svd.matrixU();
  return out;
}

namespace {
double qfi_from_spectrum(const Eigen::VectorXd& raw, const Eigen::MatrixXcd& o) {
  const Eigen::VectorXd p = raw.cwiseMax(0.0);
  const Eigen::Index dim = p.size();
  double total = 0.0;
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = i + 1; j < dim; ++j) {
      const double s = p(i) + p(j);
      if (s < 1e-300) continue;
      const double d = p(i) - p(j);
      total += (d * d / s) * std::norm(o(i, j));
    }
  return total;
}

double wydi_from_spectrum(const Eigen::VectorXd& raw, const Eigen::MatrixXcd& o,
                          cdouble alpha) {
  const Eigen::VectorXd p = raw.cwiseMax(0.0);
  const Eigen::Index dim = p.size();
  auto cpow = [](double base, cdouble e) -> cdouble {
    if (base <= 0.0) return 0.0;
    return std::exp(e * std::log(base));
  };
  cdouble cross = 0.0;
  double diag = 0.0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    diag += p(i) * (o.row(i).squaredNorm());
    for (Eigen::Index j = 0; j < dim; ++j)
      cross += cpow(p(i), alpha) * cpow(p(j), 1.0 - alpha) * std::norm(o(i, j));
  }
  return diag - cross.real();
}
}  // namespace

double qfi_exact(const DenseState& rho, const Eigen::MatrixXcd& obs) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.rho);
  const Eigen::MatrixXcd o = es.eigenvectors().adjoint() * obs * es.eigenvectors();
  return qfi_from_spectrum(es.eigenvalues(), o);
}

double qfi_exact(const StateSpectrum& spectrum, const Eigen::MatrixXcd& obs) {
  const Eigen::MatrixXcd o = spectrum.vectors.adjoint() * obs * spectrum.vectors;
  return qfi_from_spectrum(spectrum.weights, o);
}

double wydi_exact(const DenseState& rho, const Eigen::MatrixXcd& obs, cdouble alpha) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.rho);
  const Eigen::MatrixXcd o = es.eigenvectors().adjoint() * obs * es.eigenvectors();
  return wydi_from_spectrum(es.eigenvalues(), o, alpha);
}

double wydi_exact(const StateSpectrum& spectrum, const Eigen::MatrixXcd& obs,
                  cdouble alpha) {
  const Eigen::MatrixXcd o = spectrum.vectors.adjoint() * obs * spectrum.vectors;
  return wydi_from_spectrum(spectrum.weights, o, alpha);
}

double variance_exact(const DenseState& rho, const Eigen::MatrixXcd& obs) {
  const cdouble mean = (rho.rho * obs).trace();
  const cdouble second = (rho.rho * obs * obs).trace();
  return second.real() - mean.real() * mean.real();
}

DenseState reduce(const DenseState& rho, const std::vector<Eigen::Index>& sites) {
  if (sites.empty()) throw std::invalid_argument("reduce: empty site subset");
  const Eigen::Index L = rho.n_sites;
  const Eigen::Index nA = static_cast<Eigen::Index>(sites.size());
  const Eigen::Index dimA = Eigen::Index(1) << nA;
  std::vector<Eigen::Index> env;
  {
    std::vector<bool> in(L, false);
    for (auto s : sites) {
      if (s < 0 || s >= L) throw std::out_of_range("reduce: site out of range");
      in[s] = true;
    }
    for (Eigen::Index j = 0; j < L; ++j)
      if (!in[j]) env.push_back(j);
  }
  const Eigen::Index dimE = Eigen::Index(1) << env.size();
  auto embed = [&](Eigen::Index a, Eigen::Index e) {
    Eigen::Index n = 0;
    for (Eigen::Index b = 0; b < nA; ++b)
      if (a & (Eigen::Index(1) << b)) n |= Eigen::Index(1) << sites[b];
    for (std::size_t b = 0; b < env.size(); ++b)
      if (e & (Eigen::Index(1) << b)) n |= Eigen::Index(1) << env[b];
    return n;
  };
  DenseState out;
  out.n_sites = nA;
  out.rho = Eigen::MatrixXcd::Zero(dimA, dimA);
  for (Eigen::Index r = 0; r < dimA; ++r)
    for (Eigen::Index c = 0; c < dimA; ++c) {
      cdouble acc = 0.0;
      for (Eigen::Index e = 0; e < dimE; ++e) acc += rho.rho(embed(r, e), embed(c, e));
      out.rho(r, c) = acc;
    }
  return out;
}

DenseState evolve_exact(const DenseState& rho, const Eigen::MatrixXcd& h, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  Eigen::VectorXcd phase(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < phase.size(); ++i)
    phase(i) = std::exp(-kI * es.eigenvalues()(i) * t);
  const Eigen::MatrixXcd u =
      es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
  return apply_unitary(rho, u);
}

DenseState apply_unitary(const DenseState& rho, const Eigen::MatrixXcd& u) {
  DenseState out;
  out.n_sites = rho.n_sites;
  out.rho = u * rho.rho * u.adjoint();
  return out;
}

CorrelationMatrix correlations_of(const DenseState& rho) {
  const Eigen::Index L = rho.n_sites;
  std::vector<Eigen::MatrixXcd> maj;
  maj.reserve(2 * L);
  for (Eigen::Index m = 0; m < 2 * L; ++m) maj.push_back(majorana_at(L, m));
  Eigen::MatrixXcd gamma(2 * L, 2 * L);
  for (Eigen::Index a = 0; a < 2 * L; ++a) {
    gamma(a, a) = 0.0;
    for (Eigen::Index b = a + 1; b < 2 * L; ++b) {
      const cdouble v = -(rho.rho * maj[a] * maj[b]).trace();
      gamma(a, b) = v;
      gamma(b, a) = -v;
    }
  }
  return CorrelationMatrix(std::move(gamma));
}

DenseState gaussian_to_dense(const CorrelationMatrix& g) {
  const Eigen::Index L = g.n_sites();
  check_size(L);
  // Gamma = -i M with M real antisymmetric; real Schur pairs the modes.
  Eigen::MatrixXd m = (kI * g.data()).real();
  if (((kI * g.data()).imag()).cwiseAbs().maxCoeff() > 1e-9)
    throw std::invalid_argument("gaussian_to_dense: state is not parity-real");
  Eigen::RealSchur<Eigen::MatrixXd> schur(m);
  const Eigen::MatrixXd t = schur.matrixT();
  const Eigen::MatrixXd u = schur.matrixU();

  const Eigen::Index dim = Eigen::Index(1) << L;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Identity(dim, dim);
  std::vector<Eigen::MatrixXcd> maj;
  maj.reserve(2 * L);
  for (Eigen::Index k = 0; k < 2 * L; ++k) maj.push_back(majorana_at(L, k));
  // The Schur form of an antisymmetric matrix is block diagonal with 2x2
  // rotation generators; exact zero modes may appear as 1x1 blocks and only
  // contribute a factor 1/2.
  Eigen::Index p = 0;
  Eigen::Index unpaired = 0;
  while (p < 2 * L) {
    if (p + 1 < 2 * L && std::abs(t(p, p + 1)) > 1e-14) {
      const double lambda = t(p, p + 1);
      // Mode Majoranas b = U^T a.
      Eigen::MatrixXcd b1 = Eigen::MatrixXcd::Zero(dim, dim);
      Eigen::MatrixXcd b2 = Eigen::MatrixXcd::Zero(dim, dim);
      for (Eigen::Index k = 0; k < 2 * L; ++k) {
        b1 += u(k, p) * maj[k];
        b2 += u(k, p + 1) * maj[k];
      }
      // <b1 b2> = i lambda  =>  rho factor (1 + lambda (-i b1 b2))/2.
      rho = rho * 0.5 * (Eigen::MatrixXcd::Identity(dim, dim) - kI * lambda * b1 * b2);
      p += 2;
    } else {
      ++unpaired;
      p += 1;
    }
  }
  for (Eigen::Index z = 0; z + 1 < unpaired; z += 2) rho *= 0.5;
  if (unpaired % 2 != 0)
    throw std::logic_error("gaussian_to_dense: odd number of zero Majorana modes");
  DenseState out;
  out.n_sites = L;
  out.rho = 0.5 * (rho + rho.adjoint());
  return out;
}

}  // namespace qfi::oracle
