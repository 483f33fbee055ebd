#include "qfichain/measures.hpp"

#include "qfichain/gaussian_algebra.hpp"
#include "qfichain/parallel.hpp"
#include "qfichain/pfaffian.hpp"
#include "qfichain/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace qfi {

using cdouble = std::complex<double>;

namespace {
constexpr double kResidueTol = 1e-9;
constexpr double kPureTol = 1e-9;

cdouble i_power(Eigen::Index p) {
  switch (((p % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

// Sum over l <= n of i^{n-l} pf(M[2l+1 .. 2n]) with pf over the empty
// section counted as 1/2 (the diagonal convention of the double sum).
// Returns per-l partial sums so callers can parallelize deterministically.
cdouble pfaffian_row_sum(const Eigen::MatrixXcd& m, Eigen::Index l, Eigen::Index sites) {
  cdouble acc = 0.5;  // n = l term
  for (Eigen::Index n = l + 1; n < sites; ++n) {
    Eigen::MatrixXcd section = m.block(2 * l + 1, 2 * l + 1, 2 * (n - l), 2 * (n - l));
    acc += i_power(n - l) * pfaffian_inplace(section);
  }
  return acc;
}

struct SubsystemSpectrum {
  Eigen::MatrixXcd vectors;
  Eigen::VectorXd lambdas;  // clamped to [-1, 1]; pure modes allowed
};

SubsystemSpectrum subsystem_spectrum(const Eigen::MatrixXcd& gamma_a) {
  const double scale = std::max(1.0, gamma_a.cwiseAbs().maxCoeff());
  if ((gamma_a - gamma_a.adjoint()).cwiseAbs().maxCoeff() > 1e-8 * scale)
    throw std::invalid_argument("wydi: subsystem correlation matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gamma_a);
  SubsystemSpectrum s;
  s.vectors = es.eigenvectors();
  s.lambdas = es.eigenvalues();
  for (Eigen::Index j = 0; j < s.lambdas.size(); ++j)
    s.lambdas(j) = std::clamp(s.lambdas(j), -1.0, 1.0);
  return s;
}

Eigen::MatrixXcd matrix_power_of(const SubsystemSpectrum& s, cdouble alpha) {
  Eigen::VectorXcd f(s.lambdas.size());
  for (Eigen::Index j = 0; j < f.size(); ++j) f(j) = mode_power(s.lambdas(j), alpha);
  Eigen::MatrixXcd out = s.vectors * f.asDiagonal() * s.vectors.adjoint();
  return 0.5 * (out - out.transpose().eval());
}

// Per-row partial sums of the alpha-independent first term (sections of
// Gamma_A itself); computed once and shared across a beta grid.
std::vector<cdouble> first_sum_rows(const Eigen::MatrixXcd& gamma_a) {
  const Eigen::Index sites = gamma_a.rows() / 2;
  std::function<cdouble(std::size_t)> row = [&](std::size_t l) {
    return pfaffian_row_sum(gamma_a, static_cast<Eigen::Index>(l), sites);
  };
  return parallel::map_indexed<cdouble>(static_cast<std::size_t>(sites), row);
}

// The prefactor tr[rho^a s_l rho^(1-a) s_l] is the square root of
// det(I + P D Q D) / det(I + P Q) and is real for real and rotated orders,
// but its sign is not fixed: it can cross zero as Im(alpha) grows (the
// determinant, being the square, stays positive through the crossing and
// carries no sign information).  The sign-resolved object is the Pfaffian
// factorization
//   det(I + P Q~) = det(P) det(P^{-1} + Q~) = [pf(P) pf(P^{-1} + Q~)]^2,
// whose square root pf(P) pf(P^{-1} + Q~) is single valued; its ratio to the
// true prefactor is one global sign, eliminated by anchoring at a real order
// where positivity is guaranteed.  Evaluates I_alpha for a batch of orders
// sharing one subsystem (first entry must be real; it provides the anchor).
std::vector<cdouble> wydi_batch(const Eigen::MatrixXcd& gamma_a,
                                const std::vector<cdouble>& alphas,
                                const std::vector<cdouble>& first_rows,
                                const std::vector<bool>& emit) {
  const Eigen::Index sites = gamma_a.rows() / 2;
  const Eigen::Index dim = gamma_a.rows();
  if (alphas.empty() || std::abs(alphas.front().imag()) > 1e-14)
    throw std::logic_error("wydi batch must start at a real order");

  const SubsystemSpectrum spec = subsystem_spectrum(gamma_a);

  // Floored spectrum for the sign factorization: P must be invertible there.
  SubsystemSpectrum floored = spec;
  for (Eigen::Index j = 0; j < dim; ++j) {
    const double lam = floored.lambdas(j);
    if (std::abs(lam) < 1e-10) floored.lambdas(j) = lam >= 0.0 ? 1e-10 : -1e-10;
  }

  struct PointData {
    cdouble alpha;
    Eigen::MatrixXcd p, q;        // powered matrices (clip-high spectrum)
    Eigen::MatrixXcd p_inv_sign;  // P^{-1} on the floored spectrum
    Eigen::MatrixXcd q_sign;      // Q on the floored spectrum
    cdouble log_pf_p_sign;        // log pf(P) on the floored spectrum
    cdouble log_den;
    bool symmetric, real_order;
  };
  std::vector<PointData> points(alphas.size());
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const cdouble alpha = alphas[i];
    PointData& pt = points[i];
    pt.alpha = alpha;
    pt.p = matrix_power_of(spec, alpha);
    const bool rotated = std::abs(alpha.real() - 0.5) < 1e-14;
    pt.q = rotated ? Eigen::MatrixXcd(pt.p.adjoint()) : matrix_power_of(spec, 1.0 - alpha);
    cdouble log_den = 0.0;
    for (Eigen::Index j = 0; j < dim; ++j)
      log_den += 0.5 * std::log(1.0 + mode_power(spec.lambdas(j), alpha) *
                                          mode_power(spec.lambdas(j), 1.0 - alpha));
    pt.log_den = log_den;
    pt.symmetric = std::abs(alpha - (1.0 - alpha)) < 1e-14;
    pt.real_order = std::abs(alpha.imag()) < 1e-14;
    if (!pt.real_order || i == 0) {
      Eigen::VectorXcd f(dim), finv(dim);
      for (Eigen::Index j = 0; j < dim; ++j) {
        f(j) = mode_power(floored.lambdas(j), alpha);
        finv(j) = 1.0 / f(j);
      }
      Eigen::MatrixXcd p_sign =
          floored.vectors * f.asDiagonal() * floored.vectors.adjoint();
      p_sign = 0.5 * (p_sign - p_sign.transpose().eval());
      Eigen::MatrixXcd p_inv =
          floored.vectors * finv.asDiagonal() * floored.vectors.adjoint();
      pt.p_inv_sign = 0.5 * (p_inv - p_inv.transpose().eval());
      Eigen::VectorXcd g(dim);
      for (Eigen::Index j = 0; j < dim; ++j)
        g(j) = mode_power(floored.lambdas(j), 1.0 - alpha);
      Eigen::MatrixXcd q_sign =
          floored.vectors * g.asDiagonal() * floored.vectors.adjoint();
      pt.q_sign = 0.5 * (q_sign - q_sign.transpose().eval());
      pt.log_pf_p_sign = log_pfaffian_inplace(p_sign);
    }
  }

  std::function<std::vector<cdouble>(std::size_t)> row =
      [&](std::size_t lu) -> std::vector<cdouble> {
    const Eigen::Index l = static_cast<Eigen::Index>(lu);
    Eigen::VectorXd d = Eigen::VectorXd::Ones(dim);
    for (Eigen::Index j = 0; j <= 2 * l; ++j) d(j) = -1.0;
    const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(dim, dim);

    // phase of pf(P) pf(P^{-1} + D Q D) at this l for one point
    auto sign_phase = [&](const PointData& pt) {
      Eigen::MatrixXcd m =
          pt.p_inv_sign + d.asDiagonal() * pt.q_sign * d.asDiagonal();
      m = 0.5 * (m - m.transpose().eval());
      const cdouble log_pf = log_pfaffian_inplace(m);
      return std::exp(cdouble(0.0, (pt.log_pf_p_sign + log_pf).imag()));
    };

    std::vector<cdouble> emitted;
    cdouble anchor_phase = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const PointData& pt = points[i];
      if (i == 0) anchor_phase = sign_phase(pt);
      if (!emit[i]) continue;

      const Eigen::MatrixXcd q_tilde = d.asDiagonal() * pt.q * d.asDiagonal();
      const Eigen::MatrixXcd k = pt.p * q_tilde;
      Eigen::PartialPivLU<Eigen::MatrixXcd> lu_a(eye + k);
      const cdouble det = lu_a.determinant();
      if (std::abs(det) < 1e-280)
        throw std::domain_error("wydi: singular Gaussian product (orthogonal states)");

      cdouble pref;
      if (pt.real_order) {
        // real orders: positive by tr[M M^dagger] >= 0
        pref = std::exp(0.5 * std::log(std::abs(det)) - pt.log_den);
      } else {
        const cdouble rel = sign_phase(pt) / anchor_phase;
        // rotated orders keep the prefactor real: snap the phase to +-1
        const double sign = rel.real() >= 0.0 ? 1.0 : -1.0;
        pref = sign * std::exp(0.5 * std::log(std::abs(det)) - pt.log_den);
      }

      Eigen::MatrixXcd cross_a = eye - (eye - q_tilde) * lu_a.solve(eye - pt.p);
      cross_a = 0.5 * (cross_a - cross_a.transpose().eval());
      cdouble second = pref * pfaffian_row_sum(cross_a, l, sites);

      if (!pt.symmetric) {
        // The swapped pairs tr[rho^a s_n rho^(1-a) s_l] = tr[rho^(1-a) s_l rho^a s_n]
        // differ whenever the state breaks time reversal; average the two so
        // the double sum reproduces the WYDI definition exactly.  Their
        // prefactors coincide: the diagonal trace is order-symmetric.
        const Eigen::MatrixXcd p_tilde = d.asDiagonal() * pt.p * d.asDiagonal();
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu_b(eye + pt.q * p_tilde);
        Eigen::MatrixXcd cross_b = eye - (eye - p_tilde) * lu_b.solve(eye - pt.q);
        cross_b = 0.5 * (cross_b - cross_b.transpose().eval());
        second = 0.5 * (second + pref * pfaffian_row_sum(cross_b, l, sites));
      }
      emitted.push_back(first_rows[lu] - second);
    }
    return emitted;
  };

  const std::vector<std::vector<cdouble>> rows =
      parallel::map_indexed<std::vector<cdouble>>(static_cast<std::size_t>(sites), row);
  std::size_t n_emit = 0;
  for (bool e : emit)
    if (e) ++n_emit;
  std::vector<cdouble> totals(n_emit, 0.0);
  for (const auto& r : rows)  // fixed l-order reduction
    for (std::size_t i = 0; i < n_emit; ++i) totals[i] += r[i];
  for (auto& t : totals) t *= 2.0;
  return totals;
}

// I_alpha over the (already restricted) subsystem matrix.
cdouble wydi_restricted(const Eigen::MatrixXcd& gamma_a, cdouble alpha,
                        const std::vector<cdouble>* first_rows = nullptr) {
  if (std::abs(alpha.imag()) > 1e-14 && std::abs(alpha.real() - 0.5) > 1e-14)
    throw std::invalid_argument(
        "wydi: complex orders are supported on the rotated line Re(alpha) = 1/2");
  std::vector<cdouble> first_local;
  if (!first_rows) {
    first_local = first_sum_rows(gamma_a);
    first_rows = &first_local;
  }
  if (std::abs(alpha.imag()) < 1e-14)
    return wydi_batch(gamma_a, {alpha}, *first_rows, {true})[0];
  // anchor the Pfaffian sign at the real order with the same Re(alpha)
  return wydi_batch(gamma_a, {cdouble(alpha.real(), 0.0), alpha}, *first_rows,
                    {false, true})[0];
}

Eigen::MatrixXcd restricted(const CorrelationMatrix& g, SiteRange a) {
  if (a.first < 0 || a.last >= g.n_sites() || a.last < a.first)
    throw std::out_of_range("subsystem range outside window");
  const Eigen::Index len = 2 * a.size();
  return g.data().block(2 * a.first, 2 * a.first, len, len);
}

double variance_restricted(const Eigen::MatrixXcd& gamma_a) {
  const Eigen::Index sites = gamma_a.rows() / 2;
  std::function<cdouble(std::size_t)> row = [&](std::size_t l) {
    return pfaffian_row_sum(gamma_a, static_cast<Eigen::Index>(l), sites);
  };
  const std::vector<cdouble> rows =
      parallel::map_indexed<cdouble>(static_cast<std::size_t>(sites), row);
  cdouble total = 0.0;
  for (const auto& r : rows) total += r;
  total *= 2.0;
  if (std::abs(total.imag()) > kResidueTol * std::max(1.0, std::abs(total.real())))
    throw std::runtime_error("variance_x: imaginary residue exceeds tolerance");
  return total.real();
}

bool pure_restricted(const Eigen::MatrixXcd& gamma_a) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(gamma_a);
  const auto& sv = svd.singularValues();
  return sv.size() == 0 || sv(sv.size() - 1) >= 1.0 - kPureTol;
}
}  // namespace

double variance_x(const CorrelationMatrix& g, SiteRange a) {
  return variance_restricted(restricted(g, a));
}

double wydi(const CorrelationMatrix& g, SiteRange a, cdouble alpha) {
  if (alpha.real() <= 0.0 || alpha.real() >= 1.0)
    throw std::invalid_argument("wydi: Re(alpha) must lie in (0, 1)");
  const Eigen::MatrixXcd gamma_a = restricted(g, a);
  // Pure subsystem: every I_alpha equals the variance; the Pfaffian path
  // would round it through the clipped artanh instead.
  if (pure_restricted(gamma_a)) return variance_restricted(gamma_a);
  const cdouble value = wydi_restricted(gamma_a, alpha);
  if (std::abs(value.imag()) > kResidueTol * std::max(1.0, std::abs(value.real())))
    throw std::runtime_error(
        "wydi: imaginary residue exceeds tolerance (convention bug?)");
  return value.real();
}

std::vector<std::pair<double, double>> rwydi_grid(const CorrelationMatrix& g, SiteRange a,
                                                  const IntegrationConfig& cfg) {
  const Eigen::MatrixXcd gamma_a = restricted(g, a);
  const int n = static_cast<int>(std::floor(cfg.beta_max / cfg.beta_spacing + 0.5)) + 1;
  std::vector<std::pair<double, double>> grid(n);
  if (pure_restricted(gamma_a)) {
    const double var = variance_restricted(gamma_a);
    for (int i = 0; i < n; ++i)
      grid[i] = {cfg.beta_spacing * i, var};  // J_beta = variance, all beta
    return grid;
  }
  // One batch covers the whole grid: the beta = 0 point anchors the Pfaffian
  // sign, and the alpha-independent first sum is shared.
  const std::vector<cdouble> first_rows = first_sum_rows(gamma_a);
  std::vector<cdouble> alphas;
  std::vector<bool> emit;
  for (int i = 0; i < n; ++i) {
    alphas.push_back(cdouble(0.5, cfg.beta_spacing * i));
    emit.push_back(true);
  }
  const std::vector<cdouble> values = wydi_batch(gamma_a, alphas, first_rows, emit);
  for (int i = 0; i < n; ++i) {
    const cdouble v = values[i];
    if (std::abs(v.imag()) > kResidueTol * std::max(1.0, std::abs(v.real())))
      throw std::runtime_error("rWYDI: imaginary residue exceeds tolerance");
    grid[i] = {cfg.beta_spacing * i, v.real()};
  }
  return grid;
}

namespace {
QfiEstimate estimate_from_grid(const std::vector<std::pair<double, double>>& grid,
                               const IntegrationConfig& cfg) {
  QfiEstimate est;
  std::vector<double> betas(grid.size()), js(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    betas[i] = grid[i].first;
    js[i] = grid[i].second;
  }
  quad::CubicSpline spline(betas, js);

  const double pi = std::numbers::pi;
  auto integrand = [&](double b) { return spline(b) / std::cosh(pi * b); };
  const double scale = std::max(1.0, std::abs(js[0]));

  std::vector<double> domain_edges, integrals;
  double inner = 0.0, prev_edge = 0.0;
  for (int j = 1; j <= cfg.fit_domains; ++j) {
    const double edge = cfg.beta_max * double(j) / double(cfg.fit_domains);
    inner += quad::integrate(integrand, prev_edge, edge, 1e-12 * scale);
    prev_edge = edge;
    domain_edges.push_back(edge);
    integrals.push_back(2.0 * inner);  // J is even in beta
  }

  const std::size_t window =
      std::min<std::size_t>(std::max(cfg.fit_window, 3), domain_edges.size());
  const std::vector<double> tail_edges(domain_edges.end() - window, domain_edges.end());
  const std::vector<double> tail_integrals(integrals.end() - window, integrals.end());
  const auto fit = quad::fit_exponential_saturation(tail_edges, tail_integrals);
  if (fit.converged && std::isfinite(fit.c)) {
    est.value = fit.c;
    est.uncertainty = fit.residual_rms;
    est.fit_converged = true;
  } else {
    est.value = integrals.back();
    est.uncertainty =
        2.0 * std::abs(integrals.back() - integrals[integrals.size() - 2]) +
        fit.residual_rms;
    est.fit_converged = false;
  }
  return est;
}
}  // namespace

QfiEstimate qfi_estimate(const CorrelationMatrix& g, SiteRange a,
                         const IntegrationConfig& cfg) {
  const Eigen::MatrixXcd gamma_a = restricted(g, a);
  if (pure_restricted(gamma_a)) {
    QfiEstimate est;
    est.value = variance_restricted(gamma_a);
    est.uncertainty = 0.0;
    est.fit_converged = true;
    return est;
  }
  return estimate_from_grid(rwydi_grid(g, a, cfg), cfg);
}

QfiBounds qfi_bounds(const CorrelationMatrix& g, SiteRange a) {
  const Eigen::MatrixXcd gamma_a = restricted(g, a);
  QfiBounds b;
  if (pure_restricted(gamma_a)) {
    const double var = variance_restricted(gamma_a);
    b.lower = var;
    b.upper_2i = 2.0 * var;
    b.upper_mixed = var;  // 10 I - 9 I_{1/3} with all I_alpha = variance
    b.lower_rho2 = var;   // degenerate pure case
    return b;
  }
  const cdouble half{0.5, 0.0}, third{1.0 / 3.0, 0.0};
  const double i_half = wydi_restricted(gamma_a, half).real();
  const double i_third = wydi_restricted(gamma_a, third).real();
  b.lower = i_half;
  b.upper_2i = 2.0 * i_half;
  b.upper_mixed = 10.0 * i_half - 9.0 * i_third;

  CorrelationMatrix ga(gamma_a);
  const GaussianFactor squared = gaussian_product(ga, ga);
  const double purity = squared.prefactor.real();
  const double i_sq = wydi_restricted(squared.gamma.data(), half).real();
  const double s_inf = renyi_infinity_entropy(ga);
  b.lower_rho2 = 0.25 * std::exp(s_inf) * purity * i_sq;
  return b;
}

double chi_from_qfi(double qfi_over_4, Eigen::Index subsystem_size) {
  const double norm = double(subsystem_size);
  return qfi_over_4 / (norm * norm);
}

MeasureReport measure_subsystem(const CorrelationMatrix& g, SiteRange a,
                                const IntegrationConfig& cfg) {
  MeasureReport r;
  r.subsystem = a;
  r.variance = variance_x(g, a);
  const Eigen::MatrixXcd gamma_a = restricted(g, a);
  const bool pure = pure_restricted(gamma_a);
  const auto grid = rwydi_grid(g, a, cfg);
  for (const auto& [beta, value] : grid)
    r.wydi_grid.emplace_back(cdouble(0.5, beta), value);
  const QfiBounds bounds = qfi_bounds(g, a);
  r.i_half = bounds.lower;
  r.i_third = pure ? r.variance
                   : wydi_restricted(gamma_a, cdouble(1.0 / 3.0, 0.0)).real();
  QfiEstimate est;
  if (pure) {
    est.value = r.variance;
    est.uncertainty = 0.0;
  } else {
    est = estimate_from_grid(grid, cfg);
  }
  r.qfi_over4 = est.value;
  r.qfi_err = est.uncertainty;
  r.fit_converged = est.fit_converged;
  r.chi = chi_from_qfi(est.value, a.size());
  r.lower = bounds.lower;
  r.upper = std::min(bounds.upper_2i, bounds.upper_mixed);
  return r;
}

}  // namespace qfi
