#include "qfichain/beyond_sc.hpp"

#include "qfichain/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qfi::beyond_sc {

using cdouble = std::complex<double>;
namespace {
constexpr double kPi = std::numbers::pi;
constexpr cdouble kI{0.0, 1.0};
}  // namespace

TwoParticleSector TwoParticleSector::from_model(const ChainModel& model) {
  TwoParticleSector s;
  s.dispersion = [model](double k) { return qfi::dispersion(model, k); };
  s.velocity = [model](double k) { return qfi::group_velocity(model, k); };
  return s;
}

TwoParticleSector TwoParticleSector::sine_velocity() {
  TwoParticleSector s;
  s.dispersion = [](double k) { return -std::cos(k); };
  s.velocity = [](double k) { return std::sin(k); };
  return s;
}

WindowIntegrals window_integrals(const TwoParticleSector& sector, double t, double l,
                                 double r) {
  if (t <= 0.0) throw std::invalid_argument("window_integrals: requires t > 0");
  WindowIntegrals w;
  w.t = t;
  w.l = l;
  w.r = r;

  // The indicators jump where v(k) t crosses l or r; collect all edges and
  // integrate the smooth pieces separately.
  auto v = sector.velocity;
  std::vector<double> cuts;
  for (double level : {l / t, r / t}) {
    auto shifted = [&](double k) { return v(k) - level; };
    for (double root : quad::bracketed_roots(shifted, -kPi, kPi, 8192)) cuts.push_back(root);
  }
  cuts.push_back(-kPi);
  cuts.push_back(kPi);
  std::sort(cuts.begin(), cuts.end());

  for (int n = -1; n <= 1; ++n) {
    cdouble ell = 0.0, a = 0.0, o = 0.0, o2 = 0.0;
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const double lo = cuts[c], hi = cuts[c + 1];
      if (hi - lo < 1e-15) continue;
      const double vm = v(0.5 * (lo + hi)) * t;
      const bool left_of_l = vm <= l;
      const bool in_window = vm >= l && vm <= r;
      if (!left_of_l && !in_window) continue;
      auto phase = [&](double k) { return std::exp(kI * double(n) * k) / (2.0 * kPi); };
      if (left_of_l)
        ell += quad::integrate_complex(phase, lo, hi, 1e-12);
      if (in_window) {
        a += quad::integrate_complex(phase, lo, hi, 1e-12);
        auto weight = [&](double k) { return (r + l) / t - 2.0 * v(k); };
        o += quad::integrate_complex([&](double k) { return phase(k) * weight(k); }, lo, hi,
                                     1e-12);
        o2 += quad::integrate_complex(
            [&](double k) { return phase(k) * weight(k) * weight(k); }, lo, hi, 1e-12);
      }
    }
    w.ell[n + 1] = ell;
    w.a[n + 1] = a;
    w.o[n + 1] = o;
    w.o2[n + 1] = o2;
  }
  return w;
}

OneParticleMatrices p_o_matrices(const WindowIntegrals& w) {
  const cdouble a0 = w.A(0), a1 = w.A(1), am = w.A(-1);
  const cdouble l0 = w.L(0), l1 = w.L(1), lm = w.L(-1);
  const double disc = std::real(a0 * a0) - std::norm(a1);
  if (disc <= 1e-14)
    throw std::domain_error("p_o_matrices: degenerate basis (A0^2 <= |A1|^2)");
  const double root = std::sqrt(disc);

  OneParticleMatrices m;
  m.p(0, 0) = l0 * (a0 * a0 + std::norm(a1)) / a0 - 2.0 * std::real(a1 * lm);
  m.p(0, 1) = root * (a1 * l0 - a0 * l1) / a0;
  m.p(1, 0) = root * (am * l0 - a0 * lm) / a0;
  m.p(1, 1) = l0 * (a0 * a0 - std::norm(a1)) / a0;

  auto fill_o = [&](Eigen::Matrix2cd& out, const cdouble o0, const cdouble o1,
                    const cdouble om) {
    out(0, 0) = o0 / a0;
    out(0, 1) = (a0 * o1 - a1 * o0) / (a0 * root);
    out(1, 0) = (a0 * om - am * o0) / (a0 * root);
    out(1, 1) = ((a0 * a0 + std::norm(a1)) * o0 - 2.0 * a0 * std::real(a1 * om)) /
                (a0 * (a0 * a0 - std::norm(a1)));
  };
  fill_o(m.o, w.O(0), w.O(1), w.O(-1));
  fill_o(m.o2, w.O2(0), w.O2(1), w.O2(-1));
  return m;
}

namespace {
double chi_block_from_matrices(const Eigen::Matrix2cd& p, const Eigen::Matrix2cd& o,
                               const Eigen::Matrix2cd& o2, double t, double size) {
  const double tr_p = p.trace().real();
  if (std::abs(tr_p) < 1e-14) return 0.0;  // window outside the cone
  const double first =
      (p * o2).trace().real() - std::pow((p * o).trace().real(), 2) / tr_p;

  // Second line of the 2x2 QFI reduction, evaluated in the eigenbasis of P
  // where the (p1 - p2)^2 factors cancel analytically:
  //   -4 p1 p2 [ (O~11 - O~22)^2 / 4 + |O~12|^2 ] / (p1 + p2).
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(p);
  const double p1 = es.eigenvalues()(0), p2 = es.eigenvalues()(1);
  const Eigen::Matrix2cd ot = es.eigenvectors().adjoint() * o * es.eigenvectors();
  const double bracket =
      0.25 * std::pow(std::real(ot(0, 0) - ot(1, 1)), 2) + std::norm(ot(0, 1));
  const double second = -4.0 * p1 * p2 * bracket / (p1 + p2);

  return (t * t / (size * size)) * (first + second);
}

TwoParticleSector reflected(const TwoParticleSector& sector) {
  TwoParticleSector out = sector;
  auto v = sector.velocity;
  out.velocity = [v](double k) { return -v(-k); };
  return out;
}
}  // namespace

double chi_block(const WindowIntegrals& w) {
  const auto m = p_o_matrices(w);
  return chi_block_from_matrices(m.p, m.o, m.o2, w.t, w.r - w.l);
}

double chi_block_semiclassical(const WindowIntegrals& w) {
  const double l0 = w.L(0).real(), a0 = w.A(0).real();
  const double o0 = w.O(0).real(), o20 = w.O2(0).real();
  const double size = w.r - w.l;
  if (a0 < 1e-14) return 0.0;
  return (2.0 * w.t * w.t / (size * size)) * l0 * (o20 - o0 * o0 / a0);
}

double chi_one_particle(const TwoParticleSector& sector, double t, double l, double r) {
  const WindowIntegrals plus = window_integrals(sector, t, l, r);
  const WindowIntegrals minus = window_integrals(reflected(sector), t, -r, -l);
  return chi_block(plus) + chi_block(minus);
}

double chi_one_particle_semiclassical(const TwoParticleSector& sector, double t, double l,
                                      double r) {
  const WindowIntegrals plus = window_integrals(sector, t, l, r);
  const WindowIntegrals minus = window_integrals(reflected(sector), t, -r, -l);
  return chi_block_semiclassical(plus) + chi_block_semiclassical(minus);
}

std::vector<std::pair<double, double>> bethe_momenta(Eigen::Index length, int eta) {
  if (length < 4 || length % 2 != 0)
    throw std::invalid_argument("bethe_momenta: length must be even and >= 4");
  if (eta != 1 && eta != -1) throw std::invalid_argument("eta must be +-1");
  // S = -1: e^{iLk} = e^{iLp} = -eta, momenta in (-pi, pi].
  std::vector<double> momenta;
  for (Eigen::Index m = 0; m < length; ++m) {
    double k = (eta == 1) ? (2.0 * kPi * (double(m) + 0.5) / double(length))
                          : (2.0 * kPi * double(m) / double(length));
    while (k > kPi + 1e-12) k -= 2.0 * kPi;
    momenta.push_back(k);
  }
  std::sort(momenta.begin(), momenta.end());
  std::vector<std::pair<double, double>> pairs;
  for (std::size_t i = 0; i < momenta.size(); ++i)
    for (std::size_t j = i + 1; j < momenta.size(); ++j)
      pairs.emplace_back(momenta[i], momenta[j]);
  return pairs;
}

BetheState bethe_state(Eigen::Index length, double k, double p, int eta) {
  BetheState st;
  st.k = k;
  st.p = p;
  st.eta = eta;
  const Eigen::Index half = length / 2;
  st.coeffs = Eigen::MatrixXcd::Zero(length, length);
  double norm2 = 0.0;
  for (Eigen::Index l = -half + 1; l <= half - 1; ++l)
    for (Eigen::Index n = l + 1; n <= half; ++n) {
      // S = -1 gives the antisymmetrized plane wave
      const cdouble c = std::exp(kI * (k * double(l) + p * double(n))) -
                        std::exp(kI * (p * double(l) + k * double(n)));
      st.coeffs(l + half - 1, n + half - 1) = c;
      norm2 += std::norm(c);
    }
  // the +/- doublet doubles the norm
  st.coeffs /= std::sqrt(2.0 * norm2);
  return st;
}

std::complex<double> BetheState::perturbation_overlap(double alpha) const {
  const Eigen::Index half = coeffs.rows() / 2;
  // c_{-1, 0}: the single flipped spin at the origin
  return kI * std::sin(alpha) * std::conj(coeffs(-1 + half - 1, 0 + half - 1));
}

}  // namespace qfi::beyond_sc
