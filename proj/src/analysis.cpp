#include "hyperep/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hyperep/qmath.hpp"

namespace hyperep {

namespace {

void validate_efficiency(const EfficiencyModel& em) {
  if (em.coincidence_rate <= 0.0 || em.rep_rate <= 0.0 || em.protocol_success <= 0.0 ||
      em.transmittance <= 0.0) {
    throw std::invalid_argument("efficiency model values must be positive");
  }
  if (em.coupling_efficiency <= 0.0 || em.coupling_efficiency > 1.0) {
    throw std::invalid_argument("coupling efficiency must lie in (0,1]");
  }
}

// 3x3 correlation matrix T_ij = <sigma_i (x) sigma_j>, i,j in {x,y,z}
std::array<std::array<double, 3>, 3> correlation_matrix(const ComplexMatrix& rho4) {
  std::array<std::array<double, 3>, 3> t{};
  for (std::size_t i = 1; i <= 3; ++i)
    for (std::size_t j = 1; j <= 3; ++j)
      t[i - 1][j - 1] = (kron(pauli(i), pauli(j)) * rho4).trace().real();
  return t;
}

}  // namespace

double qber(const ComplexMatrix& rho4, MeasBasis basis) {
  if (rho4.rows() != 4 || rho4.cols() != 4) {
    throw std::invalid_argument("qber expects a 4x4 state");
  }
  require_physical(rho4, kExperimentalTol, "qber input");
  ComplexMatrix rho = rho4;
  if (basis == MeasBasis::F) {
    rho = conjugate_by(kron(hadamard(), hadamard()), rho4);
  }
  return rho(1, 1).real() + rho(2, 2).real();
}

double shannon_entropy(double e) {
  if (e < 0.0 || e > 1.0) throw std::invalid_argument("entropy argument must lie in [0,1]");
  double h = 0.0;
  if (e > 0.0) h -= e * std::log2(e);
  if (e < 1.0) h -= (1.0 - e) * std::log2(1.0 - e);
  return h;
}

KeyRateResult key_rate(const ComplexMatrix& rho4) {
  KeyRateResult r;
  r.qber_z = qber(rho4, MeasBasis::Z);
  r.qber_f = qber(rho4, MeasBasis::F);
  r.qber = 0.5 * (r.qber_z + r.qber_f);
  r.raw_rate = 1.0 - 2.0 * shannon_entropy(std::clamp(r.qber, 0.0, 1.0));
  r.effective_rate = std::max(r.raw_rate, 0.0);
  return r;
}

ChshResult chsh(const ComplexMatrix& rho4) {
  if (rho4.rows() != 4 || rho4.cols() != 4) {
    throw std::invalid_argument("chsh expects a 4x4 state");
  }
  require_physical(rho4, kExperimentalTol, "chsh input");
  const auto t = correlation_matrix(rho4);

  // S with the settings that are optimal for Phi+:
  // <A1 B1> = (T_zz + T_zx)/sqrt2 etc.
  const double inv_r2 = 1.0 / std::sqrt(2.0);
  const double a1b1 = (t[2][2] + t[2][0]) * inv_r2;
  const double a1b2 = (t[2][2] - t[2][0]) * inv_r2;
  const double a2b1 = (t[0][2] + t[0][0]) * inv_r2;
  const double a2b2 = (t[0][2] - t[0][0]) * inv_r2;

  ChshResult out;
  out.s_fixed = a1b1 + a1b2 + a2b1 - a2b2;
  out.settings = {{{0, 0, 1}, {1, 0, 0}, {inv_r2, 0, inv_r2}, {-inv_r2, 0, inv_r2}}};

  // Horodecki criterion: 2 sqrt of the sum of the two largest eigenvalues
  // of T^T T
  ComplexMatrix m(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < 3; ++k) s += t[k][i] * t[k][j];
      m(i, j) = s;
    }
  const HermitianSpectrum spec = eig_hermitian(m);
  out.s_max = 2.0 * std::sqrt(std::max(0.0, spec.eigenvalues[0] + spec.eigenvalues[1]));
  return out;
}

double pair_generation_probability(const EfficiencyModel& em) {
  validate_efficiency(em);
  return em.coincidence_rate / (em.coupling_efficiency * em.coupling_efficiency * em.rep_rate);
}

double efficiency_one(const EfficiencyModel& em) {
  return em.protocol_success * pair_generation_probability(em) * em.transmittance;
}

double efficiency_two(const EfficiencyModel& em) {
  const double ps = pair_generation_probability(em);
  return 0.25 * em.protocol_success * ps * ps * em.transmittance * em.transmittance;
}

double efficiency_ratio(const EfficiencyModel& em) {
  return 4.0 / (pair_generation_probability(em) * em.transmittance);
}

}  // namespace hyperep
