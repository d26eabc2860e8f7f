#include "hyperep/purify.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hyperep/qmath.hpp"
#include "hyperep/states.hpp"

namespace hyperep {

namespace {

constexpr double kDiscardEps = 1e-15;

// indices of the four basis states with a_pol = pa, b_pol = pb, ordered by
// the spatial pair index a_spa*2 + b_spa
std::array<std::size_t, 4> pol_block(std::size_t pa, std::size_t pb) {
  return {HyperRegister::index(pa, 0, pb, 0), HyperRegister::index(pa, 0, pb, 1),
          HyperRegister::index(pa, 1, pb, 0), HyperRegister::index(pa, 1, pb, 1)};
}

// unnormalized spatial-pair state of one polarization branch
ComplexMatrix branch_block(const ComplexMatrix& rho, std::size_t pa, std::size_t pb) {
  const auto idx = pol_block(pa, pb);
  ComplexMatrix out(4, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) out(i, j) = rho(idx[i], idx[j]);
  return out;
}

}  // namespace

ComplexMatrix cnot_intra_photon() {
  // |H,a2>(index 1) and |V,a2>(index 3) swap; a1 states pass through
  ComplexMatrix u(4, 4);
  u(0, 0) = 1.0;
  u(3, 1) = 1.0;
  u(2, 2) = 1.0;
  u(1, 3) = 1.0;
  return u;
}

double predict_fidelity(double f1, double f2) {
  if (f1 < 0.0 || f1 > 1.0 || f2 < 0.0 || f2 > 1.0) {
    throw std::invalid_argument("predict_fidelity inputs must lie in [0,1]");
  }
  const double denom = f1 * f2 + (1.0 - f1) * (1.0 - f2);
  if (denom < kDiscardEps) {
    throw std::domain_error("predict_fidelity undefined: post-selection never succeeds");
  }
  return f1 * f2 / denom;
}

double success_probability(double f1, double f2) {
  if (f1 < 0.0 || f1 > 1.0 || f2 < 0.0 || f2 > 1.0) {
    throw std::invalid_argument("success_probability inputs must lie in [0,1]");
  }
  return f1 * f2 + (1.0 - f1) * (1.0 - f2);
}

PurificationOutcome purify(const ComplexMatrix& rho16) {
  if (rho16.rows() != 16 || rho16.cols() != 16) {
    throw std::invalid_argument("purify expects a 16x16 state");
  }
  require_physical(rho16, kExperimentalTol, "purify input");

  // closed-form prediction from the input marginals
  const double f1 = fidelity_pure(pol_marginal(rho16), bell_state(BellKind::PhiPlus, Dof::Polarization));
  const double f2 = fidelity_pure(spatial_marginal(rho16), bell_state(BellKind::PhiPlus, Dof::Spatial));

  static const ComplexMatrix u16 = kron(cnot_intra_photon(), cnot_intra_photon());
  const ComplexMatrix after_gate = conjugate_by(u16, rho16);

  ComplexMatrix kept_hh = branch_block(after_gate, 0, 0);
  ComplexMatrix kept_vv = branch_block(after_gate, 1, 1);
  ComplexMatrix rejected = branch_block(after_gate, 0, 1) + branch_block(after_gate, 1, 0);

  PurificationOutcome out;
  out.p_d1d2 = kept_hh.trace().real();
  out.p_d3d4 = kept_vv.trace().real();
  out.success_probability = out.p_d1d2 + out.p_d3d4;
  out.p_discard = 1.0 - out.success_probability;

  const double pred_denom = f1 * f2 + (1.0 - f1) * (1.0 - f2);
  if (pred_denom >= kDiscardEps) out.predicted_fidelity = f1 * f2 / pred_denom;

  const double p_discard_raw = rejected.trace().real();
  if (p_discard_raw > kDiscardEps) {
    rejected *= Complex(1.0 / p_discard_raw);
    out.discard_state = rejected;
  }

  if (out.success_probability < kDiscardEps) {
    out.always_discard = true;
    out.achieved_fidelity = std::numeric_limits<double>::quiet_NaN();
    return out;
  }

  ComplexMatrix output = kept_hh + kept_vv;
  output *= Complex(1.0 / out.success_probability);
  out.output = output;
  out.achieved_fidelity =
      fidelity_pure(out.output, bell_state(BellKind::PhiPlus, Dof::Spatial));
  return out;
}

PurificationOutcome purify_with_conversion(const ComplexMatrix& rho16, NoiseFlavor flavor) {
  if (flavor == NoiseFlavor::PhaseFlip) return purify(hadamard_convert(rho16));
  return purify(rho16);
}

}  // namespace hyperep
