#pragma once

#include <optional>

#include "hyperep/channels.hpp"
#include "hyperep/complex_matrix.hpp"

namespace hyperep {

/// Result of one purification run. The output is the surviving pair state of
/// the control DOF; the experiment converts it from spatial modes back to
/// polarization at the detection stage, which is an identity relabeling here
/// (recorded in `relabeled_spatial_to_pol`).
struct PurificationOutcome {
  ComplexMatrix output;  // 4x4, meaningful only when !always_discard
  double success_probability = 0.0;
  double p_d1d2 = 0.0;     // both photons H after the gate
  double p_d3d4 = 0.0;     // both photons V
  double p_discard = 0.0;  // opposite polarizations
  /// Closed-form prediction from the input marginal fidelities; absent when
  /// the closed form is undefined (denominator below 1e-15).
  std::optional<double> predicted_fidelity;
  double achieved_fidelity = 0.0;  // NaN when always_discard
  bool always_discard = false;
  bool relabeled_spatial_to_pol = true;
  /// Conditional pair state of the rejected branch, for diagnostics.
  std::optional<ComplexMatrix> discard_state;
};

/// The deterministic single-photon CNOT: spatial mode controls polarization.
/// Returned in the canonical per-photon ordering (pol (x) spa), where it is
/// the permutation |p,s> -> |p xor s, s>.
ComplexMatrix cnot_intra_photon();

/// F' = F1 F2 / (F1 F2 + (1-F1)(1-F2)). Throws when the denominator is
/// below 1e-15 (inputs at exactly complementary extremes).
double predict_fidelity(double f1, double f2);

/// P = F1 F2 + (1-F1)(1-F2), the post-selection success probability.
double success_probability(double f1, double f2);

/// Runs the protocol on a canonical 16-dim state: intra-photon CNOTs on both
/// photons, post-selection on equal polarizations (D1D2 and D3D4 branches),
/// then the polarization is traced out of the kept branches and the surviving
/// pair state is renormalized.
PurificationOutcome purify(const ComplexMatrix& rho16);

/// PF noise is first rotated into BF noise by Hadamards on every qubit; BF
/// input purifies directly.
PurificationOutcome purify_with_conversion(const ComplexMatrix& rho16, NoiseFlavor flavor);

}  // namespace hyperep
