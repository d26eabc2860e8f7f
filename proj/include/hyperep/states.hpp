#pragma once

#include <cstddef>

#include "hyperep/complex_matrix.hpp"
#include "hyperep/qmath.hpp"

namespace hyperep {

/// The four maximally entangled two-qubit states. The same four vectors serve
/// both degrees of freedom; polarization reads |0>=H, |1>=V and spatial mode
/// reads |0>=a1/b1, |1>=a2/b2.
enum class BellKind { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

enum class Dof { Polarization, Spatial };

/// Canonical two-photon register: photon A {polarization, spatial}, photon B
/// {polarization, spatial}, in that order. Basis index is
/// a_pol*8 + a_spa*4 + b_pol*2 + b_spa. This ordering is fixed for the whole
/// project; every 16-dim operator below is expressed in it.
struct HyperRegister {
  enum Subsystem : std::size_t { APol = 0, ASpa = 1, BPol = 2, BSpa = 3 };

  static constexpr std::size_t kSubsystems = 4;
  static constexpr std::size_t kDim = 16;

  static std::vector<std::size_t> dims() { return {2, 2, 2, 2}; }

  static constexpr std::size_t index(std::size_t a_pol, std::size_t a_spa, std::size_t b_pol,
                                     std::size_t b_spa) {
    return a_pol * 8 + a_spa * 4 + b_pol * 2 + b_spa;
  }
};

StateVector bell_state(BellKind kind, Dof dof);

const char* bell_label(BellKind kind, Dof dof);

struct RankTwoMixture {
  BellKind dominant = BellKind::PhiPlus;
  BellKind error = BellKind::PsiPlus;
  double fidelity = 1.0;
};

/// F |dom><dom| + (1-F) |err><err|, the channel-noise model of the mixed
/// per-DOF states.
ComplexMatrix mixture(const RankTwoMixture& spec);

/// Relabels a 16-dim operator from per-DOF grouping
/// [A-pol, B-pol, A-spa, B-spa] (the plain Kronecker order of pol (x) spa)
/// into the canonical per-photon grouping [A-pol, A-spa, B-pol, B-spa].
ComplexMatrix permute_dof_to_canonical(const ComplexMatrix& rho);
ComplexMatrix permute_canonical_to_dof(const ComplexMatrix& rho);

/// rho_pol (x) rho_spa, re-permuted into the canonical register. Both inputs
/// are 4x4 two-photon states of a single DOF.
ComplexMatrix hyper_state(const ComplexMatrix& pol, const ComplexMatrix& spa,
                          double tol = kExperimentalTol);

/// Marginal of one DOF: 4x4 state of (A, B) in that DOF.
ComplexMatrix pol_marginal(const ComplexMatrix& rho16);
ComplexMatrix spatial_marginal(const ComplexMatrix& rho16);

}  // namespace hyperep
