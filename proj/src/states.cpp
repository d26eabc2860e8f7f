#include "hyperep/states.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace hyperep {

namespace {

// canonical index for each per-DOF-grouped index (bits a_pol b_pol a_spa b_spa)
std::array<std::size_t, 16> dof_to_canonical_map() {
  std::array<std::size_t, 16> map{};
  for (std::size_t i = 0; i < 16; ++i) {
    const std::size_t a_pol = (i >> 3) & 1;
    const std::size_t b_pol = (i >> 2) & 1;
    const std::size_t a_spa = (i >> 1) & 1;
    const std::size_t b_spa = i & 1;
    map[i] = HyperRegister::index(a_pol, a_spa, b_pol, b_spa);
  }
  return map;
}

ComplexMatrix permute_indices(const ComplexMatrix& rho, const std::array<std::size_t, 16>& map) {
  if (rho.rows() != 16 || rho.cols() != 16) {
    throw std::invalid_argument("permutation expects a 16x16 matrix");
  }
  ComplexMatrix out(16, 16);
  for (std::size_t i = 0; i < 16; ++i)
    for (std::size_t j = 0; j < 16; ++j) out(map[i], map[j]) = rho(i, j);
  return out;
}

}  // namespace

StateVector bell_state(BellKind kind, Dof) {
  const double r = 1.0 / std::sqrt(2.0);
  switch (kind) {
    case BellKind::PhiPlus:
      return {r, 0, 0, r};
    case BellKind::PhiMinus:
      return {r, 0, 0, -r};
    case BellKind::PsiPlus:
      return {0, r, r, 0};
    case BellKind::PsiMinus:
      return {0, r, -r, 0};
  }
  throw std::invalid_argument("unknown Bell kind");
}

const char* bell_label(BellKind kind, Dof dof) {
  const bool pol = dof == Dof::Polarization;
  switch (kind) {
    case BellKind::PhiPlus:
      return pol ? "Phi+" : "phi+";
    case BellKind::PhiMinus:
      return pol ? "Phi-" : "phi-";
    case BellKind::PsiPlus:
      return pol ? "Psi+" : "psi+";
    case BellKind::PsiMinus:
      return pol ? "Psi-" : "psi-";
  }
  return "?";
}

ComplexMatrix mixture(const RankTwoMixture& spec) {
  if (spec.fidelity < 0.0 || spec.fidelity > 1.0) {
    throw std::invalid_argument("mixture fidelity must lie in [0,1]");
  }
  if (spec.dominant == spec.error) {
    throw std::invalid_argument("mixture dominant and error states must differ");
  }
  ComplexMatrix rho = outer(bell_state(spec.dominant, Dof::Polarization));
  rho *= Complex(spec.fidelity);
  ComplexMatrix err = outer(bell_state(spec.error, Dof::Polarization));
  err *= Complex(1.0 - spec.fidelity);
  return rho + err;
}

ComplexMatrix permute_dof_to_canonical(const ComplexMatrix& rho) {
  static const auto map = dof_to_canonical_map();
  return permute_indices(rho, map);
}

ComplexMatrix permute_canonical_to_dof(const ComplexMatrix& rho) {
  static const auto inverse = [] {
    const auto fwd = dof_to_canonical_map();
    std::array<std::size_t, 16> inv{};
    for (std::size_t i = 0; i < 16; ++i) inv[fwd[i]] = i;
    return inv;
  }();
  return permute_indices(rho, inverse);
}

ComplexMatrix hyper_state(const ComplexMatrix& pol, const ComplexMatrix& spa, double tol) {
  if (pol.rows() != 4 || spa.rows() != 4) {
    throw std::invalid_argument("hyper_state expects 4x4 per-DOF states");
  }
  require_physical(pol, tol, "hyper_state polarization input");
  require_physical(spa, tol, "hyper_state spatial input");
  return permute_dof_to_canonical(kron(pol, spa));
}

ComplexMatrix pol_marginal(const ComplexMatrix& rho16) {
  return partial_trace(rho16, HyperRegister::dims(),
                       {HyperRegister::APol, HyperRegister::BPol});
}

ComplexMatrix spatial_marginal(const ComplexMatrix& rho16) {
  return partial_trace(rho16, HyperRegister::dims(),
                       {HyperRegister::ASpa, HyperRegister::BSpa});
}

}  // namespace hyperep
