#include "hyperep/channels.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "hyperep/qmath.hpp"

namespace hyperep {

namespace {

const ComplexMatrix& flip_op(NoiseFlavor flavor) {
  return flavor == NoiseFlavor::BitFlip ? pauli(1) : pauli(3);
}

// operation pair embedded at one photon's (pol, spa) qubits
ComplexMatrix embed_pair(const ComplexMatrix& op_pol, const ComplexMatrix& op_spa,
                         bool photon_b) {
  const ComplexMatrix& id = pauli(0);
  const ComplexMatrix photon = kron(op_pol, op_spa);
  const ComplexMatrix id4 = kron(id, id);
  return photon_b ? kron(id4, photon) : kron(photon, id4);
}

ComplexMatrix apply_one_photon(const ComplexMatrix& rho16, const PauliMixture& m,
                               bool photon_b) {
  const ComplexMatrix& id = pauli(0);
  const ComplexMatrix& flip = flip_op(m.flavor);
  ComplexMatrix out(16, 16);
  for (int spa = 0; spa < 2; ++spa) {
    for (int pol = 0; pol < 2; ++pol) {
      const double w = m.weights[spa][pol];
      if (w == 0.0) continue;
      const ComplexMatrix u = embed_pair(pol ? flip : id, spa ? flip : id, photon_b);
      ComplexMatrix term = conjugate_by(u, rho16);
      term *= Complex(w);
      out += term;
    }
  }
  return out;
}

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0,1]");
  }
}

}  // namespace

PauliMixture schedule_to_mixture(const LcSchedule& s, NoiseFlavor flavor) {
  if (s.period <= 0.0) throw std::invalid_argument("schedule period must be positive");
  if (s.t1 < 0.0 || s.t2 < 0.0 || s.t3 < 0.0) {
    throw std::invalid_argument("schedule activation times must be nonnegative");
  }
  if (s.t1 + s.t2 + s.t3 > s.period) {
    throw std::invalid_argument("schedule activation times exceed the period");
  }
  PauliMixture m;
  m.flavor = flavor;
  m.weights[1][0] = s.t1 / s.period;  // flip_S (x) id_P
  m.weights[1][1] = s.t2 / s.period;  // flip_S (x) flip_P
  m.weights[0][1] = s.t3 / s.period;  // id_S (x) flip_P
  // derived remainder: the total in PauliMixture::total()'s summation order
  // is then exactly 1.0
  m.weights[0][0] = 1.0 - ((m.weights[1][0] + m.weights[1][1]) + m.weights[0][1]);
  return m;
}

PauliMixture independent_mixture(double f_pol, double f_spa, NoiseFlavor flavor) {
  check_probability(f_pol, "f_pol");
  check_probability(f_spa, "f_spa");
  PauliMixture m;
  m.flavor = flavor;
  m.weights[1][1] = f_pol * f_spa;
  m.weights[0][1] = f_pol * (1.0 - f_spa);
  m.weights[1][0] = (1.0 - f_pol) * f_spa;
  m.weights[0][0] = (1.0 - f_pol) * (1.0 - f_spa);
  return m;
}

ComplexMatrix apply_mixture(const ComplexMatrix& rho16, const PauliMixture& mixture,
                            Photon photon) {
  if (rho16.rows() != 16 || rho16.cols() != 16) {
    throw std::invalid_argument("apply_mixture expects a 16x16 state");
  }
  require_physical(rho16, kExperimentalTol, "apply_mixture input");
  if (std::abs(mixture.total() - 1.0) > 1e-12) {
    throw std::invalid_argument("mixture weights must sum to 1");
  }
  switch (photon) {
    case Photon::A:
      return apply_one_photon(rho16, mixture, false);
    case Photon::B:
      return apply_one_photon(rho16, mixture, true);
    case Photon::Both:
      return apply_one_photon(apply_one_photon(rho16, mixture, false), mixture, true);
  }
  throw std::invalid_argument("unknown photon selector");
}

double fiber_transmittance(const FiberModel& fm) {
  if (fm.alpha_db_per_km < 0.0 || fm.length_km < 0.0) {
    throw std::invalid_argument("fiber attenuation and length must be nonnegative");
  }
  return std::pow(10.0, -fm.alpha_db_per_km * fm.length_km / 10.0);
}

double fiber_transmittance_paper_literal(const FiberModel& fm) {
  if (fm.alpha_db_per_km < 0.0 || fm.length_km < 0.0) {
    throw std::invalid_argument("fiber attenuation and length must be nonnegative");
  }
  return std::exp(-fm.alpha_db_per_km * fm.length_km / 10.0);
}

ComplexMatrix hadamard_convert(const ComplexMatrix& rho16) {
  if (rho16.rows() != 16 || rho16.cols() != 16) {
    throw std::invalid_argument("hadamard_convert expects a 16x16 state");
  }
  static const ComplexMatrix h16 = kron(kron(hadamard(), hadamard()),
                                        kron(hadamard(), hadamard()));
  return conjugate_by(h16, rho16);
}

ComplexMatrix mcf_channel(const ComplexMatrix& rho16, const FiberModel& fm) {
  check_probability(fm.intrinsic_bf, "intrinsic_bf");
  check_probability(fm.intrinsic_pf, "intrinsic_pf");
  ComplexMatrix out = apply_mixture(
      rho16, independent_mixture(fm.intrinsic_bf, fm.intrinsic_bf, NoiseFlavor::BitFlip),
      Photon::B);
  return apply_mixture(
      out, independent_mixture(fm.intrinsic_pf, fm.intrinsic_pf, NoiseFlavor::PhaseFlip),
      Photon::B);
}

}  // namespace hyperep
