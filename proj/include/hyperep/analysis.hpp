#pragma once

#include <array>

#include "hyperep/complex_matrix.hpp"

namespace hyperep {

/// Z is the computational (H/V) basis; F is the Fourier (+/-45 degree) basis.
enum class MeasBasis { Z, F };

struct KeyRateResult {
  double qber_z = 0.0;
  double qber_f = 0.0;
  double qber = 0.0;            // mean of the two bases
  double raw_rate = 0.0;        // 1 - 2 H(qber), may be negative
  double effective_rate = 0.0;  // max(raw_rate, 0)
};

struct ChshResult {
  double s_fixed = 0.0;  // canonical settings A1=Z, A2=X, B1=(Z+X)/sqrt2, B2=(Z-X)/sqrt2
  double s_max = 0.0;    // Horodecki maximum 2 sqrt(m1 + m2)
  /// Bloch directions of the fixed settings, order A1, A2, B1, B2.
  std::array<std::array<double, 3>, 4> settings{};
};

/// Source and protocol figures entering the efficiency comparison against
/// two-copy SPDC purification.
struct EfficiencyModel {
  double coincidence_rate = 2400.0;   // pairs per second before the fiber
  double coupling_efficiency = 0.18;
  double rep_rate = 76e6;             // pump repetition rate, Hz
  double protocol_success = 1.0;      // P_P
  double transmittance = 1.0;         // eta
};

/// Probability of anticorrelated local outcomes in the chosen basis.
double qber(const ComplexMatrix& rho4, MeasBasis basis);

/// Binary entropy in bits, 0 at both endpoints.
double shannon_entropy(double e);

KeyRateResult key_rate(const ComplexMatrix& rho4);

ChshResult chsh(const ComplexMatrix& rho4);

/// P_s = C / (epsilon^2 * Rep), the SPDC pair-generation probability per pulse.
double pair_generation_probability(const EfficiencyModel& em);

/// Single-pair hyperentanglement route: P_P * P_s * eta.
double efficiency_one(const EfficiencyModel& em);

/// Two-copy route with a 1/4 linear-optics CNOT: P_P * P_s^2 * eta^2 / 4.
double efficiency_two(const EfficiencyModel& em);

/// efficiency_one / efficiency_two = 4 / (P_s * eta).
double efficiency_ratio(const EfficiencyModel& em);

}  // namespace hyperep
