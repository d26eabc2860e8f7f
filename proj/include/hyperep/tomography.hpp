#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>

#include "hyperep/complex_matrix.hpp"

namespace hyperep {

/// Photon-counting parameters of one tomography acquisition. Rates follow the
/// experimental arrangement: coincidences arrive at pair_rate, each photon is
/// detected with detector_efficiency, and accidental dark coincidences appear
/// at dark_rate^2 * coincidence_window per second, spread uniformly over the
/// four outcomes.
struct CountingModel {
  double pair_rate = 600.0;         // coincidences per second
  double integration_time = 60.0;   // seconds per setting
  double detector_efficiency = 0.8;
  double dark_rate = 0.0;           // per-detector dark counts, Hz
  double coincidence_window = 1e-9; // seconds
  std::uint64_t seed = 0;
  /// With infinite statistics the record holds exact Born probabilities
  /// instead of sampled counts.
  bool infinite_statistics = false;
};

/// Two-qubit tomography data: 9 local basis-pair settings {X,Y,Z}^2, four
/// outcomes (++, +-, -+, --) each. Setting order is row-major in (first
/// qubit basis, second qubit basis) with X=0, Y=1, Z=2.
struct TomographyRecord {
  static constexpr std::size_t kSettings = 9;
  static constexpr std::size_t kOutcomes = 4;

  /// Sampled mode: integer-valued counts. Infinite-statistics mode: exact
  /// outcome probabilities.
  std::array<std::array<double, kOutcomes>, kSettings> counts{};
  bool infinite_statistics = false;
  std::uint64_t seed = 0;

  static const char* setting_label(std::size_t s);
  static const char* outcome_label(std::size_t o);
};

/// Deterministic sampler over an explicit engine; all algorithms are written
/// out here so records depend only on the seed, not on the standard library's
/// distribution implementations.
class CountingRng {
 public:
  explicit CountingRng(std::uint64_t seed) : engine_(seed) {}

  double uniform();  // [0, 1)
  std::uint64_t poisson(double mean);
  std::array<std::uint64_t, 4> multinomial(std::uint64_t n, const std::array<double, 4>& p);

 private:
  std::mt19937_64 engine_;
};

/// <sigma_i (x) sigma_j> for i,j in {I,X,Y,Z}, row-major (index i*4+j).
std::array<double, 16> pauli_expectations(const ComplexMatrix& rho4);

/// Born-rule outcome probabilities for one local basis-pair setting.
std::array<double, 4> setting_probabilities(const ComplexMatrix& rho4, std::size_t setting);

TomographyRecord simulate_counts(const ComplexMatrix& rho4, const CountingModel& cm);

/// rho = (1/4) sum <sigma_i sigma_j> sigma_i (x) sigma_j with expectations
/// estimated from the record's relative frequencies. Hermitian with unit
/// trace by construction; possibly non-positive for finite counts.
ComplexMatrix linear_inversion(const TomographyRecord& record);

/// Nearest density matrix in Frobenius distance: clips the spectrum onto the
/// probability simplex, redistributing the clipped weight uniformly over the
/// surviving eigenvalues.
ComplexMatrix project_physical(const ComplexMatrix& rho);

/// CSV rows "setting,outcome,count".
std::string record_to_csv(const TomographyRecord& record);

}  // namespace hyperep
