#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "hyperep/qmath.hpp"
#include "hyperep/states.hpp"
#include "hyperep/tomography.hpp"
#include "test_helpers.hpp"

using namespace hyperep;

namespace {

ComplexMatrix phi_plus() { return outer(bell_state(BellKind::PhiPlus, Dof::Polarization)); }

constexpr std::size_t kZZ = 8;  // setting index of the (Z, Z) basis pair

}  // namespace

TEST_CASE("pauli_expectations of reference states") {
  SUBCASE("Phi+ correlations") {
    const auto t = pauli_expectations(phi_plus());
    CHECK(t[0] == doctest::Approx(1.0).epsilon(1e-12));   // II
    CHECK(t[5] == doctest::Approx(1.0).epsilon(1e-12));   // XX
    CHECK(t[10] == doctest::Approx(-1.0).epsilon(1e-12)); // YY
    CHECK(t[15] == doctest::Approx(1.0).epsilon(1e-12));  // ZZ
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        if (i != j) CHECK(std::abs(t[i * 4 + j]) < 1e-12);
  }
  SUBCASE("maximally mixed state") {
    ComplexMatrix mixed = ComplexMatrix::identity(4);
    mixed *= Complex(0.25);
    const auto t = pauli_expectations(mixed);
    CHECK(t[0] == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t k = 1; k < 16; ++k) CHECK(std::abs(t[k]) < 1e-12);
  }
  SUBCASE("rank-2 mixture ZZ correlation") {
    const auto t = pauli_expectations(mixture({BellKind::PhiPlus, BellKind::PsiPlus, 0.771}));
    CHECK(t[15] == doctest::Approx(2 * 0.771 - 1).epsilon(1e-12));
  }
}

TEST_CASE("infinite-statistics records hold exact Born probabilities") {
  CountingModel cm;
  cm.infinite_statistics = true;
  const TomographyRecord record = simulate_counts(phi_plus(), cm);
  CHECK(record.infinite_statistics);
  for (std::size_t s = 0; s < TomographyRecord::kSettings; ++s) {
    const auto probs = setting_probabilities(phi_plus(), s);
    for (std::size_t o = 0; o < 4; ++o) CHECK(record.counts[s][o] == probs[o]);
  }
  // ZZ on Phi+: only correlated outcomes
  CHECK(record.counts[kZZ][0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(record.counts[kZZ][3] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(record.counts[kZZ][1] == 0.0);
  CHECK(record.counts[kZZ][2] == 0.0);
}

TEST_CASE("sampled counts of a pure state never hit forbidden outcomes") {
  CountingModel cm;
  cm.seed = 7;
  const TomographyRecord record = simulate_counts(phi_plus(), cm);
  CHECK(record.counts[kZZ][1] == 0.0);
  CHECK(record.counts[kZZ][2] == 0.0);
  CHECK(record.counts[kZZ][0] > 0.0);
  // counts are integers
  for (std::size_t s = 0; s < TomographyRecord::kSettings; ++s)
    for (std::size_t o = 0; o < 4; ++o)
      CHECK(record.counts[s][o] == std::floor(record.counts[s][o]));
}

TEST_CASE("records are reproducible for a fixed seed") {
  CountingModel cm;
  cm.seed = 12345;
  cm.dark_rate = 300.0;
  const ComplexMatrix rho = mixture({BellKind::PhiPlus, BellKind::PsiPlus, 0.771});
  const TomographyRecord a = simulate_counts(rho, cm);
  const TomographyRecord b = simulate_counts(rho, cm);
  for (std::size_t s = 0; s < TomographyRecord::kSettings; ++s)
    for (std::size_t o = 0; o < 4; ++o) CHECK(a.counts[s][o] == b.counts[s][o]);

  cm.seed = 12346;
  const TomographyRecord c = simulate_counts(rho, cm);
  bool any_different = false;
  for (std::size_t s = 0; s < TomographyRecord::kSettings; ++s)
    for (std::size_t o = 0; o < 4; ++o)
      if (a.counts[s][o] != c.counts[s][o]) any_different = true;
  CHECK(any_different);
}

TEST_CASE("expected totals match the counting model") {
  CountingModel cm;
  cm.seed = 99;
  cm.pair_rate = 600.0;
  cm.integration_time = 60.0;
  cm.detector_efficiency = 0.8;
  const double mean = 600.0 * 60.0 * 0.64;
  const TomographyRecord record = simulate_counts(phi_plus(), cm);
  for (std::size_t s = 0; s < TomographyRecord::kSettings; ++s) {
    double total = 0.0;
    for (double v : record.counts[s]) total += v;
    CHECK(std::abs(total - mean) < 6.0 * std::sqrt(mean));
  }
}

TEST_CASE("linear inversion restores the state from exact statistics") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix rho = hyperep::testing::random_density(4, rng);
    CountingModel cm;
    cm.infinite_statistics = true;
    const ComplexMatrix rebuilt = linear_inversion(simulate_counts(rho, cm));
    CHECK(max_abs_diff(rebuilt, rho) < 1e-12);
  }
}

TEST_CASE("linear inversion is scale invariant") {
  CountingModel cm;
  cm.seed = 4;
  const ComplexMatrix rho = mixture({BellKind::PhiPlus, BellKind::PsiPlus, 0.85});
  TomographyRecord record = simulate_counts(rho, cm);
  const ComplexMatrix once = linear_inversion(record);
  for (auto& setting : record.counts)
    for (double& v : setting) v *= 2.0;
  CHECK(max_abs_diff(linear_inversion(record), once) < 1e-14);
}

TEST_CASE("linear inversion rejects empty settings") {
  TomographyRecord record;  // all zero
  CHECK_THROWS_AS(linear_inversion(record), std::invalid_argument);
}

TEST_CASE("finite counts can leave the physical set; projection repairs them") {
  CountingModel cm;
  cm.seed = 3;
  bool saw_negative = false;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    cm.seed = seed;
    const ComplexMatrix raw = linear_inversion(simulate_counts(phi_plus(), cm));
    const HermitianSpectrum spec = eig_hermitian(raw);
    if (spec.eigenvalues.back() < -1e-12) saw_negative = true;
    const ComplexMatrix repaired = project_physical(raw);
    CHECK(validate_state(repaired, 1e-10).valid());
  }
  // a pure target sits on the boundary of the physical set, so sampling
  // noise pushes the raw inversion outside essentially always
  CHECK(saw_negative);
}

TEST_CASE("project_physical fixed cases") {
  SUBCASE("physical input passes through") {
    const ComplexMatrix rho = mixture({BellKind::PhiPlus, BellKind::PsiPlus, 0.73});
    CHECK(max_abs_diff(project_physical(rho), rho) < 1e-12);
  }
  SUBCASE("clipping case") {
    ComplexMatrix m(2, 2);
    m(0, 0) = 1.1;
    m(1, 1) = -0.1;
    ComplexMatrix expect(2, 2);
    expect(0, 0) = 1.0;
    const ComplexMatrix projected = project_physical(m);
    CHECK(max_abs_diff(projected, expect) < 1e-12);
  }
  SUBCASE("input contract") {
    ComplexMatrix not_hermitian(2, 2, {1, Complex(0, 0.5), Complex(0, 0.5), 0});
    CHECK_THROWS_AS(project_physical(not_hermitian), std::invalid_argument);
    ComplexMatrix wrong_trace = ComplexMatrix::identity(2);
    CHECK_THROWS_AS(project_physical(wrong_trace), std::invalid_argument);
  }
}

TEST_CASE("reconstruction quality at the experimental count level") {
  const ComplexMatrix truth = mixture({BellKind::PhiPlus, BellKind::PsiPlus, 0.771});
  CountingModel cm;  // 600/s, 60 s, 80% efficiency
  int good = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    cm.seed = seed;
    const ComplexMatrix physical = project_physical(linear_inversion(simulate_counts(truth, cm)));
    if (fidelity(physical, truth) > 0.99) ++good;
  }
  CHECK(good >= 19);
}

TEST_CASE("pauli expectation estimates are unbiased") {
  // low counts make any estimator bias visible against the shrinking
  // standard error of the seed average
  const ComplexMatrix truth = mixture({BellKind::PhiPlus, BellKind::PsiPlus, 0.8});
  const auto exact = pauli_expectations(truth);

  CountingModel cm;
  cm.pair_rate = 50.0;
  cm.integration_time = 1.0;
  cm.detector_efficiency = 1.0;

  constexpr int kTrials = 1000;
  std::array<double, 16> sum{};
  std::array<double, 16> sum_sq{};
  for (int trial = 0; trial < kTrials; ++trial) {
    cm.seed = static_cast<std::uint64_t>(trial);
    // components straight from the unprojected inversion; the projection
    // step is biased by design, the estimates feeding it are not
    const ComplexMatrix est = linear_inversion(simulate_counts(truth, cm));
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        const double v = (kron(pauli(i), pauli(j)) * est).trace().real();
        sum[i * 4 + j] += v;
        sum_sq[i * 4 + j] += v * v;
      }
    }
  }
  for (std::size_t k = 0; k < 16; ++k) {
    const double mean = sum[k] / kTrials;
    const double var = std::max(sum_sq[k] / kTrials - mean * mean, 0.0);
    const double se = std::sqrt(var / kTrials);
    CHECK(std::abs(mean - exact[k]) <= 3.0 * se + 1e-12);
  }
}

TEST_CASE("record CSV export") {
  CountingModel cm;
  cm.seed = 1;
  const TomographyRecord record = simulate_counts(phi_plus(), cm);
  const std::string csv = record_to_csv(record);
  CHECK(csv.rfind("setting,outcome,count\n", 0) == 0);
  CHECK(csv.find("ZZ,--,") != std::string::npos);
  // header plus 36 rows
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 37);
}
