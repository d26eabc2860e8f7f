#include "hyperep/tomography.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperep/qmath.hpp"

namespace hyperep {

namespace {

// settings enumerate (first, second) over {X, Y, Z}
std::size_t first_basis(std::size_t setting) { return setting / 3 + 1; }   // pauli index
std::size_t second_basis(std::size_t setting) { return setting % 3 + 1; }

// projector onto the +/- eigenvector of sigma_k
ComplexMatrix pauli_projector(std::size_t k, int sign) {
  ComplexMatrix p = pauli(0);
  p *= Complex(0.5);
  ComplexMatrix s = pauli(k);
  s *= Complex(0.5 * sign);
  return p + s;
}

void validate_model(const CountingModel& cm) {
  if (cm.pair_rate < 0.0 || cm.integration_time < 0.0 || cm.dark_rate < 0.0 ||
      cm.coincidence_window < 0.0) {
    throw std::invalid_argument("counting model rates and times must be nonnegative");
  }
  if (cm.detector_efficiency < 0.0 || cm.detector_efficiency > 1.0) {
    throw std::invalid_argument("detector efficiency must lie in [0,1]");
  }
}

}  // namespace

const char* TomographyRecord::setting_label(std::size_t s) {
  static const char* labels[kSettings] = {"XX", "XY", "XZ", "YX", "YY",
                                          "YZ", "ZX", "ZY", "ZZ"};
  return labels[s];
}

const char* TomographyRecord::outcome_label(std::size_t o) {
  static const char* labels[kOutcomes] = {"++", "+-", "-+", "--"};
  return labels[o];
}

double CountingRng::uniform() {
  // 53-bit mantissa from the raw engine output; avoids the
  // implementation-defined std::uniform_real_distribution
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t CountingRng::poisson(double mean) {
  if (mean < 0.0) throw std::invalid_argument("poisson mean must be nonnegative");
  if (mean == 0.0) return 0;
  // count exponential arrivals until the budget is spent; O(mean) draws but
  // free of underflow for the count levels used here (~2e4)
  std::uint64_t n = 0;
  double acc = 0.0;
  for (;;) {
    double u = uniform();
    if (u <= 0.0) u = 0x1.0p-53;
    acc += -std::log(u);
    if (acc > mean) return n;
    ++n;
  }
}

std::array<std::uint64_t, 4> CountingRng::multinomial(std::uint64_t n,
                                                      const std::array<double, 4>& p) {
  double total = 0.0;
  for (double v : p) {
    if (v < 0.0) throw std::invalid_argument("multinomial probabilities must be nonnegative");
    total += v;
  }
  std::array<std::uint64_t, 4> counts{};
  if (total <= 0.0) {
    if (n > 0) throw std::invalid_argument("multinomial: zero distribution with nonzero count");
    return counts;
  }
  for (std::uint64_t e = 0; e < n; ++e) {
    const double u = uniform() * total;
    double cum = 0.0;
    std::size_t pick = 3;
    for (std::size_t o = 0; o < 4; ++o) {
      cum += p[o];
      if (u < cum) {
        pick = o;
        break;
      }
    }
    ++counts[pick];
  }
  return counts;
}

std::array<double, 16> pauli_expectations(const ComplexMatrix& rho4) {
  if (rho4.rows() != 4 || rho4.cols() != 4) {
    throw std::invalid_argument("pauli_expectations expects a 4x4 state");
  }
  require_physical(rho4, kExperimentalTol, "pauli_expectations input");
  std::array<double, 16> out{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      out[i * 4 + j] = (kron(pauli(i), pauli(j)) * rho4).trace().real();
  return out;
}

std::array<double, 4> setting_probabilities(const ComplexMatrix& rho4, std::size_t setting) {
  if (setting >= TomographyRecord::kSettings) {
    throw std::invalid_argument("setting index out of range");
  }
  const std::size_t a = first_basis(setting);
  const std::size_t b = second_basis(setting);
  std::array<double, 4> probs{};
  const int signs[2] = {+1, -1};
  for (std::size_t o = 0; o < 4; ++o) {
    const ComplexMatrix proj = kron(pauli_projector(a, signs[o / 2]),
                                    pauli_projector(b, signs[o % 2]));
    probs[o] = std::max(0.0, (proj * rho4).trace().real());
  }
  return probs;
}

TomographyRecord simulate_counts(const ComplexMatrix& rho4, const CountingModel& cm) {
  validate_model(cm);
  require_physical(rho4, kExperimentalTol, "simulate_counts input");

  TomographyRecord record;
  record.infinite_statistics = cm.infinite_statistics;
  record.seed = cm.seed;

  if (cm.infinite_statistics) {
    for (std::size_t s = 0; s < TomographyRecord::kSettings; ++s) {
      record.counts[s] = setting_probabilities(rho4, s);
    }
    return record;
  }

  CountingRng rng(cm.seed);
  const double eff2 = cm.detector_efficiency * cm.detector_efficiency;
  const double signal_mean = cm.pair_rate * cm.integration_time * eff2;
  const double dark_mean =
      cm.dark_rate * cm.dark_rate * cm.coincidence_window * cm.integration_time;

  for (std::size_t s = 0; s < TomographyRecord::kSettings; ++s) {
    const std::array<double, 4> probs = setting_probabilities(rho4, s);
    const std::uint64_t n_signal = rng.poisson(signal_mean);
    const std::uint64_t n_dark = rng.poisson(dark_mean);
    const auto signal = rng.multinomial(n_signal, probs);
    const auto dark = rng.multinomial(n_dark, {0.25, 0.25, 0.25, 0.25});
    for (std::size_t o = 0; o < 4; ++o) {
      record.counts[s][o] = static_cast<double>(signal[o] + dark[o]);
    }
  }
  return record;
}

ComplexMatrix linear_inversion(const TomographyRecord& record) {
  // per-setting correlators and single-qubit marginals from frequencies
  std::array<double, 16> c{};
  c[0] = 1.0;  // <II>
  std::array<std::array<double, 4>, TomographyRecord::kSettings> freq{};
  for (std::size_t s = 0; s < TomographyRecord::kSettings; ++s) {
    double total = 0.0;
    for (double v : record.counts[s]) total += v;
    if (total <= 0.0) {
      throw std::invalid_argument(std::string("linear_inversion: no counts in setting ") +
                                  TomographyRecord::setting_label(s));
    }
    for (std::size_t o = 0; o < 4; ++o) freq[s][o] = record.counts[s][o] / total;
  }
  for (std::size_t s = 0; s < TomographyRecord::kSettings; ++s) {
    const std::size_t a = first_basis(s);
    const std::size_t b = second_basis(s);
    const auto& f = freq[s];
    c[a * 4 + b] = f[0] - f[1] - f[2] + f[3];
    // marginals accumulate over the three settings sharing a basis
    c[a * 4 + 0] += (f[0] + f[1] - f[2] - f[3]) / 3.0;
    c[0 * 4 + b] += (f[0] - f[1] + f[2] - f[3]) / 3.0;
  }

  ComplexMatrix rho(4, 4);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      ComplexMatrix term = kron(pauli(i), pauli(j));
      term *= Complex(0.25 * c[i * 4 + j]);
      rho += term;
    }
  }
  return rho;
}

ComplexMatrix project_physical(const ComplexMatrix& rho) {
  if (!rho.is_square()) throw std::invalid_argument("project_physical requires a square matrix");
  if (max_abs_diff(rho, rho.adjoint()) > 1e-9) {
    throw std::invalid_argument("project_physical requires a Hermitian matrix");
  }
  if (std::abs(rho.trace() - Complex(1.0)) > 1e-6) {
    throw std::invalid_argument("project_physical requires unit trace");
  }

  const std::size_t n = rho.rows();
  HermitianSpectrum spec = eig_hermitian(rho);

  // simplex projection of the spectrum: zero the most negative eigenvalues
  // and spread the deficit over the rest
  std::vector<double> lam = spec.eigenvalues;  // descending
  double carried = 0.0;
  std::size_t live = n;
  while (live > 0 && lam[live - 1] + carried / static_cast<double>(live) < 0.0) {
    carried += lam[live - 1];
    lam[live - 1] = 0.0;
    --live;
  }
  for (std::size_t k = 0; k < live; ++k) lam[k] += carried / static_cast<double>(live);

  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    if (lam[k] == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out(i, j) += lam[k] * spec.eigenvectors(i, k) * std::conj(spec.eigenvectors(j, k));
  }
  return out;
}

std::string record_to_csv(const TomographyRecord& record) {
  std::ostringstream os;
  os << "setting,outcome,count\n";
  for (std::size_t s = 0; s < TomographyRecord::kSettings; ++s)
    for (std::size_t o = 0; o < TomographyRecord::kOutcomes; ++o)
      os << TomographyRecord::setting_label(s) << ',' << TomographyRecord::outcome_label(o)
         << ',' << record.counts[s][o] << '\n';
  return os.str();
}

}  // namespace hyperep
