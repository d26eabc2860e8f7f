#include "hyperep/fixtures.hpp"

#include <stdexcept>
#include <string>

#include "hyperep/qmath.hpp"

namespace hyperep {

namespace {
Complex c(double re, double im) { return {re, im}; }
}  // namespace

const ComplexMatrix& reconstructed_pol_20bf() {
  static const ComplexMatrix rho(4, 4, {
      c(0.397, 0.000),  c(-0.001, -0.003), c(0.004, -0.005),  c(0.377, -0.003),
      c(-0.001, 0.003), c(0.111, 0.000),   c(0.090, 0.001),   c(-0.006, 0.004),
      c(0.004, 0.005),  c(0.090, -0.001),  c(0.102, 0.000),   c(-0.003, 0.001),
      c(0.377, 0.003),  c(-0.006, -0.004), c(-0.003, -0.001), c(0.390, 0.000),
  });
  return rho;
}

const ComplexMatrix& reconstructed_spa_20bf() {
  static const ComplexMatrix rho(4, 4, {
      c(0.400, 0.000),  c(0.002, 0.008),   c(0.005, 0.001),   c(0.379, -0.002),
      c(0.002, -0.008), c(0.109, 0.000),   c(0.092, 0.003),   c(-0.006, 0.001),
      c(0.005, -0.001), c(0.092, -0.003),  c(0.107, 0.000),   c(-0.000, -0.002),
      c(0.377, 0.002),  c(-0.006, -0.001), c(-0.000, 0.002),  c(0.384, 0.000),
  });
  return rho;
}

IngestedMatrix ingest_experimental(const ComplexMatrix& raw, double tol) {
  if (!raw.is_square()) {
    throw std::invalid_argument("ingest_experimental requires a square matrix");
  }
  IngestedMatrix out;
  out.hermiticity_defect = max_abs_diff(raw, raw.adjoint());
  if (out.hermiticity_defect > tol) {
    throw std::invalid_argument("ingested matrix is non-Hermitian beyond tolerance (defect " +
                                std::to_string(out.hermiticity_defect) + ")");
  }
  out.symmetrized = out.hermiticity_defect > 0.0;

  ComplexMatrix sym(raw.rows(), raw.cols());
  for (std::size_t i = 0; i < raw.rows(); ++i)
    for (std::size_t j = 0; j < raw.cols(); ++j)
      sym(i, j) = 0.5 * (raw(i, j) + std::conj(raw(j, i)));
  require_physical(sym, tol, "ingest_experimental");
  out.matrix = sym;
  return out;
}

}  // namespace hyperep
