#pragma once

#include <cstddef>
#include <vector>

#include "hyperep/complex_matrix.hpp"

namespace hyperep {

/// Physicality tolerance for states synthesized in code.
inline constexpr double kSyntheticTol = 1e-9;
/// Physicality tolerance for matrices reconstructed from measured data.
/// Published reconstructions are rounded to three decimals, so hermiticity
/// and positivity can be violated at the 1e-2 level.
inline constexpr double kExperimentalTol = 0.02;

/// sigma_0..sigma_3 = I, X, Y, Z.
const ComplexMatrix& pauli(std::size_t k);
const ComplexMatrix& hadamard();

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Trace out every subsystem not listed in `keep`. `dims` declares the tensor
/// factorization of rho (row-major, most significant factor first); `keep`
/// holds indices into `dims`, in increasing order. Kept subsystems retain
/// their relative order.
ComplexMatrix partial_trace(const ComplexMatrix& rho, const std::vector<std::size_t>& dims,
                            const std::vector<std::size_t>& keep);

struct HermitianSpectrum {
  std::vector<double> eigenvalues;  // sorted descending
  ComplexMatrix eigenvectors;       // orthonormal columns, matching order
};

/// Cyclic Jacobi diagonalization. Input must be Hermitian to within 1e-9
/// (max entrywise deviation from its adjoint); anything beyond that throws.
HermitianSpectrum eig_hermitian(const ComplexMatrix& a);

/// <target|rho|target> for a normalized pure target.
double fidelity_pure(const ComplexMatrix& rho, const StateVector& target);

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2 between two states.
double fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma);

struct StateValidation {
  double tolerance = 0.0;
  double hermiticity_defect = 0.0;  // max |rho - rho†|
  double trace_deviation = 0.0;     // |Tr(rho) - 1|
  double min_eigenvalue = 0.0;      // of the Hermitian part
  bool hermitian = false;
  bool unit_trace = false;
  bool positive = false;

  bool valid() const { return hermitian && unit_trace && positive; }
};

/// Checks the three density-matrix conditions against `tol` and reports every
/// violation rather than throwing. Positivity is evaluated on the Hermitian
/// part (rho + rho†)/2.
StateValidation validate_state(const ComplexMatrix& rho, double tol = kSyntheticTol);

/// Throws std::invalid_argument if rho fails validate_state at `tol`.
void require_physical(const ComplexMatrix& rho, double tol, const char* context);

}  // namespace hyperep
