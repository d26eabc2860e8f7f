#pragma once

#include "hyperep/complex_matrix.hpp"

namespace hyperep {

/// The published reconstructed polarization and spatial-mode states after 20%
/// BF loading, transcribed digit for digit. The spatial matrix is not exactly
/// Hermitian as printed (0.379 vs 0.377 in the corner entries); ingestion
/// symmetrizes and reports the defect.
const ComplexMatrix& reconstructed_pol_20bf();
const ComplexMatrix& reconstructed_spa_20bf();

struct IngestedMatrix {
  ComplexMatrix matrix;        // (raw + raw†)/2, as used downstream
  double hermiticity_defect;   // of the raw input
  bool symmetrized;            // true when the defect was nonzero
};

/// Prepares a measured reconstruction for use as a state: symmetrizes, then
/// validates at the experimental tolerance. Throws std::invalid_argument when
/// the defect or the symmetrized state is out of tolerance.
IngestedMatrix ingest_experimental(const ComplexMatrix& raw, double tol);

}  // namespace hyperep
