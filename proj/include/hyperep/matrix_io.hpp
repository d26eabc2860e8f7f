#pragma once

#include <string>

#include "hyperep/complex_matrix.hpp"

namespace hyperep {

/// Matrix fixture files are JSON objects {rows, cols, re: [...], im: [...]}
/// with row-major entry arrays.
ComplexMatrix load_matrix_json(const std::string& path);
ComplexMatrix matrix_from_json_text(const std::string& text);
std::string matrix_to_json_text(const ComplexMatrix& m);
void save_matrix_json(const ComplexMatrix& m, const std::string& path);

}  // namespace hyperep
