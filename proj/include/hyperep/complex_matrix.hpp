#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace hyperep {

using Complex = std::complex<double>;
using StateVector = std::vector<Complex>;

/// Dense complex matrix, row-major storage. All states and operators in this
/// project are at most 16x16, so no attempt is made at blocking or sparsity.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  static ComplexMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_ && rows_ > 0; }

  Complex& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const {
    return entries_[r * cols_ + c];
  }

  const std::vector<Complex>& entries() const { return entries_; }

  ComplexMatrix adjoint() const;
  Complex trace() const;
  double frobenius_norm() const;
  /// max_ij |a(i,j)|
  double max_abs() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scale);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> entries_;
};

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(Complex scale, ComplexMatrix m);
StateVector operator*(const ComplexMatrix& m, const StateVector& v);

/// u * rho * u†
ComplexMatrix conjugate_by(const ComplexMatrix& u, const ComplexMatrix& rho);

/// |v><v|
ComplexMatrix outer(const StateVector& v);

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
double vector_norm(const StateVector& v);

}  // namespace hyperep
