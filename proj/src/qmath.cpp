#include "hyperep/qmath.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace hyperep {

namespace {

constexpr double kHermitianInputTol = 1e-9;

ComplexMatrix hermitian_part(const ComplexMatrix& a) {
  ComplexMatrix h = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      h(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
  return h;
}

double offdiag_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace

const ComplexMatrix& pauli(std::size_t k) {
  static const ComplexMatrix sigma[4] = {
      ComplexMatrix(2, 2, {1, 0, 0, 1}),
      ComplexMatrix(2, 2, {0, 1, 1, 0}),
      ComplexMatrix(2, 2, {0, Complex(0, -1), Complex(0, 1), 0}),
      ComplexMatrix(2, 2, {1, 0, 0, -1}),
  };
  if (k > 3) throw std::invalid_argument("pauli index must be 0..3");
  return sigma[k];
}

const ComplexMatrix& hadamard() {
  static const double r = 1.0 / std::sqrt(2.0);
  static const ComplexMatrix h(2, 2, {r, r, r, -r});
  return h;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex{}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, const std::vector<std::size_t>& dims,
                            const std::vector<std::size_t>& keep) {
  if (!rho.is_square()) throw std::invalid_argument("partial_trace requires a square matrix");
  std::size_t total = 1;
  for (std::size_t d : dims) total *= d;
  if (total != rho.rows()) {
    throw std::invalid_argument("partial_trace: subsystem dimensions do not factor the matrix");
  }
  for (std::size_t k : keep) {
    if (k >= dims.size()) throw std::invalid_argument("partial_trace: keep index out of range");
  }

  std::vector<std::size_t> traced;
  for (std::size_t k = 0; k < dims.size(); ++k)
    if (std::find(keep.begin(), keep.end(), k) == keep.end()) traced.push_back(k);

  // row-major strides, most significant subsystem first
  std::vector<std::size_t> stride(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) stride[k - 1] = stride[k] * dims[k];

  std::size_t kept_dim = 1;
  for (std::size_t k : keep) kept_dim *= dims[k];
  std::size_t traced_dim = total / kept_dim;

  auto expand = [&](std::size_t flat, const std::vector<std::size_t>& subs) {
    std::size_t base = 0;
    for (std::size_t k = subs.size(); k-- > 0;) {
      base += (flat % dims[subs[k]]) * stride[subs[k]];
      flat /= dims[subs[k]];
    }
    return base;
  };

  ComplexMatrix out(kept_dim == 0 ? 1 : kept_dim, kept_dim == 0 ? 1 : kept_dim);
  for (std::size_t i = 0; i < kept_dim; ++i) {
    const std::size_t ri = expand(i, keep);
    for (std::size_t j = 0; j < kept_dim; ++j) {
      const std::size_t cj = expand(j, keep);
      Complex s = 0.0;
      for (std::size_t t = 0; t < traced_dim; ++t) {
        const std::size_t off = expand(t, traced);
        s += rho(ri + off, cj + off);
      }
      out(i, j) = s;
    }
  }
  return out;
}

HermitianSpectrum eig_hermitian(const ComplexMatrix& a) {
  if (!a.is_square()) throw std::invalid_argument("eig_hermitian requires a square matrix");
  if (max_abs_diff(a, a.adjoint()) > kHermitianInputTol) {
    throw std::invalid_argument("eig_hermitian requires a Hermitian matrix");
  }

  const std::size_t n = a.rows();
  ComplexMatrix m = hermitian_part(a);
  ComplexMatrix v = ComplexMatrix::identity(n);

  // Cyclic Jacobi with complex rotations. Each pivot (p,q) is phased into a
  // real 2x2 symmetric problem and annihilated by a plane rotation.
  const double target = 1e-12 * std::max(1.0, m.frobenius_norm());
  constexpr int kMaxSweeps = 64;
  int sweep = 0;
  while (offdiag_norm(m) > target) {
    if (++sweep > kMaxSweeps) {
      throw std::runtime_error("eig_hermitian: Jacobi iteration failed to converge");
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double r = std::abs(m(p, q));
        if (r <= 1e-300) continue;
        const Complex u = m(p, q) / r;  // e^{i phi}
        const double app = m(p, p).real();
        const double aqq = m(q, q).real();
        // tan(2 theta) = 2r / (app - aqq), stable form
        const double tau = (app - aqq) / (2.0 * r);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // column update: m <- m * J with J(p,p)=c, J(p,q)=-s, J(q,p)=s*conj(u), J(q,q)=c*conj(u)
        for (std::size_t k = 0; k < n; ++k) {
          const Complex mkp = m(k, p);
          const Complex mkq = m(k, q);
          m(k, p) = c * mkp + s * std::conj(u) * mkq;
          m(k, q) = -s * mkp + c * std::conj(u) * mkq;
        }
        // row update: m <- J† * m
        for (std::size_t k = 0; k < n; ++k) {
          const Complex mpk = m(p, k);
          const Complex mqk = m(q, k);
          m(p, k) = c * mpk + s * u * mqk;
          m(q, k) = -s * mpk + c * u * mqk;
        }
        m(p, q) = 0.0;
        m(q, p) = 0.0;
        // accumulate eigenvectors
        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = c * vkp + s * std::conj(u) * vkq;
          v(k, q) = -s * vkp + c * std::conj(u) * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return m(i, i).real() > m(j, j).real(); });

  HermitianSpectrum spec;
  spec.eigenvalues.resize(n);
  spec.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    spec.eigenvalues[k] = m(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) spec.eigenvectors(i, k) = v(i, order[k]);
  }
  return spec;
}

double fidelity_pure(const ComplexMatrix& rho, const StateVector& target) {
  if (!rho.is_square() || rho.rows() != target.size()) {
    throw std::invalid_argument("fidelity_pure: state dimension mismatch");
  }
  if (std::abs(vector_norm(target) - 1.0) > 1e-9) {
    throw std::invalid_argument("fidelity_pure: target is not normalized");
  }
  Complex f = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i)
    for (std::size_t j = 0; j < target.size(); ++j)
      f += std::conj(target[i]) * rho(i, j) * target[j];
  return f.real();
}

double fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  if (!rho.is_square() || rho.rows() != sigma.rows() || !sigma.is_square()) {
    throw std::invalid_argument("fidelity: state dimension mismatch");
  }
  const std::size_t n = rho.rows();
  const HermitianSpectrum sr = eig_hermitian(rho);
  ComplexMatrix sqrt_rho(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lam = std::max(sr.eigenvalues[k], 0.0);
    const double root = std::sqrt(lam);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        sqrt_rho(i, j) += root * sr.eigenvectors(i, k) * std::conj(sr.eigenvectors(j, k));
  }
  const ComplexMatrix inner = sqrt_rho * sigma * sqrt_rho;
  const HermitianSpectrum si = eig_hermitian(inner);
  double t = 0.0;
  for (double lam : si.eigenvalues) t += std::sqrt(std::max(lam, 0.0));
  return t * t;
}

StateValidation validate_state(const ComplexMatrix& rho, double tol) {
  if (!rho.is_square()) throw std::invalid_argument("validate_state requires a square matrix");
  StateValidation v;
  v.tolerance = tol;
  v.hermiticity_defect = max_abs_diff(rho, rho.adjoint());
  v.trace_deviation = std::abs(rho.trace() - Complex(1.0));
  const HermitianSpectrum spec = eig_hermitian(hermitian_part(rho));
  v.min_eigenvalue = spec.eigenvalues.back();
  v.hermitian = v.hermiticity_defect <= tol;
  v.unit_trace = v.trace_deviation <= tol;
  v.positive = v.min_eigenvalue >= -tol;
  return v;
}

void require_physical(const ComplexMatrix& rho, double tol, const char* context) {
  const StateValidation v = validate_state(rho, tol);
  if (!v.valid()) {
    std::string msg(context);
    msg += ": state is not physical (";
    if (!v.hermitian) msg += "hermiticity defect " + std::to_string(v.hermiticity_defect) + "; ";
    if (!v.unit_trace) msg += "trace deviation " + std::to_string(v.trace_deviation) + "; ";
    if (!v.positive) msg += "min eigenvalue " + std::to_string(v.min_eigenvalue) + "; ";
    msg += ")";
    throw std::invalid_argument(msg);
  }
}

}  // namespace hyperep
