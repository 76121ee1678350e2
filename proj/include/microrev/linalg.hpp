#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

// Dense complex linear algebra for the 2-, 4- and 8-dimensional Hilbert
// spaces used throughout. Row-major storage, 64-bit floats, no sparsity.

namespace microrev {

using Complex = std::complex<double>;

namespace tol {
// Algebraic identities (products, adjoints, tensor structure).
inline constexpr double kAlgebra = 1e-12;
// Physicality checks on density matrices (hermiticity, trace, positivity).
inline constexpr double kPhysical = 1e-10;
}  // namespace tol

class ComplexMatrix {
 public:
  ComplexMatrix() : dim_(0) {}
  explicit ComplexMatrix(std::size_t dim)
      : dim_(dim), entries_(dim * dim, Complex{0.0, 0.0}) {}
  ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
      : dim_(dim), entries_(std::move(entries)) {
    if (entries_.size() != dim_ * dim_) {
      throw std::invalid_argument("ComplexMatrix: entries count must equal dim^2");
    }
  }

  static ComplexMatrix identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t dim() const { return dim_; }

  Complex& operator()(std::size_t i, std::size_t j) { return entries_[i * dim_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const {
    return entries_[i * dim_ + j];
  }

  const std::vector<Complex>& entries() const { return entries_; }

  ComplexMatrix operator+(const ComplexMatrix& o) const {
    check_same_dim(o);
    ComplexMatrix r(dim_);
    for (std::size_t k = 0; k < entries_.size(); ++k) r.entries_[k] = entries_[k] + o.entries_[k];
    return r;
  }

  ComplexMatrix operator-(const ComplexMatrix& o) const {
    check_same_dim(o);
    ComplexMatrix r(dim_);
    for (std::size_t k = 0; k < entries_.size(); ++k) r.entries_[k] = entries_[k] - o.entries_[k];
    return r;
  }

  ComplexMatrix operator*(const ComplexMatrix& o) const {
    check_same_dim(o);
    ComplexMatrix r(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
      for (std::size_t k = 0; k < dim_; ++k) {
        const Complex aik = (*this)(i, k);
        if (aik == Complex{0.0, 0.0}) continue;
        for (std::size_t j = 0; j < dim_; ++j) {
          r(i, j) += aik * o(k, j);
        }
      }
    }
    return r;
  }

  ComplexMatrix operator*(Complex s) const {
    ComplexMatrix r(dim_);
    for (std::size_t k = 0; k < entries_.size(); ++k) r.entries_[k] = entries_[k] * s;
    return r;
  }

  Complex trace() const {
    Complex t{0.0, 0.0};
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
  }

  // Largest entrywise magnitude.
  double max_norm() const {
    double m = 0.0;
    for (const Complex& e : entries_) m = std::max(m, std::abs(e));
    return m;
  }

  bool is_unitary(double tolerance = tol::kAlgebra) const;

 private:
  void check_same_dim(const ComplexMatrix& o) const {
    if (dim_ != o.dim_) {
      throw std::invalid_argument("ComplexMatrix: dimension mismatch " +
                                  std::to_string(dim_) + " vs " + std::to_string(o.dim_));
    }
  }

  std::size_t dim_;
  std::vector<Complex> entries_;
};

inline ComplexMatrix conjugate_transpose(const ComplexMatrix& m) {
  ComplexMatrix r(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = 0; j < m.dim(); ++j) {
      r(i, j) = std::conj(m(j, i));
    }
  }
  return r;
}

inline bool ComplexMatrix::is_unitary(double tolerance) const {
  const ComplexMatrix residual = conjugate_transpose(*this) * (*this) - identity(dim_);
  return residual.max_norm() <= tolerance;
}

class Ket {
 public:
  Ket(std::size_t dim, std::vector<Complex> amplitudes)
      : dim_(dim), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() != dim_) {
      throw std::invalid_argument("Ket: amplitude count must equal dim");
    }
    double n2 = 0.0;
    for (const Complex& a : amplitudes_) n2 += std::norm(a);
    if (std::abs(n2 - 1.0) > tol::kAlgebra) {
      throw std::invalid_argument("Ket: not normalized, |psi|^2 = " + std::to_string(n2));
    }
  }

  static Ket basis(std::size_t dim, std::size_t index) {
    std::vector<Complex> a(dim, Complex{0.0, 0.0});
    a.at(index) = 1.0;
    return Ket(dim, std::move(a));
  }

  std::size_t dim() const { return dim_; }
  const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }
  const std::vector<Complex>& amplitudes() const { return amplitudes_; }

 private:
  std::size_t dim_;
  std::vector<Complex> amplitudes_;
};

inline ComplexMatrix projector(const Ket& psi) {
  ComplexMatrix p(psi.dim());
  for (std::size_t i = 0; i < psi.dim(); ++i) {
    for (std::size_t j = 0; j < psi.dim(); ++j) {
      p(i, j) = psi[i] * std::conj(psi[j]);
    }
  }
  return p;
}

// Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations. Only used
// for the small positivity check; dims never exceed 8 here.
inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
  const std::size_t n = m.dim();
  ComplexMatrix a = m;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += std::norm(a(i, j));
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        if (std::abs(apq) < 1e-300) continue;
        // Unitary 2x2 diagonalization of the (p,q) block.
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double absapq = std::abs(apq);
        const Complex phase = apq / absapq;
        const double theta = 0.5 * std::atan2(2.0 * absapq, app - aqq);
        const double c = std::cos(theta);
        const Complex s = std::sin(theta) * phase;
        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = c * akp + std::conj(s) * akq;
          a(k, q) = -s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = c * apk + s * aqk;
          a(q, k) = -std::conj(s) * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i).real();
  std::sort(ev.begin(), ev.end());
  return ev;
}

// Validated density operator: Hermitian, unit trace, positive semidefinite
// within tol::kPhysical.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
    const double herm = (m_ - conjugate_transpose(m_)).max_norm();
    if (herm > tol::kPhysical) {
      throw std::invalid_argument("DensityMatrix: not Hermitian, residual " +
                                  std::to_string(herm));
    }
    const Complex t = m_.trace();
    if (std::abs(t - Complex{1.0, 0.0}) > tol::kPhysical) {
      throw std::invalid_argument("DensityMatrix: trace != 1");
    }
    const std::vector<double> ev = hermitian_eigenvalues(m_);
    if (ev.front() < -tol::kPhysical) {
      throw std::invalid_argument("DensityMatrix: negative eigenvalue " +
                                  std::to_string(ev.front()));
    }
  }

  std::size_t dim() const { return m_.dim(); }
  const ComplexMatrix& matrix() const { return m_; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

 private:
  ComplexMatrix m_;
};

// Kronecker product in (system, reservoir) ordering: index of a composite
// basis element is i_a * dim(b) + i_b, so |g,Eg>,|g,Ee>,|e,Eg>,|e,Ee> for
// two qubits.
inline ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t da = a.dim();
  const std::size_t db = b.dim();
  ComplexMatrix r(da * db);
  for (std::size_t ia = 0; ia < da; ++ia)
    for (std::size_t ja = 0; ja < da; ++ja) {
      const Complex av = a(ia, ja);
      if (av == Complex{0.0, 0.0}) continue;
      for (std::size_t ib = 0; ib < db; ++ib)
        for (std::size_t jb = 0; jb < db; ++jb)
          r(ia * db + ib, ja * db + jb) = av * b(ib, jb);
    }
  return r;
}

inline Ket tensor(const Ket& a, const Ket& b) {
  std::vector<Complex> amps(a.dim() * b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j) amps[i * b.dim() + j] = a[i] * b[j];
  return Ket(a.dim() * b.dim(), std::move(amps));
}

enum class Subsystem { First, Second };

// Reduced operator over the kept factor of a bipartite space with factor
// dimensions (d1, d2). Trace is preserved.
inline ComplexMatrix partial_trace(const ComplexMatrix& rho, Subsystem keep,
                                   std::size_t d1, std::size_t d2) {
  if (d1 * d2 != rho.dim()) {
    throw std::invalid_argument("partial_trace: factor dims do not multiply to rho.dim");
  }
  if (keep == Subsystem::First) {
    ComplexMatrix r(d1);
    for (std::size_t i = 0; i < d1; ++i)
      for (std::size_t j = 0; j < d1; ++j)
        for (std::size_t k = 0; k < d2; ++k) r(i, j) += rho(i * d2 + k, j * d2 + k);
    return r;
  }
  ComplexMatrix r(d2);
  for (std::size_t i = 0; i < d2; ++i)
    for (std::size_t j = 0; j < d2; ++j)
      for (std::size_t k = 0; k < d1; ++k) r(i, j) += rho(k * d2 + i, k * d2 + j);
  return r;
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep,
                                   std::size_t d1, std::size_t d2) {
  return DensityMatrix(partial_trace(rho.matrix(), keep, d1, d2));
}

inline Complex expectation(const ComplexMatrix& rho, const ComplexMatrix& obs) {
  if (rho.dim() != obs.dim()) {
    throw std::invalid_argument("expectation: dimension mismatch");
  }
  Complex t{0.0, 0.0};
  for (std::size_t i = 0; i < rho.dim(); ++i)
    for (std::size_t k = 0; k < rho.dim(); ++k) t += rho(i, k) * obs(k, i);
  return t;
}

inline Complex expectation(const DensityMatrix& rho, const ComplexMatrix& obs) {
  return expectation(rho.matrix(), obs);
}

}  // namespace microrev
