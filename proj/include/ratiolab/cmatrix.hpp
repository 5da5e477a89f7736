// Copyright 2026 The ratiolab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Dense complex linear algebra for the ratio model M = A B^-1.
//
// Row-major n x n storage. Factorizations: LU with partial pivoting,
// Householder Hessenberg reduction followed by single-shift complex QR for
// general eigenvalues, Householder tridiagonalization followed by implicit QL
// for Hermitian eigenvalues. Singular values go through the Hermitized block
// matrix [[0, X], [X*, 0]]. Only eigenvalues are computed, never vectors.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ratiolab {

using Complex = std::complex<double>;

inline constexpr double kMachineEpsilon = std::numeric_limits<double>::epsilon();

class MatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a solve hits an exactly zero pivot.
class SingularMatrixError : public MatrixError {
 public:
  explicit SingularMatrixError(std::size_t pivot)
      : MatrixError("matrix is singular: zero pivot at index " +
                    std::to_string(pivot)),
        pivot_index(pivot) {}
  std::size_t pivot_index;
};

/// Raised when QR/QL iteration exceeds its sweep budget. [block_lo, block_hi]
/// is the unreduced block that failed to deflate.
class ConvergenceError : public MatrixError {
 public:
  ConvergenceError(std::size_t lo, std::size_t hi)
      : MatrixError("eigenvalue iteration did not converge on block [" +
                    std::to_string(lo) + ", " + std::to_string(hi) + "]"),
        block_lo(lo),
        block_hi(hi) {}
  std::size_t block_lo;
  std::size_t block_hi;
};

class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  explicit ComplexMatrix(std::size_t n) : n_(n), data_(n * n) {}

  /// Takes row-major entries; rejects size mismatches and non-finite values.
  ComplexMatrix(std::size_t n, std::vector<Complex> entries)
      : n_(n), data_(std::move(entries)) {
    if (data_.size() != n_ * n_) {
      throw std::invalid_argument("ComplexMatrix: expected " +
                                  std::to_string(n_ * n_) + " entries, got " +
                                  std::to_string(data_.size()));
    }
    if (!all_finite()) {
      throw std::invalid_argument("ComplexMatrix: non-finite entry");
    }
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(std::span<const Complex> d) {
    ComplexMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t size() const noexcept { return n_; }

  Complex& operator()(std::size_t i, std::size_t j) noexcept {
    return data_[i * n_ + j];
  }
  const Complex& operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * n_ + j];
  }

  std::span<Complex> row(std::size_t i) noexcept {
    return {data_.data() + i * n_, n_};
  }
  std::span<const Complex> row(std::size_t i) const noexcept {
    return {data_.data() + i * n_, n_};
  }

  std::span<const Complex> entries() const noexcept { return data_; }

  bool all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
      return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
  }

  ComplexMatrix transpose() const {
    ComplexMatrix t(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  ComplexMatrix adjoint() const {
    ComplexMatrix t(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) t(j, i) = std::conj((*this)(i, j));
    return t;
  }

  Complex trace() const noexcept {
    Complex s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) s += (*this)(i, i);
    return s;
  }

  double max_abs() const noexcept {
    double m = 0.0;
    for (const auto& z : data_) m = std::max(m, std::abs(z));
    return m;
  }

  double frobenius_norm() const noexcept {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return std::sqrt(s);
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  ComplexMatrix& operator*=(Complex s) noexcept {
    for (auto& z : data_) z *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) {
    return a += b;
  }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) {
    return a -= b;
  }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    a.check_same(b);
    const std::size_t n = a.n_;
    ComplexMatrix c(n);
    for (std::size_t i = 0; i < n; ++i) {
      Complex* ci = c.data_.data() + i * n;
      for (std::size_t k = 0; k < n; ++k) {
        const Complex aik = a(i, k);
        if (aik == Complex{}) continue;
        const Complex* bk = b.data_.data() + k * n;
        for (std::size_t j = 0; j < n; ++j) ci[j] += aik * bk[j];
      }
    }
    return c;
  }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  void check_same(const ComplexMatrix& o) const {
    if (o.n_ != n_) throw std::invalid_argument("ComplexMatrix: dimension mismatch");
  }

  std::size_t n_ = 0;
  std::vector<Complex> data_;
};

// ---------------------------------------------------------------------------
// LU

struct LuDecomposition {
  /// Unit lower triangle L strictly below the diagonal, U on and above.
  ComplexMatrix factors;
  /// Row i of P*A is row permutation[i] of A.
  std::vector<std::size_t> permutation;
  /// sum log|U_ii|; -infinity when some pivot is exactly zero.
  double log_abs_det = 0.0;
  /// First exactly-zero pivot, if any.
  std::optional<std::size_t> zero_pivot;
  double min_pivot_abs = 0.0;
  double max_pivot_abs = 0.0;

  bool singular() const noexcept { return zero_pivot.has_value(); }

  ComplexMatrix lower() const {
    const std::size_t n = factors.size();
    ComplexMatrix l(n);
    for (std::size_t i = 0; i < n; ++i) {
      l(i, i) = 1.0;
      for (std::size_t j = 0; j < i; ++j) l(i, j) = factors(i, j);
    }
    return l;
  }

  ComplexMatrix upper() const {
    const std::size_t n = factors.size();
    ComplexMatrix u(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) u(i, j) = factors(i, j);
    return u;
  }

  /// P*A reconstructed from the permutation and the original matrix.
  ComplexMatrix permuted(const ComplexMatrix& a) const {
    const std::size_t n = a.size();
    ComplexMatrix pa(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) pa(i, j) = a(permutation[i], j);
    return pa;
  }
};

/// PA = LU with partial pivoting. A zero column leaves the pivot at zero, marks
/// the decomposition singular and continues so the factors stay usable.
inline LuDecomposition lu_decompose(ComplexMatrix a) {
  const std::size_t n = a.size();
  LuDecomposition out;
  out.permutation.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.permutation[i] = i;
  out.min_pivot_abs = std::numeric_limits<double>::infinity();

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::norm(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::norm(a(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (p != k) {
      std::swap_ranges(a.row(k).begin(), a.row(k).end(), a.row(p).begin());
      std::swap(out.permutation[k], out.permutation[p]);
    }
    const Complex pivot = a(k, k);
    const double pivot_abs = std::abs(pivot);
    out.min_pivot_abs = std::min(out.min_pivot_abs, pivot_abs);
    out.max_pivot_abs = std::max(out.max_pivot_abs, pivot_abs);
    if (pivot_abs == 0.0) {
      if (!out.zero_pivot) out.zero_pivot = k;
      continue;
    }
    out.log_abs_det += std::log(pivot_abs);
    const Complex inv = 1.0 / pivot;
    auto rk = a.row(k);
    for (std::size_t i = k + 1; i < n; ++i) {
      auto ri = a.row(i);
      const Complex factor = ri[k] * inv;
      ri[k] = factor;
      if (factor == Complex{}) continue;
      for (std::size_t j = k + 1; j < n; ++j) ri[j] -= factor * rk[j];
    }
  }
  if (out.zero_pivot) out.log_abs_det = -std::numeric_limits<double>::infinity();
  if (n == 0) out.min_pivot_abs = 0.0;
  out.factors = std::move(a);
  return out;
}

/// Solves A X = RHS from an existing factorization.
inline ComplexMatrix solve(const LuDecomposition& lu, const ComplexMatrix& rhs) {
  if (lu.zero_pivot) throw SingularMatrixError(*lu.zero_pivot);
  const ComplexMatrix& f = lu.factors;
  const std::size_t n = f.size();
  if (rhs.size() != n) throw std::invalid_argument("solve: dimension mismatch");

  ComplexMatrix x(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto src = rhs.row(lu.permutation[i]);
    std::copy(src.begin(), src.end(), x.row(i).begin());
  }
  // Forward substitution with unit L, row operations on whole RHS rows.
  for (std::size_t i = 0; i < n; ++i) {
    auto xi = x.row(i);
    for (std::size_t k = 0; k < i; ++k) {
      const Complex l = f(i, k);
      if (l == Complex{}) continue;
      const auto xk = x.row(k);
      for (std::size_t j = 0; j < n; ++j) xi[j] -= l * xk[j];
    }
  }
  for (std::size_t ii = n; ii-- > 0;) {
    auto xi = x.row(ii);
    for (std::size_t k = ii + 1; k < n; ++k) {
      const Complex u = f(ii, k);
      if (u == Complex{}) continue;
      const auto xk = x.row(k);
      for (std::size_t j = 0; j < n; ++j) xi[j] -= u * xk[j];
    }
    const Complex inv = 1.0 / f(ii, ii);
    for (auto& v : xi) v *= inv;
  }
  return x;
}

inline ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& rhs) {
  return solve(lu_decompose(a), rhs);
}

/// Smallest LU pivot modulus relative to the largest entry of `a`; 0 for an
/// exactly singular matrix.
inline double relative_min_pivot(const ComplexMatrix& a) {
  const double scale = a.max_abs();
  if (scale == 0.0) return 0.0;
  const auto lu = lu_decompose(a);
  return lu.singular() ? 0.0 : lu.min_pivot_abs / scale;
}

// ---------------------------------------------------------------------------
// General eigenvalues

namespace detail {

/// Rotation G = [[c, s], [-conj(s), c]] with G * (a, b)^T = (r, 0)^T.
struct Givens {
  double c = 1.0;
  Complex s = 0.0;
  Complex r = 0.0;

  static Givens make(Complex a, Complex b) noexcept {
    Givens g;
    const double abs_b = std::abs(b);
    if (abs_b == 0.0) {
      g.r = a;
      return g;
    }
    const double abs_a = std::abs(a);
    if (abs_a == 0.0) {
      g.c = 0.0;
      g.s = std::conj(b) / abs_b;
      g.r = abs_b;
      return g;
    }
    const double nrm = std::hypot(abs_a, abs_b);
    const Complex phase = a / abs_a;
    g.c = abs_a / nrm;
    g.s = phase * std::conj(b) / nrm;
    g.r = phase * nrm;
    return g;
  }

  /// Rows i, j (i < j) over columns [col_lo, col_hi].
  void apply_left(ComplexMatrix& m, std::size_t i, std::size_t j,
                  std::size_t col_lo, std::size_t col_hi) const noexcept {
    auto ri = m.row(i);
    auto rj = m.row(j);
    for (std::size_t k = col_lo; k <= col_hi; ++k) {
      const Complex x = ri[k];
      const Complex y = rj[k];
      ri[k] = c * x + s * y;
      rj[k] = -std::conj(s) * x + c * y;
    }
  }

  /// Columns i, j multiplied by G* over rows [row_lo, row_hi].
  void apply_right_adjoint(ComplexMatrix& m, std::size_t i, std::size_t j,
                           std::size_t row_lo, std::size_t row_hi) const noexcept {
    const Complex sc = std::conj(s);
    for (std::size_t k = row_lo; k <= row_hi; ++k) {
      const Complex x = m(k, i);
      const Complex y = m(k, j);
      m(k, i) = x * c + y * sc;
      m(k, j) = -x * s + y * c;
    }
  }
};

/// Hermitian Householder vector u for x with (I - beta u u*) x = -phase*|x| e1.
/// Returns beta, or 0 when no reflection is needed.
inline double householder(std::span<Complex> u) noexcept {
  double tail = 0.0;
  for (std::size_t i = 1; i < u.size(); ++i) tail += std::norm(u[i]);
  const double abs_alpha = std::abs(u[0]);
  if (tail == 0.0) return 0.0;
  const double xnorm = std::sqrt(tail + abs_alpha * abs_alpha);
  const Complex phase = abs_alpha == 0.0 ? Complex{1.0} : u[0] / abs_alpha;
  u[0] += phase * xnorm;
  return 1.0 / (xnorm * (xnorm + abs_alpha));
}

}  // namespace detail

/// Unitary similarity to upper Hessenberg form, in place.
inline void reduce_to_hessenberg(ComplexMatrix& a) {
  const std::size_t n = a.size();
  if (n < 3) return;
  std::vector<Complex> u(n);
  std::vector<Complex> s(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t m = n - k - 1;
    for (std::size_t i = 0; i < m; ++i) u[i] = a(k + 1 + i, k);
    const Complex alpha = u[0];
    const double beta = detail::householder(std::span<Complex>(u.data(), m));
    if (beta == 0.0) continue;
    const double xnorm = std::abs(u[0] - alpha);

    // Left: rows k+1.., columns k+1.. (column k is set explicitly below).
    std::fill(s.begin() + static_cast<std::ptrdiff_t>(k + 1), s.end(), Complex{});
    for (std::size_t i = 0; i < m; ++i) {
      const Complex cu = std::conj(u[i]);
      const auto r = a.row(k + 1 + i);
      for (std::size_t j = k + 1; j < n; ++j) s[j] += cu * r[j];
    }
    for (std::size_t i = 0; i < m; ++i) {
      const Complex f = beta * u[i];
      auto r = a.row(k + 1 + i);
      for (std::size_t j = k + 1; j < n; ++j) r[j] -= f * s[j];
    }
    const double abs_alpha = std::abs(alpha);
    const Complex phase = abs_alpha == 0.0 ? Complex{1.0} : alpha / abs_alpha;
    a(k + 1, k) = -phase * xnorm;
    for (std::size_t i = k + 2; i < n; ++i) a(i, k) = 0.0;

    // Right: all rows, columns k+1..
    for (std::size_t r = 0; r < n; ++r) {
      auto row = a.row(r);
      Complex t = 0.0;
      for (std::size_t i = 0; i < m; ++i) t += row[k + 1 + i] * u[i];
      t *= beta;
      for (std::size_t i = 0; i < m; ++i) row[k + 1 + i] -= t * std::conj(u[i]);
    }
  }
}

/// Per-eigenvalue sweep budget for the shifted QR/QL iterations.
inline constexpr int kMaxSweepsPerEigenvalue = 30;

/// All n eigenvalues of a general complex matrix: Hessenberg reduction, then
/// implicitly shifted single-shift complex QR with Wilkinson shifts (and
/// exceptional shifts at sweeps 10 and 20). A subdiagonal entry is deflated
/// once |h(i,i-1)| <= tol * (|h(i-1,i-1)| + |h(i,i)|).
inline std::vector<Complex> eigenvalues(ComplexMatrix h, double tol = kMachineEpsilon) {
  if (!(tol > 0.0)) throw std::invalid_argument("eigenvalues: tol must be positive");
  if (!h.all_finite()) throw std::invalid_argument("eigenvalues: non-finite entry");
  const std::size_t n = h.size();
  if (n == 0) return {};
  reduce_to_hessenberg(h);

  const double scale_floor = tol * h.frobenius_norm();
  auto negligible = [&](std::size_t i) {
    const double sub = std::abs(h(i, i - 1));
    const double diag = std::abs(h(i - 1, i - 1)) + std::abs(h(i, i));
    return sub <= tol * diag || sub <= scale_floor * kMachineEpsilon ||
           sub < std::numeric_limits<double>::min();
  };
  auto shift = [&](std::size_t iu, int iter) -> Complex {
    if (iter == 10 || iter == 20) {
      double ex = std::abs(h(iu, iu - 1).real());
      if (iu >= 2) ex += std::abs(h(iu - 1, iu - 2).real());
      return ex;
    }
    Complex t00 = h(iu - 1, iu - 1), t01 = h(iu - 1, iu);
    Complex t10 = h(iu, iu - 1), t11 = h(iu, iu);
    const double normt = std::abs(t00) + std::abs(t01) + std::abs(t10) + std::abs(t11);
    if (normt == 0.0) return 0.0;
    t00 /= normt;
    t01 /= normt;
    t10 /= normt;
    t11 /= normt;
    const Complex b = t01 * t10;
    const Complex c = t00 - t11;
    const Complex disc = std::sqrt(c * c + 4.0 * b);
    const Complex det = t00 * t11 - b;
    const Complex tr = t00 + t11;
    Complex ev1 = 0.5 * (tr + disc);
    Complex ev2 = 0.5 * (tr - disc);
    if (std::abs(ev1) > std::abs(ev2)) {
      ev2 = det / ev1;
    } else if (std::abs(ev2) != 0.0) {
      ev1 = det / ev2;
    }
    return normt * (std::abs(ev1 - t11) < std::abs(ev2 - t11) ? ev1 : ev2);
  };

  std::size_t iu = n - 1;
  int iter = 0;
  for (;;) {
    while (iu > 0 && negligible(iu)) {
      h(iu, iu - 1) = 0.0;
      --iu;
      iter = 0;
    }
    if (iu == 0) break;
    std::size_t il = iu - 1;
    while (il > 0 && !negligible(il)) --il;
    if (++iter > kMaxSweepsPerEigenvalue) throw ConvergenceError(il, iu);

    const Complex mu = shift(iu, iter);
    auto g = detail::Givens::make(h(il, il) - mu, h(il + 1, il));
    g.apply_left(h, il, il + 1, il, iu);
    g.apply_right_adjoint(h, il, il + 1, il, std::min(il + 2, iu));
    for (std::size_t i = il + 1; i < iu; ++i) {
      g = detail::Givens::make(h(i, i - 1), h(i + 1, i - 1));
      h(i, i - 1) = g.r;
      h(i + 1, i - 1) = 0.0;
      g.apply_left(h, i, i + 1, i, iu);
      g.apply_right_adjoint(h, i, i + 1, il, std::min(i + 2, iu));
    }
  }

  std::vector<Complex> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = h(i, i);
  return out;
}

// ---------------------------------------------------------------------------
// Hermitian eigenvalues

/// Eigenvalues of a real symmetric tridiagonal matrix by implicit QL with
/// Wilkinson-type shifts. `off[i]` couples entries i and i+1. Ascending.
inline std::vector<double> tridiagonal_eigenvalues(std::vector<double> d,
                                                   std::vector<double> off) {
  const int n = static_cast<int>(d.size());
  off.resize(d.size(), 0.0);
  if (n > 0) off[static_cast<std::size_t>(n - 1)] = 0.0;
  auto D = [&](int i) -> double& { return d[static_cast<std::size_t>(i)]; };
  auto E = [&](int i) -> double& { return off[static_cast<std::size_t>(i)]; };

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(D(m)) + std::abs(D(m + 1));
        if (std::abs(E(m)) <= kMachineEpsilon * dd ||
            std::abs(E(m)) < std::numeric_limits<double>::min())
          break;
      }
      if (m == l) break;
      if (++iter > kMaxSweepsPerEigenvalue) {
        throw ConvergenceError(static_cast<std::size_t>(l), static_cast<std::size_t>(m));
      }
      double g = (D(l + 1) - D(l)) / (2.0 * E(l));
      double r = std::hypot(g, 1.0);
      g = D(m) - D(l) + E(l) / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      int i = m - 1;
      bool underflow = false;
      for (; i >= l; --i) {
        const double f = s * E(i);
        const double b = c * E(i);
        r = std::hypot(f, g);
        E(i + 1) = r;
        if (r == 0.0) {
          D(i + 1) -= p;
          E(m) = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = D(i + 1) - p;
        r = (D(i) - g) * s + 2.0 * c * b;
        p = s * r;
        D(i + 1) = g + p;
        g = c * r - b;
      }
      if (underflow) continue;
      D(l) -= p;
      E(l) = g;
      E(m) = 0.0;
    } while (m != l);
  }
  std::sort(d.begin(), d.end());
  return d;
}

/// Eigenvalues (ascending) of a Hermitian matrix. Only the lower triangle is
/// trusted; the matrix is symmetrized from it before reduction.
inline std::vector<double> hermitian_eigenvalues(ComplexMatrix a) {
  if (!a.all_finite()) throw std::invalid_argument("hermitian_eigenvalues: non-finite entry");
  const std::size_t n = a.size();
  if (n == 0) return {};
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = a(i, i).real();
    for (std::size_t j = 0; j < i; ++j) a(j, i) = std::conj(a(i, j));
  }

  std::vector<double> diag(n), off(n, 0.0);
  std::vector<Complex> u(n), p(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t m = n - k - 1;
    const std::size_t base = k + 1;
    for (std::size_t i = 0; i < m; ++i) u[i] = a(base + i, k);
    const Complex alpha = u[0];
    const double beta = detail::householder(std::span<Complex>(u.data(), m));
    diag[k] = a(k, k).real();
    if (beta == 0.0) {
      off[k] = std::abs(alpha);
      continue;
    }
    off[k] = std::abs(u[0] - alpha);

    // p = beta * A22 * u
    for (std::size_t i = 0; i < m; ++i) {
      const auto row = a.row(base + i);
      Complex t = 0.0;
      for (std::size_t j = 0; j < m; ++j) t += row[base + j] * u[j];
      p[i] = beta * t;
    }
    double kdot = 0.0;
    for (std::size_t i = 0; i < m; ++i) kdot += (std::conj(u[i]) * p[i]).real();
    const double kfac = 0.5 * beta * kdot;
    for (std::size_t i = 0; i < m; ++i) p[i] -= kfac * u[i];  // p becomes w
    // A22 -= u w* + w u*
    for (std::size_t i = 0; i < m; ++i) {
      auto row = a.row(base + i);
      const Complex ui = u[i];
      const Complex wi = p[i];
      for (std::size_t j = 0; j < m; ++j) {
        row[base + j] -= ui * std::conj(p[j]) + wi * std::conj(u[j]);
      }
    }
  }
  if (n >= 2) {
    diag[n - 2] = a(n - 2, n - 2).real();
    off[n - 2] = std::abs(a(n - 1, n - 2));
  }
  diag[n - 1] = a(n - 1, n - 1).real();
  return tridiagonal_eigenvalues(std::move(diag), std::move(off));
}

/// The 2n x 2n Hermitian block matrix [[0, X], [X*, 0]].
inline ComplexMatrix hermitize_block(const ComplexMatrix& x) {
  const std::size_t n = x.size();
  ComplexMatrix h(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      h(i, n + j) = x(i, j);
      h(n + j, i) = std::conj(x(i, j));
    }
  }
  return h;
}

/// Singular values of X (ascending), read off the Hermitized spectrum. The
/// spectrum is symmetric, so each value averages the +/- pair.
inline std::vector<double> singular_values(const ComplexMatrix& x) {
  const std::size_t n = x.size();
  const auto spec = hermitian_eigenvalues(hermitize_block(x));
  std::vector<double> sv(n);
  for (std::size_t i = 0; i < n; ++i) {
    sv[i] = std::max(0.0, 0.5 * (spec[n + i] - spec[n - 1 - i]));
  }
  std::sort(sv.begin(), sv.end());
  return sv;
}

inline double smallest_singular_value(const ComplexMatrix& x) {
  const auto sv = singular_values(x);
  return sv.empty() ? 0.0 : sv.front();
}

// ---------------------------------------------------------------------------
// Spectra of ratios

struct SpectrumSample {
  std::vector<Complex> eigenvalues;
  double rho_max = 0.0;
  double rho_min = 0.0;
  std::size_t n = 0;
  /// Set when B's smallest pivot fell below n * eps * max|B_ij|.
  bool near_singular_denominator = false;
};

inline SpectrumSample make_spectrum_sample(std::vector<Complex> eig) {
  SpectrumSample s;
  s.n = eig.size();
  if (!eig.empty()) {
    s.rho_min = std::numeric_limits<double>::infinity();
    for (const auto& z : eig) {
      const double r = std::abs(z);
      s.rho_max = std::max(s.rho_max, r);
      s.rho_min = std::min(s.rho_min, r);
    }
  }
  s.eigenvalues = std::move(eig);
  return s;
}

/// A * B^-1 formed by a right solve: B^T Y = A^T, M = Y^T.
inline ComplexMatrix right_divide(const ComplexMatrix& a, const ComplexMatrix& b,
                                  bool* near_singular = nullptr) {
  if (a.size() != b.size()) throw std::invalid_argument("right_divide: dimension mismatch");
  const auto lu = lu_decompose(b.transpose());
  if (lu.singular()) throw SingularMatrixError(*lu.zero_pivot);
  if (near_singular) {
    *near_singular = lu.min_pivot_abs <
                     static_cast<double>(b.size()) * kMachineEpsilon * b.max_abs();
  }
  return solve(lu, a.transpose()).transpose();
}

/// Eigenvalues of A B^-1 with the radii filled in.
inline SpectrumSample spectrum_of_ratio(const ComplexMatrix& a, const ComplexMatrix& b) {
  bool near_singular = false;
  auto m = right_divide(a, b, &near_singular);
  auto s = make_spectrum_sample(eigenvalues(std::move(m)));
  s.near_singular_denominator = near_singular;
  return s;
}

}  // namespace ratiolab
