#pragma once

#include <cmath>
#include <complex>

namespace latfermion {

using Complex = std::complex<double>;

/// A 2×2 complex matrix in the Pauli basis,
///   M = s·𝟙 + a1·σ¹ + a2·σ² + a3·σ³.
///
/// Projectors only ever populate s, a1 and a3; a2 is carried so that products
/// stay inside the representation.
struct SpinMatrix {
  Complex s{};
  Complex a1{};
  Complex a2{};
  Complex a3{};

  static SpinMatrix zero() { return {}; }
  static SpinMatrix identity() { return {1.0, 0.0, 0.0, 0.0}; }
  static SpinMatrix sigma1() { return {0.0, 1.0, 0.0, 0.0}; }
  static SpinMatrix sigma2() { return {0.0, 0.0, 1.0, 0.0}; }
  static SpinMatrix sigma3() { return {0.0, 0.0, 0.0, 1.0}; }

  [[nodiscard]] Complex trace() const { return 2.0 * s; }

  /// Hermitian conjugate. The Pauli matrices are Hermitian, so only the
  /// coefficients are conjugated.
  [[nodiscard]] SpinMatrix dagger() const {
    return {std::conj(s), std::conj(a1), std::conj(a2), std::conj(a3)};
  }

  /// Adjoint with respect to the indefinite spin scalar product, σ³ M† σ³.
  /// Conjugating by σ³ flips the sign of the σ¹ and σ² parts.
  [[nodiscard]] SpinMatrix spin_adjoint() const {
    return {std::conj(s), -std::conj(a1), -std::conj(a2), std::conj(a3)};
  }

  /// Frobenius norm of the dense matrix.
  [[nodiscard]] double norm() const {
    return std::sqrt(2.0 * (std::norm(s) + std::norm(a1) + std::norm(a2) + std::norm(a3)));
  }

  SpinMatrix& operator+=(const SpinMatrix& o) {
    s += o.s;
    a1 += o.a1;
    a2 += o.a2;
    a3 += o.a3;
    return *this;
  }
  SpinMatrix& operator-=(const SpinMatrix& o) {
    s -= o.s;
    a1 -= o.a1;
    a2 -= o.a2;
    a3 -= o.a3;
    return *this;
  }
  SpinMatrix& operator*=(Complex c) {
    s *= c;
    a1 *= c;
    a2 *= c;
    a3 *= c;
    return *this;
  }

  friend SpinMatrix operator+(SpinMatrix a, const SpinMatrix& b) { return a += b; }
  friend SpinMatrix operator-(SpinMatrix a, const SpinMatrix& b) { return a -= b; }
  friend SpinMatrix operator*(SpinMatrix a, Complex c) { return a *= c; }
  friend SpinMatrix operator*(Complex c, SpinMatrix a) { return a *= c; }

  /// (s + a·σ)(t + b·σ) = (st + a·b) + (s b + t a + i a×b)·σ
  friend SpinMatrix operator*(const SpinMatrix& x, const SpinMatrix& y) {
    const Complex i{0.0, 1.0};
    return {
        x.s * y.s + x.a1 * y.a1 + x.a2 * y.a2 + x.a3 * y.a3,
        x.s * y.a1 + y.s * x.a1 + i * (x.a2 * y.a3 - x.a3 * y.a2),
        x.s * y.a2 + y.s * x.a2 + i * (x.a3 * y.a1 - x.a1 * y.a3),
        x.s * y.a3 + y.s * x.a3 + i * (x.a1 * y.a2 - x.a2 * y.a1),
    };
  }

  friend bool operator==(const SpinMatrix&, const SpinMatrix&) = default;
};

}  // namespace latfermion
