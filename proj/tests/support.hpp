// Copyright 2026 The wqrbf Authors - All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WQRBF_TESTS_SUPPORT_HPP
#define WQRBF_TESTS_SUPPORT_HPP

// Independent oracles and fixtures shared by the test binaries.

#include <cmath>
#include <functional>
#include <random>

#include <Eigen/Dense>

#include "wqrbf/qstate.hpp"

namespace wqrbf::testing {

/// Plain bisection for the root of an increasing f on [lo, hi], in long double.
inline long double bisect(const std::function<long double(long double)>& f, long double lo,
                          long double hi, int iterations = 200) {
  for (int i = 0; i < iterations; ++i) {
    const long double mid = (lo + hi) / 2;
    if (f(mid) < 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return (lo + hi) / 2;
}

/// Omega constant, w e^w = 1.
inline double omega() {
  return static_cast<double>(bisect([](long double w) { return w * std::exp(w) - 1; }, 0, 1));
}

inline Vector4c ket(Complex a, Complex b, Complex c, Complex d) {
  Vector4c v;
  v << a, b, c, d;
  return v;
}

inline Matrix4c projector(const Vector4c& v) { return v * v.adjoint() / v.squaredNorm(); }

inline Matrix4c bell_phi_plus() { return projector(ket(1, 0, 0, 1)); }
inline Matrix4c bell_phi_minus() { return projector(ket(1, 0, 0, -1)); }
inline Matrix4c bell_psi_plus() { return projector(ket(0, 1, 1, 0)); }
inline Matrix4c bell_psi_minus() { return projector(ket(0, 1, -1, 0)); }

inline Matrix4c werner(double p) {
  return p * bell_psi_minus() + (1 - p) * Matrix4c::Identity() / 4.0;
}

/// Haar-random unitary from the QR decomposition of a Ginibre matrix.
inline Matrix4c random_unitary(Rng& rng) {
  const Matrix4c g = ginibre_factor(rng);
  Eigen::HouseholderQR<Matrix4c> qr(g);
  Matrix4c q = qr.householderQ();
  const Matrix4c r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < 4; ++i) q.col(i) *= r(i, i) / std::abs(r(i, i));
  return q;
}

/// Haar-random 2x2 unitary.
inline Matrix2c random_unitary2(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix2c g;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) g(r, c) = Complex(n(rng), n(rng));
  Eigen::HouseholderQR<Matrix2c> qr(g);
  Matrix2c q = qr.householderQ();
  const Matrix2c r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < 2; ++i) q.col(i) *= r(i, i) / std::abs(r(i, i));
  return q;
}

/// Random single-qubit density matrix.
inline Matrix2c random_qubit_state(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix2c g;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) g(r, c) = Complex(n(rng), n(rng));
  const Matrix2c m = g * g.adjoint();
  return m / m.trace();
}

/// Wootters concurrence via the eigenvalues of the non-hermitian rho rho~.
inline double concurrence_oracle(const Matrix4c& rho) {
  Matrix4c y = Matrix4c::Zero();
  y(0, 3) = -1;
  y(1, 2) = 1;
  y(2, 1) = 1;
  y(3, 0) = -1;
  const Matrix4c tilde = y * rho.conjugate() * y;
  Eigen::ComplexEigenSolver<Matrix4c> es(rho * tilde);
  std::array<double, 4> l;
  for (int i = 0; i < 4; ++i) l[i] = std::sqrt(std::max(0.0, es.eigenvalues()(i).real()));
  std::sort(l.begin(), l.end(), std::greater<>());
  return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

}  // namespace wqrbf::testing

#endif  // WQRBF_TESTS_SUPPORT_HPP
