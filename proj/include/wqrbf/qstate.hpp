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

#ifndef WQRBF_QSTATE_HPP
#define WQRBF_QSTATE_HPP

// Two-qubit density matrices: validation, spectra, Wootters concurrence,
// (relative) disentropy and seeded sampling from the Hilbert-Schmidt ensemble.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "wqrbf/errors.hpp"
#include "wqrbf/wq.hpp"

namespace wqrbf {

using Complex = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;
using Vector2c = Eigen::Vector2cd;
using Vector4c = Eigen::Vector4cd;
using Rng = std::mt19937_64;

inline constexpr double kStateTol = 1e-10;      // hermiticity / trace / PSD slack
inline constexpr double kSpectrumSumTol = 1e-9;
inline constexpr double kSeparableTol = 1e-9;   // C <= this counts as disentangled
inline constexpr std::uint64_t kDefaultRejectionBudget = 10'000'000;

// Eigenvalues of rho below this are treated as exact zeros when forming sqrt(rho).
// Solver noise of ~1e-17 would otherwise become ~3e-9 after the square root.
inline constexpr double kSqrtFloor = 1e-14;

class DensityMatrix;
DensityMatrix validate(const Matrix4c& m);

/// A validated 4x4 two-qubit density matrix. Only obtainable through validate().
class DensityMatrix {
 public:
  /// The maximally mixed state I/4.
  DensityMatrix() : m_(Matrix4c::Identity() / 4.0) {}

  const Matrix4c& matrix() const noexcept { return m_; }
  Complex operator()(int row, int col) const { return m_(row, col); }

  friend bool operator==(const DensityMatrix& a, const DensityMatrix& b) {
    return a.m_ == b.m_;
  }

 private:
  friend DensityMatrix validate(const Matrix4c& m);
  explicit DensityMatrix(const Matrix4c& m) : m_(m) {}

  Matrix4c m_;
};

/// Eigenvalues sorted in descending order.
struct Spectrum {
  std::array<double, 4> values{};

  double operator[](std::size_t i) const { return values[i]; }
};

enum class Label { disentangled, entangled };

inline std::string_view label_name(Label l) {
  return l == Label::entangled ? "entangled" : "disentangled";
}

inline Label parse_label(std::string_view s) {
  if (s == "entangled") return Label::entangled;
  if (s == "disentangled") return Label::disentangled;
  throw FormatError("unknown label '" + std::string(s) + "'");
}

struct LabeledState {
  DensityMatrix state;
  double concurrence = 0;
  Label label = Label::disentangled;
};

namespace detail {

inline std::array<double, 4> descending(const Eigen::Vector4d& ascending) {
  return {ascending(3), ascending(2), ascending(1), ascending(0)};
}

inline Eigen::SelfAdjointEigenSolver<Matrix4c> eigen_decompose(const Matrix4c& m,
                                                               bool vectors) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> solver(
      m, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("hermitian eigensolver did not converge");
  }
  return solver;
}

// sigma_y (x) sigma_y, real and symmetric.
inline Matrix4c spin_flip() {
  Matrix4c y = Matrix4c::Zero();
  y(0, 3) = -1.0;
  y(1, 2) = 1.0;
  y(2, 1) = 1.0;
  y(3, 0) = -1.0;
  return y;
}

}  // namespace detail

/// Checks hermiticity, unit trace and positive semidefiniteness (all to 1e-10).
inline DensityMatrix validate(const Matrix4c& m) {
  if (!m.allFinite()) {
    throw StateError(StateError::Kind::not_finite, "density matrix has non-finite entries");
  }
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      if (std::abs(m(r, c) - std::conj(m(c, r))) > kStateTol) {
        throw StateError(StateError::Kind::not_hermitian,
                         "density matrix is not hermitian at (" + std::to_string(r) +
                             "," + std::to_string(c) + ")");
      }
    }
  }
  const Complex tr = m.trace();
  if (std::abs(tr - 1.0) > kStateTol) {
    throw StateError(StateError::Kind::bad_trace,
                     "density matrix trace is " + std::to_string(tr.real()));
  }
  const auto solver = detail::eigen_decompose(m, false);
  if (solver.eigenvalues().minCoeff() < -kStateTol) {
    throw StateError(StateError::Kind::not_psd,
                     "density matrix has eigenvalue " +
                         std::to_string(solver.eigenvalues().minCoeff()));
  }
  return DensityMatrix(m);
}

/// Descending eigenvalues, clamped into [0, 1].
Spectrum spectrum_of(const Matrix4c& m);

inline Spectrum hermitian_eigenvalues(const DensityMatrix& rho) { return spectrum_of(rho.matrix()); }

/// Hermitian PSD square root.
inline Matrix4c psd_sqrt(const DensityMatrix& rho) {
  const auto solver = detail::eigen_decompose(rho.matrix(), true);
  Eigen::Vector4d root = solver.eigenvalues();
  for (int i = 0; i < 4; ++i) root(i) = root(i) > kSqrtFloor ? std::sqrt(root(i)) : 0.0;
  const Matrix4c& v = solver.eigenvectors();
  return v * root.cast<Complex>().asDiagonal() * v.adjoint();
}

/// Wootters concurrence.
///
/// sqrt(eig(rho rho~)) are the singular values of sqrt(rho) Y conj(sqrt(rho)),
/// Y = sigma_y (x) sigma_y; taking them from an SVD avoids squaring and
/// re-rooting tiny eigenvalues.
inline double concurrence(const DensityMatrix& rho) {
  const Matrix4c s = psd_sqrt(rho);
  const Matrix4c a = s * detail::spin_flip() * s.conjugate();
  const Eigen::JacobiSVD<Matrix4c, Eigen::NoQRPreconditioner> svd(a);
  const Eigen::Vector4d sv = svd.singularValues();  // descending
  const double c = sv(0) - sv(1) - sv(2) - sv(3);
  return std::clamp(c, 0.0, 1.0);
}

inline Label label_for(double concurrence) {
  return concurrence > kSeparableTol ? Label::entangled : Label::disentangled;
}

/// sum_n lambda_n^q W_q(lambda_n); zero eigenvalues contribute nothing.
inline double disentropy(const Spectrum& s, const WqParams& p) {
  double acc = 0;
  for (double l : s.values) {
    if (l > 0) acc += std::pow(l, p.q) * lambert_wq(l, p);
  }
  return acc;
}

inline double disentropy(const DensityMatrix& rho, double q) {
  WqParams p;
  p.q = q;
  return disentropy(hermitian_eigenvalues(rho), p);
}

/// sum_n lambda_n^q |W_q(lambda_n) - W_q(gamma_n)|, spectra paired by rank.
/// Not symmetric in its arguments.
inline double relative_disentropy(const Spectrum& rho, const Spectrum& gamma,
                                  const WqParams& p) {
  double acc = 0;
  for (std::size_t n = 0; n < 4; ++n) {
    const double l = rho[n];
    if (l > 0) {
      acc += std::pow(l, p.q) * std::abs(lambert_wq(l, p) - lambert_wq(gamma[n], p));
    }
  }
  return acc;
}

inline double relative_disentropy(const DensityMatrix& rho, const DensityMatrix& gamma,
                                  double q) {
  WqParams p;
  p.q = q;
  return relative_disentropy(hermitian_eigenvalues(rho), hermitian_eigenvalues(gamma), p);
}

/// 4x4 matrix of iid standard complex normals.
inline Matrix4c ginibre_factor(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix4c g;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(r, c) = Complex(re, im);
    }
  }
  return g;
}

/// G G^dagger / tr(G G^dagger), exactly hermitian; a zero factor maps to I/4.
inline Matrix4c normalized_gram(const Matrix4c& g) {
  Matrix4c m = g * g.adjoint();
  const double tr = m.trace().real();
  if (!(tr > 0) || !std::isfinite(tr) || !m.allFinite()) return Matrix4c::Identity() / 4.0;
  m /= tr;
  return (m + m.adjoint()) / 2.0;
}

inline DensityMatrix state_from_factor(const Matrix4c& g) { return validate(normalized_gram(g)); }

/// Clamped descending eigenvalues of a hermitian matrix, without validation.
inline Spectrum spectrum_of(const Matrix4c& m) {
  const auto solver = detail::eigen_decompose(m, false);
  Spectrum s{detail::descending(solver.eigenvalues())};
  for (double& v : s.values) v = std::clamp(v, 0.0, 1.0);
  return s;
}

/// Draw from the Hilbert-Schmidt ensemble.
inline DensityMatrix random_state(Rng& rng) { return state_from_factor(ginibre_factor(rng)); }

/// |a><a| (x) |b><b| for unnormalised a, b (normalised here).
inline Matrix4c product_projector(const Vector2c& a, const Vector2c& b) {
  Vector4c ab;
  const Vector2c an = a.normalized();
  const Vector2c bn = b.normalized();
  ab << an(0) * bn(0), an(0) * bn(1), an(1) * bn(0), an(1) * bn(1);
  return ab * ab.adjoint();
}

inline Matrix4c kron(const Matrix2c& a, const Matrix2c& b) {
  Matrix4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

/// Whether concurrence c falls in the requested class/window. For entangled
/// states the window is (c_min, c_max], closed at 0 when c_min == 0.
inline bool in_window(double c, Label kind, double c_min, double c_max) {
  if (kind == Label::disentangled) return c <= kSeparableTol;
  if (c <= kSeparableTol) return false;
  if (c_min <= 0) return c <= c_max;
  return c > c_min && c <= c_max;
}

/// Largest concurrence of any state with this spectrum,
/// max(0, l1 - l3 - 2 sqrt(l2 l4)). Bounds concurrence(rho) from above.
inline double max_concurrence(const Spectrum& s) {
  const auto& l = s.values;
  return std::max(0.0, l[0] - l[2] - 2.0 * std::sqrt(l[1] * l[3]));
}

/// One Hilbert-Schmidt draw labeled by its concurrence.
inline LabeledState sample_any(Rng& rng) {
  DensityMatrix rho = random_state(rng);
  const double c = concurrence(rho);
  return {rho, c, label_for(c)};
}

/// Rejection-samples a Hilbert-Schmidt state whose concurrence lies in the window.
inline LabeledState sample_labeled(Rng& rng, Label kind, double c_min = 0.0,
                                   double c_max = 1.0,
                                   std::uint64_t budget = kDefaultRejectionBudget) {
  if (!(c_min >= 0 && c_min <= c_max && c_max <= 1)) {
    throw std::invalid_argument("sample_labeled: need 0 <= c_min <= c_max <= 1");
  }
  // Draws whose spectral bound already rules out the window skip the full
  // concurrence computation; the margin covers eigensolver rounding.
  const bool prefilter = kind == Label::entangled && c_min > 1e-6;
  for (std::uint64_t attempt = 0; attempt < budget; ++attempt) {
    DensityMatrix rho = random_state(rng);
    if (prefilter && max_concurrence(hermitian_eigenvalues(rho)) < c_min - 1e-6) continue;
    const double c = concurrence(rho);
    if (in_window(c, kind, c_min, c_max)) return {rho, c, kind};
  }
  throw BudgetError("sample_labeled: rejection budget of " + std::to_string(budget) +
                    " exhausted for " + std::string(label_name(kind)) + " window (" +
                    std::to_string(c_min) + ", " + std::to_string(c_max) + "]");
}

}  // namespace wqrbf

#endif  // WQRBF_QSTATE_HPP
