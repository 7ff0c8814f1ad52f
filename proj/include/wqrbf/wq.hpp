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

#ifndef WQRBF_WQ_HPP
#define WQRBF_WQ_HPP

// Tsallis q-exponential, the Lambert-Tsallis W_q function and the W_q radial
// basis kernel.
//
// W_q(z) is the principal real solution w >= 0 of  w * e_q(w) = z  for z >= 0,
// where e_q(x) = [1 + (1-q) x]^(1/(1-q)) and e_1(x) = exp(x). For q = 1 this
// is the classical Lambert W_0; for q = 2 it has the closed form z / (1 + z).
//
// Everything here is templated on the floating type so the same solver can
// be instantiated at extended precision (e.g. boost float128) for verification.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "wqrbf/errors.hpp"

namespace wqrbf {

enum class WqMethod {
  automatic,    ///< closed form where one exists (q == 2), root finder otherwise
  root_finder,  ///< always use the safeguarded Newton/bisection solver
};

template <class Real>
struct BasicWqParams {
  Real q = 2;
  Real tol = Real(1e-12);  ///< stop once |w e_q(w) - z| <= tol * z
  int max_iter = 200;
  WqMethod method = WqMethod::automatic;
};

using WqParams = BasicWqParams<double>;

namespace detail {

// |q - 1| below this is treated as q == 1 (removable singularity of e_q).
inline constexpr double kQOneBand = 1e-9;

template <class Real>
bool is_q_one(Real q) {
  using std::abs;
  return abs(q - Real(1)) < Real(kQOneBand);
}

// e_q without domain checks; returns +inf past the pole 1/(q-1) when q > 1.
template <class Real>
Real q_exp_unchecked(Real x, Real q) {
  using std::exp;
  using std::pow;
  if (is_q_one(q)) return exp(x);
  const Real base = Real(1) + (Real(1) - q) * x;
  if (base <= 0) return std::numeric_limits<Real>::infinity();
  return pow(base, Real(1) / (Real(1) - q));
}

// Upper end of the principal branch: w * e_q(w) -> inf as w -> 1/(q-1) for q > 1.
template <class Real>
Real branch_limit(Real q) {
  if (q > Real(1) && !is_q_one(q)) return Real(1) / (q - Real(1));
  return std::numeric_limits<Real>::infinity();
}

template <class Real>
Real solve_wq(Real z, const BasicWqParams<Real>& p) {
  using std::abs;
  using std::log;
  using std::pow;

  const Real q = p.q;
  const bool q_one = is_q_one(q);
  const Real limit = branch_limit(q);
  const Real scale = z > Real(1) ? z : Real(1);
  const Real eps = std::numeric_limits<Real>::epsilon();

  // f(w) = w e_q(w) - z is increasing on [0, limit), f(0) = -z < 0 and
  // e_q(w) >= 1 there, so f(max(z, 1)) >= 0 whenever max(z, 1) < limit.
  Real lo = 0;
  Real hi = scale < limit ? scale : limit;

  Real w = log(Real(1) + z);
  if (!(w > lo && w < hi)) w = lo + (hi - lo) / 2;

  for (int it = 0; it < p.max_iter; ++it) {
    const Real e = q_exp_unchecked(w, q);
    const Real f = w * e - z;
    if (abs(f) <= p.tol * z) return w;
    if (f < 0) {
      lo = w;
    } else {
      hi = w;
    }
    if (hi - lo <= Real(2) * eps * hi) return w;

    // d/dw [w e_q(w)] = e_q(w) + w e_q(w)^q
    const Real df = q_one ? e * (Real(1) + w) : e + w * pow(e, q);
    Real next = w - f / df;
    if (next == w) return w;  // step below the representable spacing
    if (!(next > lo && next < hi)) next = lo + (hi - lo) / 2;
    w = next;
  }
  throw ConvergenceError("lambert_wq: no convergence after " +
                         std::to_string(p.max_iter) + " iterations");
}

}  // namespace detail

/// Tsallis q-exponential [1 + (1-q) x]^(1/(1-q)); exp(x) for q == 1.
/// Throws DomainError when 1 + (1-q) x <= 0.
template <class Real>
Real q_exp(Real x, Real q) {
  using std::exp;
  using std::pow;
  if (detail::is_q_one(q)) return exp(x);
  const Real base = Real(1) + (Real(1) - q) * x;
  if (!(base > 0)) {
    throw DomainError("q_exp: 1 + (1-q)x must be positive");
  }
  return pow(base, Real(1) / (Real(1) - q));
}

/// Principal branch of the Lambert-Tsallis function on z >= 0.
template <class Real>
Real lambert_wq(Real z, const BasicWqParams<Real>& p) {
  if (!(p.tol > 0) || p.max_iter < 1) {
    throw std::invalid_argument("lambert_wq: tol must be > 0 and max_iter >= 1");
  }
  if (!(z >= 0)) {
    throw DomainError("lambert_wq: only z >= 0 is supported");
  }
  if (z == 0) return Real(0);
  if (z == std::numeric_limits<Real>::infinity()) return detail::branch_limit(p.q);

  if (p.method == WqMethod::automatic && p.q == Real(2)) {
    // z / (1 + z), arranged so huge z neither overflows nor cancels.
    return z <= Real(1) ? z / (Real(1) + z) : Real(1) / (Real(1) + Real(1) / z);
  }
  return detail::solve_wq(z, p);
}

inline double lambert_wq(double z, double q) {
  WqParams p;
  p.q = q;
  return lambert_wq(z, p);
}

/// Normalised W_q kernel  h(d) = c1 / (1 + W_q(delta d)) - c2.
struct KernelParams {
  double c1 = 2;
  double c2 = 1;
  double delta = 1;
  double q = 2;
};

inline double rbf_kernel(double d, const KernelParams& k, WqParams solver = {}) {
  if (!(d >= 0)) throw DomainError("rbf_kernel: distance must be >= 0");
  if (!(k.delta >= 0)) throw DomainError("rbf_kernel: delta must be >= 0");
  solver.q = k.q;
  return k.c1 / (1 + lambert_wq(k.delta * d, solver)) - k.c2;
}

/// Limit of the kernel as d -> inf (for delta > 0).
inline double rbf_kernel_tail(const KernelParams& k) {
  const double w_inf = detail::branch_limit(k.q);
  return k.c1 / (1 + w_inf) - k.c2;
}

}  // namespace wqrbf

#endif  // WQRBF_WQ_HPP
