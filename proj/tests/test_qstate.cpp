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

#include <catch_amalgamated.hpp>

#include <cmath>

#include "support.hpp"
#include "wqrbf/qstate.hpp"

using namespace wqrbf;
using Catch::Matchers::WithinAbs;

namespace {

Matrix4c diag(double a, double b, double c, double d) {
  return Eigen::Vector4d(a, b, c, d).cast<Complex>().asDiagonal();
}

void check_spectrum(const Spectrum& s, std::array<double, 4> expected, double tol = 1e-12) {
  for (std::size_t i = 0; i < 4; ++i) CHECK_THAT(s[i], WithinAbs(expected[i], tol));
}

StateError::Kind rejection_kind(const Matrix4c& m) {
  try {
    validate(m);
  } catch (const StateError& e) {
    return e.kind();
  }
  FAIL("matrix was accepted");
  return StateError::Kind::not_finite;
}

}  // namespace

TEST_CASE("validate accepts density matrices", "[qstate][validate]") {
  CHECK_NOTHROW(validate(Matrix4c::Identity() / 4.0));
  CHECK_NOTHROW(validate(diag(1, 0, 0, 0)));
  CHECK_NOTHROW(validate(testing::bell_phi_plus()));
  CHECK(DensityMatrix().matrix() == Matrix4c::Identity() / 4.0);
}

TEST_CASE("validate rejects invalid matrices", "[qstate][validate]") {
  CHECK(rejection_kind(diag(2, -1, 0, 0)) == StateError::Kind::not_psd);
  CHECK(rejection_kind(diag(0.5, 0.5, 0.5, 0)) == StateError::Kind::bad_trace);
  Matrix4c m = Matrix4c::Identity() / 4.0;
  m(0, 1) = 0.1;
  CHECK(rejection_kind(m) == StateError::Kind::not_hermitian);
  m = Matrix4c::Identity() / 4.0;
  m(2, 2) = std::nan("");
  CHECK(rejection_kind(m) == StateError::Kind::not_finite);
}

TEST_CASE("hermitian_eigenvalues reference spectra", "[qstate][spectrum]") {
  check_spectrum(hermitian_eigenvalues(DensityMatrix()), {0.25, 0.25, 0.25, 0.25});
  check_spectrum(hermitian_eigenvalues(validate(testing::bell_phi_plus())), {1, 0, 0, 0});
  check_spectrum(hermitian_eigenvalues(validate(diag(0.1, 0.3, 0.4, 0.2))), {0.4, 0.3, 0.2, 0.1});
}

TEST_CASE("spectra are descending and sum to one", "[qstate][spectrum][property]") {
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    const Spectrum s = hermitian_eigenvalues(random_state(rng));
    CHECK(std::is_sorted(s.values.begin(), s.values.end(), std::greater<>()));
    CHECK_THAT(s[0] + s[1] + s[2] + s[3], WithinAbs(1.0, 1e-9));
    CHECK(s[3] >= 0);
  }
}

TEST_CASE("psd_sqrt reference values", "[qstate][sqrt]") {
  CHECK(psd_sqrt(DensityMatrix()).isApprox(Matrix4c::Identity() / 2.0, 1e-14));
  const Matrix4c expected = diag(2, 1, 0, 0) / std::sqrt(5.0);
  CHECK((psd_sqrt(validate(diag(0.8, 0.2, 0, 0))) - expected).cwiseAbs().maxCoeff() < 1e-14);
  const Matrix4c p = testing::projector(testing::ket({0.3, 0.1}, {-0.2, 0.5}, 0.7, {0, -0.4}));
  CHECK((psd_sqrt(validate(p)) - p).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("psd_sqrt squares back", "[qstate][sqrt][property]") {
  Rng rng(12);
  for (int i = 0; i < 1000; ++i) {
    const DensityMatrix rho = random_state(rng);
    const Matrix4c s = psd_sqrt(rho);
    CHECK((s * s - rho.matrix()).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("concurrence of Bell states is one", "[qstate][concurrence]") {
  for (const Matrix4c& b : {testing::bell_phi_plus(), testing::bell_phi_minus(),
                            testing::bell_psi_plus(), testing::bell_psi_minus()}) {
    CHECK_THAT(concurrence(validate(b)), WithinAbs(1.0, 1e-12));
  }
}

TEST_CASE("concurrence of product states is zero", "[qstate][concurrence][property]") {
  Rng rng(13);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const Matrix4c mixed = kron(testing::random_qubit_state(rng), testing::random_qubit_state(rng));
    CHECK(concurrence(validate(mixed)) <= 1e-9);
    const Vector2c a(Complex(n(rng), n(rng)), Complex(n(rng), n(rng)));
    const Vector2c b(Complex(n(rng), n(rng)), Complex(n(rng), n(rng)));
    CHECK(concurrence(validate(product_projector(a, b))) <= 1e-9);
  }
}

TEST_CASE("Werner state concurrence", "[qstate][concurrence][property]") {
  CHECK_THAT(concurrence(validate(testing::werner(0.5))), WithinAbs(0.25, 1e-12));
  for (int i = 0; i <= 100; ++i) {
    const double p = i / 100.0;
    const Matrix4c w = testing::werner(p);
    const double c = concurrence(validate(w));
    INFO("p = " << p);
    CHECK_THAT(c, WithinAbs(std::max(0.0, (3 * p - 1) / 2), 1e-8));
    CHECK_THAT(c, WithinAbs(testing::concurrence_oracle(w), 1e-8));
  }
}

TEST_CASE("concurrence agrees with the rho rho~ eigenvalue oracle", "[qstate][concurrence][property]") {
  Rng rng(14);
  for (int i = 0; i < 1000; ++i) {
    const DensityMatrix rho = random_state(rng);
    CHECK_THAT(concurrence(rho), WithinAbs(testing::concurrence_oracle(rho.matrix()), 1e-7));
  }
}

TEST_CASE("concurrence is invariant under local unitaries", "[qstate][concurrence][property]") {
  Rng rng(15);
  for (int i = 0; i < 200; ++i) {
    const DensityMatrix rho = random_state(rng);
    const Matrix4c local = kron(testing::random_unitary2(rng), testing::random_unitary2(rng));
    const Matrix4c rotated = local * rho.matrix() * local.adjoint();
    CHECK_THAT(concurrence(validate((rotated + rotated.adjoint()) / 2.0)),
               WithinAbs(concurrence(rho), 1e-9));
  }
}

TEST_CASE("max_concurrence bounds concurrence", "[qstate][concurrence][property]") {
  Rng rng(16);
  for (int i = 0; i < 2000; ++i) {
    const DensityMatrix rho = random_state(rng);
    CHECK(concurrence(rho) <= max_concurrence(hermitian_eigenvalues(rho)) + 1e-12);
  }
  CHECK_THAT(max_concurrence(hermitian_eigenvalues(validate(testing::werner(0.5)))),
             WithinAbs(0.25, 1e-12));
}

TEST_CASE("disentropy reference values", "[qstate][disentropy]") {
  const DensityMatrix pure = validate(diag(1, 0, 0, 0));
  CHECK_THAT(disentropy(pure, 2.0), WithinAbs(0.5, 1e-12));
  CHECK_THAT(disentropy(DensityMatrix(), 2.0), WithinAbs(0.05, 1e-12));
  CHECK_THAT(disentropy(pure, 1.0), WithinAbs(testing::omega(), 1e-12));
}

TEST_CASE("relative disentropy reference values", "[qstate][disentropy]") {
  const DensityMatrix pure = validate(testing::bell_phi_plus());
  const DensityMatrix mixed;
  CHECK_THAT(relative_disentropy(pure, mixed, 2.0), WithinAbs(0.3, 1e-12));
  CHECK_THAT(relative_disentropy(mixed, pure, 2.0), WithinAbs(0.05625, 1e-12));
  Rng rng(17);
  for (int i = 0; i < 100; ++i) {
    const DensityMatrix rho = random_state(rng);
    CHECK(relative_disentropy(rho, rho, 2.0) == 0.0);
    CHECK(relative_disentropy(rho, rho, 1.5) == 0.0);
  }
}

TEST_CASE("disentropy is unitarily invariant", "[qstate][disentropy][property]") {
  Rng rng(18);
  for (int i = 0; i < 300; ++i) {
    const DensityMatrix rho = random_state(rng);
    const Matrix4c u = testing::random_unitary(rng);
    const Matrix4c rotated = u * rho.matrix() * u.adjoint();
    const DensityMatrix turned = validate((rotated + rotated.adjoint()) / 2.0);
    for (double q : {1.0, 2.0, 3.0}) {
      CHECK_THAT(disentropy(turned, q), WithinAbs(disentropy(rho, q), 1e-9));
    }
  }
}

TEST_CASE("Ginibre draws are valid and reproducible", "[qstate][sampler]") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    const DensityMatrix x = random_state(a);
    CHECK_NOTHROW(validate(x.matrix()));
    CHECK(x == random_state(b));
  }
}

TEST_CASE("degenerate Ginibre factor falls back to I/4", "[qstate][sampler]") {
  CHECK(normalized_gram(Matrix4c::Zero()) == Matrix4c::Identity() / 4.0);
}

TEST_CASE("Hilbert-Schmidt separable fraction", "[qstate][sampler][property]") {
  Rng rng(19);
  const int n = 100'000;
  int separable = 0;
  for (int i = 0; i < n; ++i) separable += sample_any(rng).label == Label::disentangled;
  const double fraction = static_cast<double>(separable) / n;
  INFO("separable fraction " << fraction);
  CHECK_THAT(fraction, WithinAbs(0.24, 0.02));
}

TEST_CASE("sample_labeled respects its window", "[qstate][sampler][property]") {
  Rng rng(20);
  for (int i = 0; i < 300; ++i) {
    const auto d = sample_labeled(rng, Label::disentangled);
    CHECK(d.label == Label::disentangled);
    CHECK(d.concurrence <= 1e-9);
    const auto low = sample_labeled(rng, Label::entangled, 0.0, 0.1);
    CHECK((low.concurrence > 1e-9 && low.concurrence <= 0.1));
    const auto high = sample_labeled(rng, Label::entangled, 0.5, 0.6);
    CHECK((high.concurrence > 0.5 && high.concurrence <= 0.6));
    CHECK(high.label == Label::entangled);
    CHECK_THAT(concurrence(high.state), WithinAbs(high.concurrence, 0.0));
  }
}

TEST_CASE("sample_labeled errors", "[qstate][sampler]") {
  Rng rng(21);
  CHECK_THROWS_AS(sample_labeled(rng, Label::entangled, 0.6, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(sample_labeled(rng, Label::entangled, -0.1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(sample_labeled(rng, Label::entangled, 0.5, 0.5, 100), BudgetError);
}

TEST_CASE("labels", "[qstate]") {
  CHECK(label_for(0.0) == Label::disentangled);
  CHECK(label_for(1e-9) == Label::disentangled);
  CHECK(label_for(2e-9) == Label::entangled);
  CHECK(parse_label(label_name(Label::entangled)) == Label::entangled);
  CHECK(parse_label(label_name(Label::disentangled)) == Label::disentangled);
}
