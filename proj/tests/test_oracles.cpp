// The oracles themselves, against frozen external numbers.

#include <cmath>
#include <numbers>

#include <doctest.h>

#include "oracles/expm2.hpp"
#include "oracles/frozen.hpp"
#include "oracles/lindblad.hpp"
#include "oracles/reduced_ode.hpp"

using namespace std::complex_literals;

TEST_CASE("expm2 matches diagonal and nilpotent closed forms")
{
  Eigen::Matrix2cd d = Eigen::Matrix2cd::Zero();
  d(0, 0) = 1.5 - 2.0i;
  d(1, 1) = -0.3 + 7.0i;
  const Eigen::Matrix2cd e = oracle::expm2(d);
  CHECK(std::abs(e(0, 0) - std::exp(d(0, 0))) < 1e-13);
  CHECK(std::abs(e(1, 1) - std::exp(d(1, 1))) < 1e-12);
  CHECK(std::abs(e(0, 1)) < 1e-14);

  Eigen::Matrix2cd n = Eigen::Matrix2cd::Zero();
  n(0, 1) = 3.0 + 1.0i;
  const Eigen::Matrix2cd en = oracle::expm2(n);
  CHECK(std::abs(en(0, 1) - n(0, 1)) < 1e-13);
  CHECK(std::abs(en(0, 0) - 1.0) < 1e-13);
}

TEST_CASE("reduced ODE oracle reproduces the frozen sigmoid run")
{
  const auto theta = [](double z) { return oracle::sigmoid_theta(z, 20.0, 2.0); };
  const auto samples =
    oracle::integrate_reduced(theta, -0.5i, oracle::Vec2(1.0, 0.0), 40.0, 8000, 1000);
  REQUIRE(samples.size() == 9);
  for (const auto& ref : frozen::sigmoid_z_bar_2) {
    const auto it = std::find_if(samples.begin(), samples.end(),
                                 [&](const auto& s) { return std::abs(s.z - ref.z) < 1e-9; });
    REQUIRE(it != samples.end());
    CHECK(std::norm(it->field(0)) == doctest::Approx(ref.i1).epsilon(2e-4).scale(1e-5));
    CHECK(std::norm(it->field(1)) == doctest::Approx(ref.i2).epsilon(2e-4));
  }
}

TEST_CASE("reduced ODE oracle: steep, slow and gaussian profiles")
{
  const auto run = [](auto theta) {
    return std::norm(
      oracle::integrate_reduced(theta, -0.5i, oracle::Vec2(1.0, 0.0), 40.0, 40000, 40000)
        .back()
        .field(1));
  };
  CHECK(run([](double z) { return oracle::sigmoid_theta(z, 20.0, 0.2); }) ==
        doctest::Approx(frozen::sigmoid_z_bar_02_final_i2).epsilon(1e-4));
  CHECK(run([](double z) { return oracle::sigmoid_theta(z, 20.0, 4.0); }) ==
        doctest::Approx(frozen::sigmoid_z_bar_4_final_i2).epsilon(1e-5));
  CHECK(run([](double z) { return oracle::gaussian_theta(z, 16.0, 40.0); }) ==
        doctest::Approx(frozen::gaussian_sigma_16_final_i2).epsilon(1e-5));
}

TEST_CASE("reduced ODE oracle at constant angle equals the plateau closed form")
{
  const auto samples = oracle::integrate_reduced([](double) { return std::numbers::pi / 4; },
                                                 -0.5i, oracle::Vec2(1.0, 0.0), 10.0, 2000,
                                                 100);
  for (const auto& s : samples) {
    if (std::abs(s.z - 2.0) < 1e-9) {
      CHECK(std::norm(s.field(1)) == doctest::Approx(frozen::constant_z2_i2).epsilon(1e-5));
    }
    for (const auto& ref : frozen::constant_quarter) {
      if (std::abs(s.z - ref.z) < 1e-9) {
        CHECK(std::norm(s.field(0)) == doctest::Approx(ref.i1).epsilon(1e-4));
        CHECK(std::norm(s.field(1)) == doctest::Approx(ref.i2).epsilon(1e-4));
      }
    }
  }
}

TEST_CASE("Lindblad oracle conserves trace and hermiticity")
{
  oracle::Mat4 rho = oracle::Mat4::Zero();
  rho(0, 0) = 1.0;
  const auto fields = [](double t) {
    return oracle::Fields{0.3 * std::exp(-0.01 * t * t), 0.1i, 1.0, 0.7};
  };
  const oracle::Mat4 out = oracle::evolve_lindblad(rho, fields, {1.0, 0.5}, 0.0, 20.0, 0.01);
  CHECK(std::abs(out.trace() - 1.0) < 1e-12);
  CHECK((out - out.adjoint()).norm() < 1e-12);
  for (int k = 0; k < 4; ++k) {
    CHECK(out(k, k).real() > -1e-12);
  }
}

TEST_CASE("finite-difference oracle on a closed form")
{
  CHECK(oracle::finite_difference([](double x) { return std::sin(x); }, 0.3, 1e-4) ==
        doctest::Approx(std::cos(0.3)).epsilon(1e-8));
}
