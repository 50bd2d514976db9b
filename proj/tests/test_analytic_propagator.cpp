#include <cmath>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "dlambda/analytic_propagator.hpp"
#include "dlambda/errors.hpp"
#include "oracles/expm2.hpp"
#include "oracles/frozen.hpp"
#include "oracles/reduced_ode.hpp"

using namespace dlambda;
using namespace std::complex_literals;
using std::numbers::pi;

namespace {

const MediumParams medium(40.0, 40.0);

std::vector<double> grid(double length, int n)
{
  std::vector<double> z;
  for (int i = 0; i <= n; ++i) {
    z.push_back(length * i / n);
  }
  return z;
}

} // namespace

TEST_CASE("propagation matrix structure")
{
  const PropagationMatrix k = propagation_matrix(MixingAngle(0.4), medium);
  CHECK((k.k * k.k - k.beta * k.k).norm() < 1e-14);
  CHECK((k.k * k.dark_mode().cast<cplx>()).norm() < 1e-15);
  CHECK((k.k * k.bright_mode().cast<cplx>() - k.beta * k.bright_mode().cast<cplx>()).norm() <
        1e-15);
  CHECK((k.projector() - k.projector().transpose()).norm() == 0.0);
}

TEST_CASE("constant transfer equals the matrix exponential")
{
  const PropagationMatrix k = propagation_matrix(MixingAngle(1.1), medium.with_delta(0.7));
  for (double z : {0.0, 0.5, 3.0, 17.0}) {
    const Eigen::Matrix2cd ref = oracle::expm2(-1i * k.k * z);
    CHECK((constant_transfer(k, z) - ref).norm() < 1e-12);
  }
}

TEST_CASE("propagate_constant at theta = pi/4")
{
  const auto z = grid(40.0, 400);
  const PropagationResult r = propagate_constant(MixingAngle(pi / 4), medium, z, {1.0, 0.0});
  CHECK(r.fields.front() == RabiPair{1.0, 0.0});
  CHECK(std::norm(r.fields[20].p2) == doctest::Approx(frozen::constant_z2_i2).epsilon(1e-6));
  CHECK(std::norm(r.fields[50].p1) == doctest::Approx(frozen::constant_quarter[0].i1).epsilon(1e-4));
  CHECK(std::norm(r.fields.back().p1) == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(std::norm(r.fields.back().p2) == doctest::Approx(0.25).epsilon(1e-9));
  // Sign of the generated field follows the closed form: -Omega s c (e^{-i beta z} - 1).
  CHECK(r.fields.back().p2.real() == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(r.efficiency == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(r.loss == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(conversion_efficiency(r, 1.0) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("max_constant_efficiency")
{
  CHECK(max_constant_efficiency(MixingAngle(pi / 4)) == doctest::Approx(0.5));
  CHECK(max_constant_efficiency(MixingAngle(0.0)) == 0.0);
  CHECK(max_constant_efficiency(MixingAngle(pi / 6)) == doctest::Approx(std::sqrt(3.0) / 4));
}

TEST_CASE("conversion_efficiency rejects a zero input")
{
  const PropagationResult r =
    propagate_constant(MixingAngle(pi / 4), medium, grid(40.0, 4), {1.0, 0.0});
  CHECK_THROWS_AS(conversion_efficiency(r, 0.0), ValidationError);
  CHECK_THROWS_AS(conversion_efficiency(PropagationResult{}, 1.0), ValidationError);
}

TEST_CASE("adiabatic transform")
{
  const ControlProfile sig = ControlProfile::sigmoid(1.0, 20.0, 2.0, 40.0);
  for (double z : {0.0, 11.0, 20.0, 33.3}) {
    const AdiabaticTransform t = adiabatic_transform(sig, medium, z);
    CHECK((t.u * t.u - Eigen::Matrix2d::Identity()).norm() < 1e-15);
    CHECK((t.u - t.u.transpose()).norm() == 0.0);
    CHECK(std::abs(t.k_tilde(0, 0)) < 1e-15);
    CHECK(std::abs(t.k_tilde(1, 1) - beta(medium)) < 1e-15);
    CHECK(std::abs(t.k_tilde(0, 1)) == doctest::Approx(std::abs(theta_prime(sig, z))));
  }
  CHECK(std::abs(adiabatic_transform(sig, medium, 20.0).k_tilde(0, 1)) ==
        doctest::Approx(0.125));
  const AdiabaticTransform c =
    adiabatic_transform(ControlProfile::constant(1, 2, 40.0), medium, 5.0);
  CHECK(std::abs(c.k_tilde(0, 1)) == 0.0);
}

TEST_CASE("adiabatic solution reaches unit conversion for the sigmoid")
{
  const ControlProfile sig = ControlProfile::sigmoid(1.0, 20.0, 2.0, 40.0);
  const PropagationResult r = propagate_adiabatic(sig, medium, grid(40.0, 400), {1.0, 0.0});
  CHECK(r.efficiency > 1 - 1e-4);
  CHECK(std::abs(r.efficiency - theta_of_z(sig, 0.0).sin() * theta_of_z(sig, 40.0).cos()) < 1e-9);
  CHECK(r.warnings.empty());
}

TEST_CASE("adiabatic solution for the gaussian")
{
  const ControlProfile g = ControlProfile::gaussian(1.0, 16.0, 40.0);
  const PropagationResult r = propagate_adiabatic(g, medium, grid(40.0, 400), {1.0, 0.0});
  CHECK(r.efficiency >= 0.99);
  CHECK(r.efficiency >= 1 - 2 * std::exp(-12.5));
}

TEST_CASE("adiabatic error against the exact reduced ODE shrinks for slower profiles")
{
  const auto gap = [](double z_bar, double exact) {
    const ControlProfile p = ControlProfile::sigmoid(1.0, 20.0, z_bar, 40.0);
    const PropagationResult r = propagate_adiabatic(p, medium, grid(40.0, 40), {1.0, 0.0});
    return std::norm(r.fields.back().p2) - exact;
  };
  const double g2 = gap(2.0, frozen::sigmoid_z_bar_2[4].i2);
  const double g4 = gap(4.0, frozen::sigmoid_z_bar_4_final_i2);
  CHECK(g2 > 0.0);
  CHECK(g4 > 0.0);
  CHECK(g4 < g2);
}

TEST_CASE("adiabatic solution warns on weak margins")
{
  const ControlProfile steep = ControlProfile::sigmoid(1.0, 20.0, 0.2, 40.0);
  const PropagationResult r = propagate_adiabatic(steep, medium, grid(40.0, 40), {1.0, 0.0});
  REQUIRE(r.warnings.size() == 1);
  CHECK(r.warnings.front().find("margin") != std::string::npos);
}

TEST_CASE("constant profile: adiabatic path equals the closed form")
{
  const ControlProfile c = ControlProfile::constant(1.0, 1.0, 40.0);
  const auto z = grid(40.0, 400);
  const RabiPair in{0.3 - 0.2i, 0.1};
  AdiabaticOptions exact;
  exact.long_distance_cutoff = 0.0;
  const PropagationResult a = propagate_adiabatic(c, medium, z, in, exact);
  const PropagationResult b = propagate_constant(MixingAngle(pi / 4), medium, z, in);
  for (std::size_t i = 0; i < z.size(); ++i) {
    CHECK(std::abs(a.fields[i].p1 - b.fields[i].p1) < 1e-10);
    CHECK(std::abs(a.fields[i].p2 - b.fields[i].p2) < 1e-10);
  }
}

TEST_CASE("quadrature and analytic W phases agree")
{
  const ControlProfile sig = ControlProfile::sigmoid(1.0, 20.0, 2.0, 40.0);
  AdiabaticOptions q;
  q.phases = PhaseIntegration::quadrature;
  const auto z = grid(40.0, 400);
  const PropagationResult a = propagate_adiabatic(sig, medium, z, {1.0, 0.0});
  const PropagationResult b = propagate_adiabatic(sig, medium, z, {1.0, 0.0}, q);
  for (std::size_t i = 0; i < z.size(); ++i) {
    CHECK(std::abs(a.fields[i].p2 - b.fields[i].p2) < 1e-10);
  }
}

TEST_CASE("grids outside the medium are rejected")
{
  const std::vector<double> bad{0.0, 41.0};
  CHECK_THROWS_AS(propagate_constant(MixingAngle(0.3), medium, bad, {1.0, 0.0}), DomainError);
}
