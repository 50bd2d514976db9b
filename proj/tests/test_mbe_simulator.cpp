#include <cmath>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "dlambda/errors.hpp"
#include "dlambda/mbe_simulator.hpp"
#include "oracles/frozen.hpp"
#include "oracles/reduced_ode.hpp"

using namespace dlambda;
using namespace std::complex_literals;
using std::numbers::pi;

namespace {

const MediumParams medium(40.0, 40.0);
const ControlProfile equal = ControlProfile::constant(1.0, 1.0, 40.0);

// Quarter-cost grid used throughout the unit tests.
SimGrid coarse()
{
  SimGrid g;
  g.nz = 200;
  g.dz = 0.2;
  g.dt = 0.02;
  g.t_window = 100.0;
  g.store_every = 5;
  return g;
}

std::vector<double> grid_z(const SimGrid& g)
{
  std::vector<double> z;
  for (std::size_t i = 0; i <= g.nz; ++i) {
    z.push_back(static_cast<double>(i) * g.dz);
  }
  return z;
}

} // namespace

TEST_CASE("validation of grids and pulses")
{
  const InputPulse pulse;
  SimGrid g = coarse();
  CHECK_NOTHROW(validate_simulation(equal, medium, g, pulse));
  g.dz = 0.4;
  g.nz = 100;
  CHECK_THROWS_AS(validate_simulation(equal, medium, g, pulse), ValidationError);
  g = coarse();
  g.nz = 199;
  CHECK_THROWS_AS(validate_simulation(equal, medium, g, pulse), ValidationError);
  g = coarse();
  g.dt = 0.06;
  CHECK_THROWS_AS(validate_simulation(equal, medium, g, pulse), ValidationError);
  g = coarse();
  g.t_window = 60.0;
  CHECK_THROWS_AS(validate_simulation(equal, medium, g, pulse), ValidationError);
  g = coarse();
  CHECK_THROWS_AS(validate_simulation(ControlProfile::constant(1, 1, 20.0), medium, g, pulse),
                  ValidationError);
  InputPulse strong;
  strong.amplitude = 0.2;
  CHECK(validate_simulation(equal, medium, coarse(), strong).size() == 1);
}

TEST_CASE("constant controls: plateaus and agreement with the closed form")
{
  const SimGrid g = coarse();
  const SpaceTimeRecord rec = simulate(equal, medium, g, InputPulse{});
  const IntensityCurves c = intensity_profile(rec);
  CHECK(c.p1.front() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.p2.front() == 0.0);
  for (std::size_t i = 0; i < c.z.size(); ++i) {
    if (c.z[i] >= 10.0) {
      CHECK(c.p1[i] == doctest::Approx(0.25).epsilon(0.02));
      CHECK(c.p2[i] == doctest::Approx(0.25).epsilon(0.02));
    }
  }
  const PropagationResult an =
    propagate_constant(MixingAngle(pi / 4), medium, grid_z(g), InputPulse{}.at(25.0));
  const DeviationReport dev = compare_analytic(rec, an, {0.01, 0.0});
  CHECK(dev.max() <= 0.02);
  CHECK(dev.mean_abs[0] <= dev.max_abs[0]);
}

TEST_CASE("sigmoid run follows the exact reduced ODE, not the adiabatic formula")
{
  const ControlProfile sig = ControlProfile::sigmoid(1.0, 20.0, 2.0, 40.0);
  const SpaceTimeRecord rec = simulate(sig, medium, coarse(), InputPulse{});
  const IntensityCurves c = intensity_profile(rec);
  for (const frozen::ZPoint& ref : frozen::sigmoid_z_bar_2) {
    const auto i = static_cast<std::size_t>(std::lround(ref.z / 0.2));
    CHECK(c.p1[i] == doctest::Approx(ref.i1).epsilon(0.01).scale(0.002));
    CHECK(c.p2[i] == doctest::Approx(ref.i2).epsilon(0.01).scale(0.002));
  }
}

TEST_CASE("gaussian run follows the exact reduced ODE")
{
  const ControlProfile g = ControlProfile::gaussian(1.0, 16.0, 40.0);
  const IntensityCurves c = intensity_profile(simulate(g, medium, coarse(), InputPulse{}));
  CHECK(c.p2.back() == doctest::Approx(frozen::gaussian_sigma_16_final_i2).epsilon(0.01));
}

TEST_CASE("zero input stays zero")
{
  InputPulse zero;
  zero.amplitude = 0.0;
  const SpaceTimeRecord rec = simulate(equal, medium, coarse(), zero);
  for (const RabiPair& f : rec.fields) {
    CHECK(f == RabiPair{});
  }
}

TEST_CASE("dark combination is transmitted")
{
  InputPulse dark;
  const MixingAngle th(pi / 4);
  dark.weights = {th.sin(), th.cos()};
  const SpaceTimeRecord rec = simulate(equal, medium, coarse(), dark);
  const IntensityCurves c = intensity_profile(rec);
  CHECK(c.p1.back() + c.p2.back() > 0.99);
}

TEST_CASE("record layout, reductions and lab times")
{
  SimOptions opts;
  opts.speed_of_light = 1e3;
  const SimGrid g = coarse();
  const SpaceTimeRecord rec = simulate(equal, medium, g, InputPulse{}, opts);
  CHECK(rec.z.size() == g.nz + 1);
  CHECK(rec.fields.size() == rec.z.size() * rec.t_stored.size());
  CHECK(rec.t_stored[1] - rec.t_stored[0] == doctest::Approx(g.dt * g.store_every));
  CHECK(rec.lab_time(200, 0) == doctest::Approx(40.0 / 1e3));
  CHECK(rec.input_peak == doctest::Approx(1e-4).epsilon(1e-9));

  const IntensityCurves peak = intensity_profile(rec, Reduction::peak_amplitude);
  CHECK(peak.p1.front() == doctest::Approx(1.0));
  CHECK(peak.p1.back() == doctest::Approx(0.25).epsilon(0.03));
}

TEST_CASE("the speed of light drops out in the retarded frame")
{
  SimOptions fast;
  fast.speed_of_light = 3e5;
  SimOptions faster;
  faster.speed_of_light = 3e6;
  const SpaceTimeRecord a = simulate(equal, medium, coarse(), InputPulse{}, fast);
  const SpaceTimeRecord b = simulate(equal, medium, coarse(), InputPulse{}, faster);
  CHECK(a.fields == b.fields);
}

TEST_CASE("linearity in the probe amplitude")
{
  InputPulse half;
  half.amplitude = 0.005;
  const SpaceTimeRecord a = simulate(equal, medium, coarse(), half);
  const SpaceTimeRecord b = simulate(equal, medium, coarse(), InputPulse{});
  const std::size_t last = a.z.size() - 1;
  const RabiPair fa = a.at_input_peak[last];
  const RabiPair fb = b.at_input_peak[last];
  CHECK(std::abs(fb.p1 / fa.p1 - 2.0) < 0.02);
  CHECK(std::abs(fb.p2 / fa.p2 - 2.0) < 0.02);
}

TEST_CASE("losses happen at the entrance")
{
  const IntensityCurves c = intensity_profile(simulate(equal, medium, coarse(), InputPulse{}));
  const double total_loss = 1.0 - (c.p1.back() + c.p2.back());
  const std::size_t i5 = 25;
  const double early_loss = 1.0 - (c.p1[i5] + c.p2[i5]);
  CHECK(early_loss >= 0.9 * total_loss);
}

TEST_CASE("detuned constant controls give non-monotonic channels")
{
  const IntensityCurves c =
    intensity_profile(simulate(equal, medium.with_delta(1.0), coarse(), InputPulse{}));
  bool rise_after_fall = false;
  for (std::size_t i = 1; i + 1 < c.p1.size(); ++i) {
    if (c.p1[i] < c.p1[i - 1] && c.p1[i] < c.p1[i + 1]) {
      rise_after_fall = true;
    }
  }
  CHECK(rise_after_fall);
}

TEST_CASE("curve comparison requires matching grids")
{
  IntensityCurves a{{0, 1}, {1, 0.5}, {0, 0.5}};
  IntensityCurves b{{0, 1, 2}, {1, 0.5, 0.2}, {0, 0.5, 0.2}};
  CHECK_THROWS_AS(compare_curves(a, b), ValidationError);
  const DeviationReport same = compare_curves(a, a);
  CHECK(same.max() == 0.0);
}

TEST_CASE("transfer factors carry modulus and phase")
{
  const SpaceTimeRecord rec = simulate(equal, medium, coarse(), InputPulse{});
  const std::vector<RabiPair> f = transfer_factors(rec);
  CHECK(std::abs(f.front().p1 - 1.0) < 1e-9);
  CHECK(std::abs(f.back().p1) == doctest::Approx(0.5).epsilon(0.02));
  CHECK(std::abs(f.back().p2) == doctest::Approx(0.5).epsilon(0.02));
  // The closed form gives Omega_p2 -> +Omega/2 at resonance.
  CHECK(f.back().p2.real() > 0.45);
}
