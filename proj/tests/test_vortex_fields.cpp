#include <cmath>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "dlambda/analytic_propagator.hpp"
#include "dlambda/errors.hpp"
#include "dlambda/vortex_fields.hpp"

using namespace dlambda;
using namespace std::complex_literals;
using std::numbers::pi;

TEST_CASE("vortex amplitude and core")
{
  CHECK(vortex_amplitude(1, 20.0, 1.0, 0.0, 0.3) == 0.0);
  CHECK(std::abs(vortex_amplitude(0, 20.0, 1.0, 0.0, 0.0)) == 1.0);
  CHECK(peak_radius(1, 20.0) == doctest::Approx(14.1421356));
  CHECK(peak_radius(0, 20.0) == 0.0);

  // Numerical maximisation of the l = 1 radial intensity.
  double best_r = 0.0, best = 0.0;
  for (double r = 0.0; r < 60.0; r += 1e-3) {
    const double v = std::norm(vortex_amplitude(1, 20.0, 1.0, r, 0.0));
    if (v > best) {
      best = v;
      best_r = r;
    }
  }
  CHECK(best_r == doctest::Approx(20.0 / std::sqrt(2.0)).epsilon(1e-4));
}

TEST_CASE("l = 0 sampled map peaks on axis")
{
  MapGrid g{65, 3.0};
  const TransverseField f = make_vortex(0, 20.0, 1.0, g);
  double best = 0.0;
  std::size_t bx = 0, by = 0;
  for (std::size_t y = 0; y < f.size(); ++y) {
    for (std::size_t x = 0; x < f.size(); ++x) {
      if (std::abs(f.value(x, y)) > best) {
        best = std::abs(f.value(x, y));
        bx = x;
        by = y;
      }
    }
  }
  CHECK(bx == 32);
  CHECK(by == 32);
  CHECK(f.coord(32) == doctest::Approx(0.0));
}

TEST_CASE("make_vortex preconditions")
{
  CHECK_THROWS_AS(make_vortex(1, 0.0, 1.0), ValidationError);
  CHECK_THROWS_AS(make_vortex(1, 20.0, 1.0, MapGrid{32, 3.0}), ValidationError);
  CHECK_NOTHROW(make_vortex(1, 20.0, 1.0, MapGrid{49, 3.0}));
}

TEST_CASE("winding numbers")
{
  const MapGrid g{129, 3.0};
  for (int l : {-3, -2, -1, 0, 1, 2, 3, 4}) {
    const TransverseField f = make_vortex(l, 20.0, 1.0, g);
    const WindingResult w = winding_number(f, 20.0);
    CHECK(w.defined);
    CHECK(w.winding == l);
    CHECK(w.total_phase == doctest::Approx(2 * pi * l).epsilon(1e-6).scale(1e-9));
  }
  const WindingResult empty = winding_number(make_vortex(1, 20.0, 0.0, g), 20.0);
  CHECK_FALSE(empty.defined);
}

TEST_CASE("intensity rings are rotationally symmetric")
{
  const TransverseField f = make_vortex(2, 20.0, 1.0);
  for (double r : {5.0, 14.0, 28.0}) {
    double lo = 1e300, hi = 0.0;
    for (int k = 0; k < 360; ++k) {
      const double v = std::abs(f.at(r, 2 * pi * k / 360.0));
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    CHECK(hi - lo < 1e-10);
  }
}

TEST_CASE("sampling and energy")
{
  const TransverseField f = make_vortex(1, 20.0, 1.0);
  const double x = f.coord(100), y = f.coord(77);
  CHECK(std::abs(f.sample(x, y) - f.value(100, 77)) < 1e-14);
  // Integral of (r/w)^2 e^{-2 r^2 / w^2} over the plane is pi w^2 / 4.
  CHECK(f.energy() == doctest::Approx(pi * 400.0 / 4.0).epsilon(1e-3));
  CHECK(f.scaled(0.5).energy() == doctest::Approx(0.25 * f.energy()));
}

TEST_CASE("propagate_transverse")
{
  const TransverseField f = make_vortex(1, 20.0, 1.0, MapGrid{129, 3.0});
  const std::vector<double> z{0.0, 40.0};
  const std::vector<RabiPair> unit{{1.0, 0.0}, {0.5, 0.5}};
  const auto out = propagate_transverse(f, z, unit);
  REQUIRE(out.size() == 2);
  for (std::size_t k = 0; k < f.values().size(); ++k) {
    CHECK(out[0].p1.values()[k] == f.values()[k]);
    CHECK(out[0].p2.values()[k] == 0.0);
    CHECK(out[1].p1.values()[k] == out[1].p2.values()[k]);
  }
  CHECK(out[1].p2.energy() == doctest::Approx(0.25 * f.energy()));
  CHECK(winding_number(out[1].p2, 20.0).winding == 1);
  CHECK_THROWS_AS(propagate_transverse(f, z, std::vector<RabiPair>{{1, 0}}), ValidationError);
}

TEST_CASE("global phase commutes with transverse propagation")
{
  const TransverseField f = make_vortex(2, 20.0, 1.0, MapGrid{129, 3.0});
  const cplx rot = std::polar(1.0, 0.7);
  const std::vector<double> z{10.0};
  const std::vector<RabiPair> fac{{0.3 - 0.1i, 0.6i}};
  const auto a = propagate_transverse(f.scaled(rot), z, fac);
  const auto b = propagate_transverse(f, z, fac);
  for (std::size_t k = 0; k < f.values().size(); k += 97) {
    CHECK(std::abs(a[0].p1.values()[k] - rot * b[0].p1.values()[k]) < 1e-15);
    CHECK(std::abs(a[0].p2.values()[k] - rot * b[0].p2.values()[k]) < 1e-15);
  }
}

TEST_CASE("adiabatic sigmoid factors transfer the vortex")
{
  const MediumParams m(40.0, 40.0);
  const ControlProfile sig = ControlProfile::sigmoid(1.0, 20.0, 2.0, 40.0);
  const std::vector<double> z{0.0, 40.0};
  const PropagationResult r = propagate_adiabatic(sig, m, z, {1.0, 0.0});
  const TransverseField f = make_vortex(1, 20.0, 1.0, MapGrid{129, 3.0});
  const auto out = propagate_transverse(f, z, r.fields);
  CHECK(winding_number(out[1].p2, 20.0).winding == 1);
  CHECK(out[1].p2.energy() >= 0.95 * f.energy());
}

TEST_CASE("diffraction check")
{
  const DiffractionCheck ok = diffraction_check(100.0, 20.0, 1.0);
  CHECK(ok.figure_of_merit == doctest::Approx(0.25));
  CHECK(ok.status == DiffractionStatus::pass);
  const DiffractionCheck bad = diffraction_check(100.0, 5.0, 1.0);
  CHECK(bad.figure_of_merit == doctest::Approx(4.0));
  CHECK(bad.status == DiffractionStatus::fail);
  CHECK_FALSE(bad.passed());
  CHECK(diffraction_check(100.0, 10.0, 1.0).status == DiffractionStatus::warn);
  const DiffractionCheck tiny = diffraction_check(1e-12, 20.0, 1.0);
  CHECK(tiny.figure_of_merit < 1e-14);
  CHECK(tiny.status == DiffractionStatus::pass);
  CHECK(to_string(DiffractionStatus::pass) == "pass");
  CHECK_THROWS_AS(diffraction_check(0.0, 20.0, 1.0), ValidationError);
}
