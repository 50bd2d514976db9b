#include <cmath>
#include <numbers>

#include <doctest.h>

#include "dlambda/errors.hpp"
#include "dlambda/quantum_core.hpp"
#include "oracles/frozen.hpp"

using namespace dlambda;
using std::numbers::pi;

TEST_CASE("MediumParams validates and derives L_abs")
{
  const MediumParams m(40.0, 40.0);
  CHECK(m.l_abs() == 1.0);
  CHECK(m.l_abs() * m.alpha() == m.length());
  CHECK_THROWS_AS(MediumParams(0.0, 1.0), ValidationError);
  CHECK_THROWS_AS(MediumParams(1.0, -1.0), ValidationError);
  CHECK_THROWS_AS(MediumParams(1.0, 1.0, 0.0), ValidationError);
  CHECK_THROWS_AS(MediumParams(1.0, 1.0, 1.0, std::nan("")), ValidationError);
  CHECK(m.with_delta(1.0).delta() == 1.0);
}

TEST_CASE("mixing_angle")
{
  CHECK(mixing_angle(1.0, 1.0).theta() == doctest::Approx(pi / 4));
  const MixingAngle edge = mixing_angle(1.0, 0.0);
  CHECK(edge.theta() == doctest::Approx(pi / 2));
  CHECK(edge.sin() == 1.0);
  CHECK(std::abs(edge.cos()) < 1e-16);

  const MixingAngle t = mixing_angle(3.0, 4.0);
  CHECK(t.theta() == doctest::Approx(0.6435011088));
  CHECK(t.sin() == doctest::Approx(0.6));
  CHECK(t.cos() == doctest::Approx(0.8));
  CHECK_THROWS_AS(mixing_angle(0.0, 0.0), DomainError);
  CHECK_THROWS_AS(mixing_angle(-1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(MixingAngle(2.0), ValidationError);
}

TEST_CASE("dark_state limits")
{
  const auto d = dark_state(MixingAngle(pi / 4));
  CHECK(d(0) == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(d(1) == doctest::Approx(-1 / std::sqrt(2.0)));
  CHECK(dark_state(MixingAngle(0.0))(0) == 1.0);
  CHECK(dark_state(MixingAngle(pi / 2))(1) == doctest::Approx(-1.0));
  CHECK(dark_state(MixingAngle(0.3)).norm() == doctest::Approx(1.0));
}

TEST_CASE("cpt_state_matrix")
{
  const DensityMatrix q = cpt_state_matrix(MixingAngle(pi / 4));
  CHECK(q(Level::g1, Level::g1).real() == doctest::Approx(0.5));
  CHECK(q(Level::g2, Level::g2).real() == doctest::Approx(0.5));
  CHECK(q(Level::g2, Level::g1).real() == doctest::Approx(-0.5));

  const DensityMatrix z = cpt_state_matrix(MixingAngle(0.0));
  CHECK(z(Level::g1, Level::g1) == 1.0);
  CHECK((z.matrix() - Eigen::Matrix4cd(z.matrix().diagonal().asDiagonal())).norm() == 0.0);

  // Outer product of the dark state at pi/6.
  const DensityMatrix s = cpt_state_matrix(MixingAngle(pi / 6));
  CHECK(s(Level::g1, Level::g1).real() == doctest::Approx(0.75));
  CHECK(s(Level::g2, Level::g2).real() == doctest::Approx(0.25));
  CHECK(s(Level::g2, Level::g1).real() == doctest::Approx(-std::sqrt(3.0) / 4));
  CHECK(s.is_hermitian());
  CHECK(std::abs(s.trace() - 1.0) < 1e-15);
  for (Level e : {Level::e1, Level::e2}) {
    CHECK(s(e, e) == 0.0);
    CHECK(s(e, Level::g1) == 0.0);
  }
}

TEST_CASE("beta")
{
  const cplx b0 = beta(MediumParams(40.0, 40.0));
  CHECK(b0.real() == 0.0);
  CHECK(b0.imag() == doctest::Approx(-0.5));

  const cplx b1 = beta(MediumParams(40.0, 40.0, 1.0, 1.0));
  CHECK(b1.real() == doctest::Approx(frozen::beta_delta1_re));
  CHECK(b1.imag() == doctest::Approx(frozen::beta_delta1_im));
  CHECK(beta(MediumParams(40.0, 40.0, 1.0, -0.4)).real() != 0.0);
}

TEST_CASE("RabiPair helpers")
{
  const RabiPair a{cplx(1.0, 2.0), cplx(0.0, -1.0)};
  CHECK(a.intensity() == doctest::Approx(6.0));
  CHECK(a.finite());
  CHECK_FALSE(RabiPair{cplx(std::nan(""), 0.0), {}}.finite());
  CHECK(RabiPair::from(a.vector()) == a);
}
