#include "dlambda/quantum_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "dlambda/errors.hpp"

namespace dlambda {

MediumParams::MediumParams(double alpha, double length, double gamma,
                           double delta)
  : alpha_(alpha), length_(length), gamma_(gamma), delta_(delta)
{
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ValidationError(fmt::format("optical depth must be > 0, got {}", alpha));
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw ValidationError(fmt::format("medium length must be > 0, got {}", length));
  }
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw ValidationError(fmt::format("decay rate must be > 0, got {}", gamma));
  }
  if (!std::isfinite(delta)) {
    throw ValidationError("detuning must be finite");
  }
}

MediumParams MediumParams::with_delta(double delta) const
{
  return MediumParams(alpha_, length_, gamma_, delta);
}

MixingAngle::MixingAngle(double theta, AngleProvenance provenance,
                         std::optional<double> z)
  : theta_(theta), provenance_(provenance), z_(z)
{
  constexpr double half_pi = std::numbers::pi / 2.0;
  if (!(theta >= -1e-15 && theta <= half_pi + 1e-15)) {
    throw ValidationError(
      fmt::format("mixing angle {} outside [0, pi/2]", theta));
  }
  theta_ = std::clamp(theta, 0.0, half_pi);
  sin_ = std::sin(theta_);
  cos_ = std::cos(theta_);
}

bool RabiPair::finite() const
{
  return std::isfinite(p1.real()) && std::isfinite(p1.imag()) &&
         std::isfinite(p2.real()) && std::isfinite(p2.imag());
}

bool DensityMatrix::is_hermitian(double tol) const
{
  return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

MixingAngle mixing_angle(double omega_c1, double omega_c2)
{
  if (!(omega_c1 >= 0.0) || !(omega_c2 >= 0.0)) {
    throw ValidationError(fmt::format(
      "control amplitudes must be non-negative, got ({}, {})", omega_c1,
      omega_c2));
  }
  if (omega_c1 == 0.0 && omega_c2 == 0.0) {
    throw DomainError("both control amplitudes vanish: dark state undefined");
  }
  return MixingAngle(std::atan2(omega_c1, omega_c2));
}

Eigen::Vector2d dark_state(const MixingAngle& theta)
{
  return {theta.cos(), -theta.sin()};
}

DensityMatrix cpt_state_matrix(const MixingAngle& theta)
{
  const Eigen::Vector2d d = dark_state(theta);
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  rho.topLeftCorner<2, 2>() = (d * d.transpose()).cast<cplx>();
  return DensityMatrix(rho);
}

cplx beta(const MediumParams& params)
{
  const double g = params.gamma();
  return params.alpha() * g /
         (2.0 * params.length() * cplx(-params.delta(), g));
}

} // namespace dlambda
