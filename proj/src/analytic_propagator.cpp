#include "dlambda/analytic_propagator.hpp"

#include <cmath>

#include <fmt/format.h>

#include "dlambda/errors.hpp"

namespace dlambda {

namespace {

using namespace std::complex_literals;

void check_grid(std::span<const double> z_grid, double length)
{
  if (z_grid.empty()) {
    throw ValidationError("propagation grid is empty");
  }
  const double tol = 1e-9 * length;
  for (std::size_t i = 0; i < z_grid.size(); ++i) {
    if (!(z_grid[i] >= -tol && z_grid[i] <= length + tol)) {
      throw DomainError(fmt::format("grid point z = {} outside [0, {}]",
                                    z_grid[i], length));
    }
    if (i > 0 && z_grid[i] < z_grid[i - 1]) {
      throw ValidationError("propagation grid must be non-decreasing");
    }
  }
}

void finish(PropagationResult& result, const RabiPair& input)
{
  const double in = input.intensity();
  const RabiPair& last = result.fields.back();
  if (in > 0.0) {
    result.efficiency = std::abs(last.p2) / std::sqrt(in);
    result.loss = 1.0 - last.intensity() / in;
  }
}

} // namespace

Eigen::Matrix2d PropagationMatrix::projector() const
{
  const Eigen::Vector2d b = bright_mode();
  return b * b.transpose();
}

PropagationMatrix propagation_matrix(const MixingAngle& theta,
                                     const MediumParams& params)
{
  const cplx b = beta(params);
  const double s = theta.sin();
  const double c = theta.cos();
  Eigen::Matrix2cd k;
  k << b * c * c, -b * s * c, -b * s * c, b * s * s;
  return {k, theta, b};
}

Eigen::Matrix2cd constant_transfer(const PropagationMatrix& k, double z)
{
  const cplx decay = std::exp(-1i * k.beta * z) - 1.0;
  return Eigen::Matrix2cd::Identity() + decay * k.projector().cast<cplx>();
}

AdiabaticTransform adiabatic_transform(const ControlProfile& profile,
                                       const MediumParams& params, double z)
{
  const MixingAngle theta = theta_of_z(profile, z);
  const double s = theta.sin();
  const double c = theta.cos();
  const double dtheta = theta_prime(profile, z);

  AdiabaticTransform t;
  t.u << s, c, c, -s;
  // -i U^-1 dU/dz evaluates to [[0, i theta'], [-i theta', 0]]; U^-1 K U is
  // diag(0, beta).
  const Eigen::Matrix2cd k = propagation_matrix(theta, params).k;
  const Eigen::Matrix2cd uc = t.u.cast<cplx>();
  Eigen::Matrix2d du;
  du << c, -s, -s, -c;
  du *= dtheta;
  t.k_tilde = -1i * (uc * du.cast<cplx>()) + uc * k * uc;
  return t;
}

PropagationResult propagate_constant(const MixingAngle& theta_c,
                                     const MediumParams& params,
                                     std::span<const double> z_grid,
                                     const RabiPair& input)
{
  check_grid(z_grid, params.length());
  const PropagationMatrix k = propagation_matrix(theta_c, params);
  const Eigen::Vector2cd in = input.vector();

  PropagationResult result;
  result.z_grid.assign(z_grid.begin(), z_grid.end());
  result.fields.reserve(z_grid.size());
  for (double z : z_grid) {
    result.fields.push_back(RabiPair::from(constant_transfer(k, z) * in));
  }
  finish(result, input);
  return result;
}

double max_constant_efficiency(const MixingAngle& theta_c)
{
  return theta_c.sin() * theta_c.cos();
}

PropagationResult propagate_adiabatic(const ControlProfile& profile,
                                      const MediumParams& params,
                                      std::span<const double> z_grid,
                                      const RabiPair& input,
                                      const AdiabaticOptions& options)
{
  check_grid(z_grid, params.length());
  PropagationResult result;
  result.z_grid.assign(z_grid.begin(), z_grid.end());
  result.fields.reserve(z_grid.size());

  const AdiabaticityReport report =
    adiabaticity_report(profile, params, options.adiabaticity_grid);
  if (report.bounded() && report.margin <= options.margin_warning) {
    result.warnings.push_back(fmt::format(
      "adiabaticity margin {:.4g} <= {:.4g} (max |theta'| = {:.4g} at z = {:.4g})",
      report.margin, options.margin_warning, report.lhs_max, report.worst_z));
  }

  const double z_i = 0.0;
  const Eigen::Matrix2d u_i = adiabatic_transform(profile, params, z_i).u;
  const Eigen::Vector2cd adiabatic_in = u_i.cast<cplx>() * input.vector();

  // Running integrals of the K-tilde diagonal for the quadrature path.
  cplx phase1 = 0.0;
  cplx phase2 = 0.0;
  double z_prev = z_i;
  Eigen::Matrix2cd k_prev = adiabatic_transform(profile, params, z_i).k_tilde;

  const cplx b = beta(params);
  for (double z : z_grid) {
    const AdiabaticTransform t = adiabatic_transform(profile, params, z);
    cplx w1;
    cplx w2;
    if (options.phases == PhaseIntegration::analytic) {
      w1 = 1.0;
      w2 = std::exp(-1i * b * (z - z_i));
    } else {
      const double h = z - z_prev;
      phase1 += 0.5 * h * (k_prev(0, 0) + t.k_tilde(0, 0));
      phase2 += 0.5 * h * (k_prev(1, 1) + t.k_tilde(1, 1));
      z_prev = z;
      k_prev = t.k_tilde;
      w1 = std::exp(-1i * phase1);
      w2 = std::exp(-1i * phase2);
    }
    if (std::abs(w2) < options.long_distance_cutoff) {
      w2 = 0.0;
    }
    const Eigen::Vector2cd weighted(w1 * adiabatic_in(0), w2 * adiabatic_in(1));
    result.fields.push_back(RabiPair::from(t.u.cast<cplx>() * weighted));
  }
  finish(result, input);
  return result;
}

double conversion_efficiency(const PropagationResult& result,
                             double input_amplitude)
{
  if (result.fields.empty()) {
    throw ValidationError("propagation result has no samples");
  }
  if (!(input_amplitude > 0.0)) {
    throw ValidationError("input amplitude must be > 0 for a conversion efficiency");
  }
  return std::abs(result.fields.back().p2) / input_amplitude;
}

} // namespace dlambda
