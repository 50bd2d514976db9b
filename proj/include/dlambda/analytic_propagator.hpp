#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "dlambda/control_profiles.hpp"
#include "dlambda/quantum_core.hpp"

namespace dlambda {

/// K = beta * P, P the projector onto the absorbing mode (cos, -sin).
struct PropagationMatrix
{
  Eigen::Matrix2cd k;
  MixingAngle theta;
  cplx beta;

  /// Real symmetric projector P.
  Eigen::Matrix2d projector() const;
  /// Lossless mode, eigenvalue 0.
  Eigen::Vector2d dark_mode() const { return {theta.sin(), theta.cos()}; }
  /// Absorbing mode, eigenvalue beta.
  Eigen::Vector2d bright_mode() const { return {theta.cos(), -theta.sin()}; }
};

PropagationMatrix propagation_matrix(const MixingAngle& theta,
                                     const MediumParams& params);

/// exp(-i K z) = I + (exp(-i beta z) - 1) P.
Eigen::Matrix2cd constant_transfer(const PropagationMatrix& k, double z);

/// U(z) and the propagation matrix in the local adiabatic basis.
struct AdiabaticTransform
{
  Eigen::Matrix2d u;        // [[sin, cos], [cos, -sin]], its own inverse
  Eigen::Matrix2cd k_tilde; // [[0, i theta'], [-i theta', beta]]
};

AdiabaticTransform adiabatic_transform(const ControlProfile& profile,
                                       const MediumParams& params, double z);

struct PropagationResult
{
  std::vector<double> z_grid;
  std::vector<RabiPair> fields;
  double efficiency = 0.0; // |Omega_p2(z_f)| / |input|
  double loss = 0.0;       // 1 - total intensity at z_f / input intensity
  std::vector<std::string> warnings;
};

PropagationResult propagate_constant(const MixingAngle& theta_c,
                                     const MediumParams& params,
                                     std::span<const double> z_grid,
                                     const RabiPair& input);

/// Amplitude conversion sin(theta) cos(theta); at most 1/2.
double max_constant_efficiency(const MixingAngle& theta_c);

enum class PhaseIntegration
{
  analytic,  // the diagonal of K-tilde is (0, beta) for every z
  quadrature // trapezoidal integral of the K-tilde diagonal along the grid
};

struct AdiabaticOptions
{
  PhaseIntegration phases = PhaseIntegration::analytic;
  /// The absorbing branch is dropped once |exp(-i beta (z - z_i))| falls
  /// below this.
  double long_distance_cutoff = 1e-3;
  /// Results carry a warning when the adiabaticity margin is not above this.
  double margin_warning = 1.0;
  std::size_t adiabaticity_grid = 2048;
};

/// U(z) W U(z_i)^-1 input with z_i = 0; nonadiabatic coupling neglected.
PropagationResult propagate_adiabatic(const ControlProfile& profile,
                                      const MediumParams& params,
                                      std::span<const double> z_grid,
                                      const RabiPair& input,
                                      const AdiabaticOptions& options = {});

/// |Omega_p2(z_f)| / input_amplitude.
double conversion_efficiency(const PropagationResult& result,
                             double input_amplitude);

} // namespace dlambda
