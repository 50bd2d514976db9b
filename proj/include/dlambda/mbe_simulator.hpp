#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dlambda/analytic_propagator.hpp"
#include "dlambda/control_profiles.hpp"
#include "dlambda/obe_integrator.hpp"
#include "dlambda/quantum_core.hpp"

namespace dlambda {

/// Space-time discretisation in the retarded frame t' = t - z/c.
struct SimGrid
{
  std::size_t nz = 400;  // number of z cells
  double dz = 0.1;       // same length unit as MediumParams::length()
  double dt = 0.01;      // units of 1/Gamma
  double t_window = 100; // units of 1/Gamma
  /// Keep every n-th time sample of the field record.
  std::size_t store_every = 10;

  std::size_t nt() const;
};

/// Gaussian probe pulse entering at z = 0,
/// amplitude * exp(-(t - t0)^2 / (2 width^2)), split over the two probe
/// channels by `weights`.
struct InputPulse
{
  double amplitude = 0.01;
  double t0 = 25.0;
  double width = 10.0;
  RabiPair weights{1.0, 0.0};

  RabiPair at(double t) const;
};

struct SimOptions
{
  /// Only used to map retarded times back to lab times in the record.
  double speed_of_light = std::numeric_limits<double>::infinity();
  std::optional<DecayConfig> decay;
};

/// Throws ValidationError for any grid or pulse violating the simulator's
/// resolution requirements; returns non-fatal warnings.
std::vector<std::string> validate_simulation(const ControlProfile& profile,
                                             const MediumParams& params,
                                             const SimGrid& grid,
                                             const InputPulse& pulse);

/// Probe fields on the (z, t') grid plus full-resolution reductions.
struct SpaceTimeRecord
{
  std::vector<double> z;        // nz + 1 positions
  std::vector<double> t_stored; // retarded times of the stored samples
  std::vector<RabiPair> fields; // [iz * t_stored.size() + it]
  /// Integral over t' of |Omega_p1|^2 and |Omega_p2|^2 at every z.
  std::vector<std::array<double, 2>> energy;
  /// max over t' of |Omega_p1|^2 and |Omega_p2|^2 at every z.
  std::vector<std::array<double, 2>> peak;
  /// Field at the time sample where the input intensity peaks.
  std::vector<RabiPair> at_input_peak;
  double input_energy = 0.0; // over both channels at z = 0
  double input_peak = 0.0;
  RabiPair input_at_peak;
  double speed_of_light = std::numeric_limits<double>::infinity();
  std::vector<std::string> warnings;

  const RabiPair& field(std::size_t iz, std::size_t it) const
  {
    return fields[iz * t_stored.size() + it];
  }
  double lab_time(std::size_t iz, std::size_t it) const
  {
    return t_stored[it] + z[iz] / speed_of_light;
  }
};

/// Marches the probe pair slab by slab through the medium. Each slab
/// integrates the full Bloch equations along t' starting from the local
/// dark state and advances the fields with a predictor-corrector step of
/// dOmega/dz = i alpha Gamma / (2 L) rho_e2g.
SpaceTimeRecord simulate(const ControlProfile& profile,
                         const MediumParams& params, const SimGrid& grid,
                         const InputPulse& pulse, const SimOptions& options = {});

enum class Reduction
{
  pulse_energy,
  peak_amplitude
};

/// Normalised intensities |Omega_p1|^2/|Omega|^2 and |Omega_p2|^2/|Omega|^2.
struct IntensityCurves
{
  std::vector<double> z;
  std::vector<double> p1;
  std::vector<double> p2;
};

IntensityCurves intensity_profile(const SpaceTimeRecord& record,
                                  Reduction reduction = Reduction::pulse_energy);

/// Same normalisation for an analytic result (by the input intensity).
IntensityCurves intensity_curves(const PropagationResult& analytic,
                                 const RabiPair& input);

struct DeviationReport
{
  std::array<double, 2> max_abs{};
  std::array<double, 2> mean_abs{};

  double max() const { return std::max(max_abs[0], max_abs[1]); }
};

/// Per-channel deviation between two curve sets on the same z grid.
DeviationReport compare_curves(const IntensityCurves& numeric,
                               const IntensityCurves& analytic);

DeviationReport compare_analytic(const SpaceTimeRecord& record,
                                 const PropagationResult& analytic,
                                 const RabiPair& input,
                                 Reduction reduction = Reduction::pulse_energy);

/// Complex per-z factors (Omega_p1, Omega_p2) / Omega for the transverse
/// maps: modulus from the energy ratio, phase from the sample at the input
/// peak.
std::vector<RabiPair> transfer_factors(const SpaceTimeRecord& record);

} // namespace dlambda
