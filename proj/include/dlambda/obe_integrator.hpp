#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "dlambda/control_profiles.hpp"
#include "dlambda/quantum_core.hpp"

namespace dlambda {

/// Rates for the six independent coherences (decay or detuning).
struct CoherenceRates
{
  double e2g1 = 0.0;
  double e2g2 = 0.0;
  double e2e1 = 0.0;
  double e1g1 = 0.0;
  double e1g2 = 0.0;
  double g2g1 = 0.0;
};

/// Spontaneous decay rates gamma_{e_i -> g_j}.
struct PopulationRates
{
  double e1g1 = 0.0;
  double e1g2 = 0.0;
  double e2g1 = 0.0;
  double e2g2 = 0.0;
};

struct DecayConfig
{
  PopulationRates gamma;
  CoherenceRates dephasing;
  CoherenceRates detuning;

  /// All four decay channels at Gamma, optical coherences at Gamma, the
  /// excited-excited coherence at 2 Gamma, no ground-state dephasing; the
  /// detuning delta enters only the two probe coherences.
  static DecayConfig standard(const MediumParams& params);

  /// Throws ValidationError on negative or non-finite rates.
  void validate() const;
};

/// The nine independently evolved density-matrix elements. rho_e1e1 follows
/// from the unit trace, the remaining elements from Hermiticity. The same
/// layout holds time derivatives.
struct BlochState
{
  cplx e2g1{};
  cplx e2g2{};
  cplx e2e1{};
  cplx e1g1{};
  cplx e1g2{};
  cplx g2g1{};
  double g1g1 = 0.0;
  double g2g2 = 0.0;
  double e2e2 = 0.0;

  double e1e1() const { return 1.0 - g1g1 - g2g2 - e2e2; }

  static BlochState from(const DensityMatrix& rho);
  DensityMatrix density_matrix() const;
  bool finite() const;

  BlochState& operator+=(const BlochState& o);
  BlochState& operator*=(double s);
  friend BlochState operator+(BlochState a, const BlochState& b) { return a += b; }
  friend BlochState operator*(double s, BlochState a) { return a *= s; }
};

using BlochDerivative = BlochState;

/// Time derivative of the nine elements for local probe and (real) control
/// fields, with the conjugate elements restored from Hermiticity.
BlochDerivative bloch_rhs(const BlochState& state, const RabiPair& probes,
                          const ControlAmplitudes& controls,
                          const DecayConfig& decay);

/// d/dt of (rho_g1g1, rho_g2g2, rho_e1e1, rho_e2e2), the e1e1 rate taken from
/// its own Liouville equation rather than from trace closure.
std::array<double, 4> population_rates(const BlochState& state,
                                       const RabiPair& probes,
                                       const ControlAmplitudes& controls,
                                       const DecayConfig& decay);

struct LocalFields
{
  RabiPair probes;
  ControlAmplitudes controls;
};

using FieldSource = std::function<LocalFields(double t)>;

struct EvolveOptions
{
  double t_begin = 0.0;
  double t_end = 0.0;
  double dt = 0.01;
  /// Record every n-th step (the initial and final states are always kept).
  std::size_t sample_every = 1;
};

struct Trajectory
{
  std::vector<double> t;
  std::vector<BlochState> states;
};

/// Largest rate the step size has to resolve: max(Gamma, |delta|, Omega).
double fastest_rate(const DecayConfig& decay, const LocalFields& fields);

/// Fixed-step classical RK4. Throws ValidationError when dt > 0.05 / fastest
/// rate at any step and DivergenceError (with the failing time) on NaN.
Trajectory evolve(const BlochState& state0, const FieldSource& fields,
                  const DecayConfig& decay, const EvolveOptions& options);

/// Advances `state` across a record of probe samples spaced by dt under
/// constant controls, writing (rho_e2g1, rho_e2g2) at every sample into
/// `coherences` (same length as `probes`). Probe values at RK4 half steps
/// come from four-point cubic interpolation.
void integrate_sampled(BlochState& state, std::span<const RabiPair> probes,
                       const ControlAmplitudes& controls,
                       const DecayConfig& decay, double dt,
                       std::span<RabiPair> coherences);

struct SteadyCoherences
{
  cplx e2g1{};
  cplx e2g2{};
  bool weak_probe = true; // false when |probe| > 0.1 Gamma
};

/// Linear-response coherences (delta - i Gamma) rho = M(theta) Omega_p.
SteadyCoherences steady_coherences(const MixingAngle& theta,
                                   const RabiPair& probes,
                                   const MediumParams& params);

} // namespace dlambda
