#include "dlambda/obe_integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "dlambda/errors.hpp"

namespace dlambda {

namespace {

using namespace std::complex_literals;

constexpr double max_step_fraction = 0.05;

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

bool all_non_negative(std::initializer_list<double> values)
{
  return std::all_of(values.begin(), values.end(),
                     [](double v) { return v >= 0.0 && std::isfinite(v); });
}

// Step across [t, t + dt] with fields sampled at the start, midpoint and end.
inline BlochState rk4_step(const BlochState& y, double dt, const RabiPair& p0,
                           const RabiPair& pm, const RabiPair& p1,
                           const ControlAmplitudes& c0,
                           const ControlAmplitudes& cm,
                           const ControlAmplitudes& c1, const DecayConfig& d)
{
  const BlochState k1 = bloch_rhs(y, p0, c0, d);
  const BlochState k2 = bloch_rhs(y + (0.5 * dt) * k1, pm, cm, d);
  const BlochState k3 = bloch_rhs(y + (0.5 * dt) * k2, pm, cm, d);
  const BlochState k4 = bloch_rhs(y + dt * k3, p1, c1, d);
  BlochState out = y;
  out += (dt / 6.0) * k1;
  out += (dt / 3.0) * k2;
  out += (dt / 3.0) * k3;
  out += (dt / 6.0) * k4;
  return out;
}

RabiPair midpoint(std::span<const RabiPair> p, std::size_t n)
{
  const std::size_t last = p.size() - 1;
  auto mix = [](double a, const RabiPair& x, double b, const RabiPair& y,
                double c, const RabiPair& w, double d, const RabiPair& v) {
    return RabiPair{a * x.p1 + b * y.p1 + c * w.p1 + d * v.p1,
                    a * x.p2 + b * y.p2 + c * w.p2 + d * v.p2};
  };
  if (last == 1) {
    return mix(0.5, p[0], 0.5, p[1], 0.0, p[0], 0.0, p[0]);
  }
  if (n == 0) {
    return mix(3.0 / 8.0, p[0], 6.0 / 8.0, p[1], -1.0 / 8.0, p[2], 0.0, p[0]);
  }
  if (n + 1 == last) {
    return mix(-1.0 / 8.0, p[n - 1], 6.0 / 8.0, p[n], 3.0 / 8.0, p[n + 1], 0.0, p[0]);
  }
  return mix(-1.0 / 16.0, p[n - 1], 9.0 / 16.0, p[n], 9.0 / 16.0, p[n + 1],
             -1.0 / 16.0, p[n + 2]);
}

} // namespace

DecayConfig DecayConfig::standard(const MediumParams& params)
{
  const double g = params.gamma();
  DecayConfig d;
  d.gamma = {g, g, g, g};
  d.dephasing = {.e2g1 = g, .e2g2 = g, .e2e1 = 2.0 * g, .e1g1 = g, .e1g2 = g, .g2g1 = 0.0};
  d.detuning = {.e2g1 = params.delta(), .e2g2 = params.delta()};
  return d;
}

void DecayConfig::validate() const
{
  const bool ok =
    all_non_negative({gamma.e1g1, gamma.e1g2, gamma.e2g1, gamma.e2g2}) &&
    all_non_negative({dephasing.e2g1, dephasing.e2g2, dephasing.e2e1,
                      dephasing.e1g1, dephasing.e1g2, dephasing.g2g1});
  const CoherenceRates& t = detuning;
  const bool det_ok = std::isfinite(t.e2g1) && std::isfinite(t.e2g2) &&
                      std::isfinite(t.e2e1) && std::isfinite(t.e1g1) &&
                      std::isfinite(t.e1g2) && std::isfinite(t.g2g1);
  if (!ok || !det_ok) {
    throw ValidationError("decay rates must be finite and non-negative");
  }
}

BlochState BlochState::from(const DensityMatrix& rho)
{
  using L = Level;
  BlochState s;
  s.e2g1 = rho(L::e2, L::g1);
  s.e2g2 = rho(L::e2, L::g2);
  s.e2e1 = rho(L::e2, L::e1);
  s.e1g1 = rho(L::e1, L::g1);
  s.e1g2 = rho(L::e1, L::g2);
  s.g2g1 = rho(L::g2, L::g1);
  s.g1g1 = rho(L::g1, L::g1).real();
  s.g2g2 = rho(L::g2, L::g2).real();
  s.e2e2 = rho(L::e2, L::e2).real();
  return s;
}

DensityMatrix BlochState::density_matrix() const
{
  using L = Level;
  DensityMatrix rho;
  auto set = [&rho](L a, L b, cplx v) {
    rho(a, b) = v;
    rho(b, a) = std::conj(v);
  };
  set(L::e2, L::g1, e2g1);
  set(L::e2, L::g2, e2g2);
  set(L::e2, L::e1, e2e1);
  set(L::e1, L::g1, e1g1);
  set(L::e1, L::g2, e1g2);
  set(L::g2, L::g1, g2g1);
  rho(L::g1, L::g1) = g1g1;
  rho(L::g2, L::g2) = g2g2;
  rho(L::e1, L::e1) = e1e1();
  rho(L::e2, L::e2) = e2e2;
  return rho;
}

bool BlochState::finite() const
{
  return dlambda::finite(e2g1) && dlambda::finite(e2g2) &&
         dlambda::finite(e2e1) && dlambda::finite(e1g1) &&
         dlambda::finite(e1g2) && dlambda::finite(g2g1) &&
         std::isfinite(g1g1) && std::isfinite(g2g2) && std::isfinite(e2e2);
}

BlochState& BlochState::operator+=(const BlochState& o)
{
  e2g1 += o.e2g1;
  e2g2 += o.e2g2;
  e2e1 += o.e2e1;
  e1g1 += o.e1g1;
  e1g2 += o.e1g2;
  g2g1 += o.g2g1;
  g1g1 += o.g1g1;
  g2g2 += o.g2g2;
  e2e2 += o.e2e2;
  return *this;
}

BlochState& BlochState::operator*=(double s)
{
  e2g1 *= s;
  e2g2 *= s;
  e2e1 *= s;
  e1g1 *= s;
  e1g2 *= s;
  g2g1 *= s;
  g1g1 *= s;
  g2g2 *= s;
  e2e2 *= s;
  return *this;
}

BlochDerivative bloch_rhs(const BlochState& r, const RabiPair& probes,
                          const ControlAmplitudes& controls,
                          const DecayConfig& d)
{
  const cplx p1 = probes.p1;
  const cplx p2 = probes.p2;
  const double c1 = controls.c1;
  const double c2 = controls.c2;

  // Reverse coherences from Hermiticity.
  const cplx g1e1 = std::conj(r.e1g1);
  const cplx g2e1 = std::conj(r.e1g2);
  const cplx g2e2 = std::conj(r.e2g2);
  const cplx g1g2 = std::conj(r.g2g1);
  const cplx e1e2 = std::conj(r.e2e1);
  const double e1e1 = r.e1e1();

  const CoherenceRates& G = d.dephasing;
  const CoherenceRates& D = d.detuning;
  const PopulationRates& y = d.gamma;

  // Probe-coherence source terms shared by the population equations.
  const double probe1 = (std::conj(p1) * r.e2g1).imag();
  const double probe2 = (std::conj(p2) * r.e2g2).imag();

  BlochDerivative out;
  out.e2g1 = 1i * (p1 * r.g1g1 + p2 * r.g2g1 - c1 * r.e2e1 - p1 * r.e2e2) -
             cplx(G.e2g1, D.e2g1) * r.e2g1;
  out.e2g2 = 1i * (p2 * r.g2g2 + p1 * g1g2 - c2 * r.e2e1 - p2 * r.e2e2) -
             cplx(G.e2g2, D.e2g2) * r.e2g2;
  out.e2e1 = 1i * (p1 * g1e1 + p2 * g2e1 - c1 * r.e2g1 - c2 * r.e2g2) -
             cplx(G.e2e1, D.e2e1) * r.e2e1;
  out.e1g1 = 1i * (c1 * r.g1g1 + c2 * r.g2g1 - c1 * e1e1 - p1 * e1e2) -
             cplx(G.e1g1, D.e1g1) * r.e1g1;
  out.e1g2 = 1i * (c2 * r.g2g2 + c1 * g1g2 - c2 * e1e1 - p2 * e1e2) -
             cplx(G.e1g2, D.e1g2) * r.e1g2;
  out.g2g1 = 1i * (c2 * r.e1g1 + std::conj(p2) * r.e2g1 - c1 * g2e1 - p1 * g2e2) -
             cplx(G.g2g1, D.g2g1) * r.g2g1;
  out.g1g1 = -2.0 * c1 * r.e1g1.imag() - 2.0 * probe1 + y.e1g1 * e1e1 +
             y.e2g1 * r.e2e2;
  out.g2g2 = -2.0 * c2 * r.e1g2.imag() - 2.0 * probe2 + y.e1g2 * e1e1 +
             y.e2g2 * r.e2e2;
  out.e2e2 = 2.0 * (probe1 + probe2) - (y.e2g1 + y.e2g2) * r.e2e2;
  return out;
}

std::array<double, 4> population_rates(const BlochState& state,
                                       const RabiPair& probes,
                                       const ControlAmplitudes& controls,
                                       const DecayConfig& decay)
{
  const BlochDerivative d = bloch_rhs(state, probes, controls, decay);
  const cplx g1e1 = std::conj(state.e1g1);
  const cplx g2e1 = std::conj(state.e1g2);
  const cplx e1e1_rate =
    1i * (controls.c1 * (g1e1 - state.e1g1) + controls.c2 * (g2e1 - state.e1g2)) -
    (decay.gamma.e1g1 + decay.gamma.e1g2) * state.e1e1();
  return {d.g1g1, d.g2g2, e1e1_rate.real(), d.e2e2};
}

double fastest_rate(const DecayConfig& decay, const LocalFields& fields)
{
  const PopulationRates& g = decay.gamma;
  const CoherenceRates& det = decay.detuning;
  return std::max({g.e1g1, g.e1g2, g.e2g1, g.e2g2, std::abs(det.e2g1),
                   std::abs(det.e2g2), std::abs(det.e2e1), std::abs(det.e1g1),
                   std::abs(det.e1g2), std::abs(det.g2g1), fields.controls.c1,
                   fields.controls.c2, std::abs(fields.probes.p1),
                   std::abs(fields.probes.p2)});
}

Trajectory evolve(const BlochState& state0, const FieldSource& fields,
                  const DecayConfig& decay, const EvolveOptions& options)
{
  decay.validate();
  const double span = options.t_end - options.t_begin;
  if (!(options.dt > 0.0) || !(span >= 0.0)) {
    throw ValidationError("evolve needs dt > 0 and t_end >= t_begin");
  }
  const double steps_real = span / options.dt;
  const auto steps = static_cast<std::size_t>(std::llround(steps_real));
  if (std::abs(steps_real - static_cast<double>(steps)) > 1e-9 * std::max(1.0, steps_real)) {
    throw ValidationError(fmt::format(
      "time span {} is not a whole number of steps dt = {}", span, options.dt));
  }
  const std::size_t every = std::max<std::size_t>(1, options.sample_every);

  Trajectory traj;
  BlochState y = state0;
  traj.t.push_back(options.t_begin);
  traj.states.push_back(y);

  LocalFields f0 = fields(options.t_begin);
  for (std::size_t n = 0; n < steps; ++n) {
    const double t = options.t_begin + static_cast<double>(n) * options.dt;
    const LocalFields fm = fields(t + 0.5 * options.dt);
    const LocalFields f1 = fields(t + options.dt);
    const double rate = std::max(fastest_rate(decay, f0), fastest_rate(decay, fm));
    if (options.dt > max_step_fraction / rate) {
      throw ValidationError(fmt::format(
        "step dt = {} does not resolve rate {} at t = {} (need dt <= {})",
        options.dt, rate, t, max_step_fraction / rate));
    }
    y = rk4_step(y, options.dt, f0.probes, fm.probes, f1.probes, f0.controls,
                 fm.controls, f1.controls, decay);
    if (!y.finite()) {
      throw DivergenceError(fmt::format("Bloch state diverged at t = {}", t + options.dt),
                            std::numeric_limits<double>::quiet_NaN(), t + options.dt);
    }
    f0 = f1;
    if ((n + 1) % every == 0 || n + 1 == steps) {
      traj.t.push_back(t + options.dt);
      traj.states.push_back(y);
    }
  }
  return traj;
}

void integrate_sampled(BlochState& state, std::span<const RabiPair> probes,
                       const ControlAmplitudes& controls,
                       const DecayConfig& decay, double dt,
                       std::span<RabiPair> coherences)
{
  const std::size_t n_samples = probes.size();
  if (coherences.size() != n_samples) {
    throw ValidationError("coherence buffer must match the probe record");
  }
  if (n_samples == 0) {
    return;
  }
  coherences[0] = {state.e2g1, state.e2g2};
  for (std::size_t n = 0; n + 1 < n_samples; ++n) {
    const RabiPair pm = midpoint(probes, n);
    state = rk4_step(state, dt, probes[n], pm, probes[n + 1], controls, controls,
                     controls, decay);
    coherences[n + 1] = {state.e2g1, state.e2g2};
    if ((n & 255u) == 255u && !state.finite()) {
      const double t = static_cast<double>(n + 1) * dt;
      throw DivergenceError(fmt::format("Bloch state diverged at t = {}", t),
                            std::numeric_limits<double>::quiet_NaN(), t);
    }
  }
  if (!state.finite()) {
    const double t = static_cast<double>(n_samples - 1) * dt;
    throw DivergenceError(fmt::format("Bloch state diverged at t = {}", t),
                          std::numeric_limits<double>::quiet_NaN(), t);
  }
}

SteadyCoherences steady_coherences(const MixingAngle& theta,
                                   const RabiPair& probes,
                                   const MediumParams& params)
{
  const double s = theta.sin();
  const double c = theta.cos();
  const cplx denom(params.delta(), -params.gamma());
  SteadyCoherences out;
  out.e2g1 = (c * c * probes.p1 - s * c * probes.p2) / denom;
  out.e2g2 = (-s * c * probes.p1 + s * s * probes.p2) / denom;
  const double limit = 0.1 * params.gamma();
  out.weak_probe = std::abs(probes.p1) <= limit && std::abs(probes.p2) <= limit;
  return out;
}

} // namespace dlambda
