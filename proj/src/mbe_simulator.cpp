#include "dlambda/mbe_simulator.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "dlambda/errors.hpp"

namespace dlambda {

namespace {

using namespace std::complex_literals;

double trapezoid(const std::vector<double>& v, double dt)
{
  if (v.size() < 2) {
    return 0.0;
  }
  double sum = 0.5 * (v.front() + v.back());
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    sum += v[i];
  }
  return sum * dt;
}

} // namespace

std::size_t SimGrid::nt() const
{
  return static_cast<std::size_t>(std::llround(t_window / dt)) + 1;
}

RabiPair InputPulse::at(double t) const
{
  const double x = (t - t0) / width;
  return amplitude * std::exp(-0.5 * x * x) * weights;
}

std::vector<std::string> validate_simulation(const ControlProfile& profile,
                                             const MediumParams& params,
                                             const SimGrid& grid,
                                             const InputPulse& pulse)
{
  std::vector<std::string> warnings;
  if (grid.nz == 0 || !(grid.dz > 0.0) || !(grid.dt > 0.0) ||
      !(grid.t_window > 0.0)) {
    throw ValidationError("simulation grid needs nz > 0, dz > 0, dt > 0, t_window > 0");
  }
  if (grid.dz > 0.2 * params.l_abs() * (1.0 + 1e-12)) {
    throw ValidationError(fmt::format(
      "dz = {} exceeds 0.2 absorption lengths ({})", grid.dz, 0.2 * params.l_abs()));
  }
  const double covered = static_cast<double>(grid.nz) * grid.dz;
  if (std::abs(covered - params.length()) > 1e-9 * params.length()) {
    throw ValidationError(fmt::format(
      "nz * dz = {} does not match the medium length {}", covered, params.length()));
  }
  if (std::abs(profile.length() - params.length()) > 1e-9 * params.length()) {
    throw ValidationError("control profile and medium disagree on the length");
  }
  const double steps = grid.t_window / grid.dt;
  if (std::abs(steps - std::round(steps)) > 1e-9 * steps || grid.nt() < 4) {
    throw ValidationError(fmt::format(
      "t_window = {} must be a whole number (>= 3) of steps dt = {}",
      grid.t_window, grid.dt));
  }
  if (grid.store_every == 0) {
    throw ValidationError("store_every must be >= 1");
  }
  const double rate = std::max({params.gamma(), std::abs(params.delta()),
                                profile.peak_amplitude()});
  if (grid.dt > 0.05 / rate * (1.0 + 1e-12)) {
    throw ValidationError(fmt::format(
      "dt = {} does not resolve the fastest rate {} (need dt <= {})", grid.dt,
      rate, 0.05 / rate));
  }
  if (!(pulse.width > 0.0) || !std::isfinite(pulse.t0) || !(pulse.amplitude >= 0.0)) {
    throw ValidationError("pulse needs width > 0, finite t0 and amplitude >= 0");
  }
  if (grid.t_window < pulse.t0 + 5.0 * pulse.width) {
    throw ValidationError(fmt::format(
      "t_window = {} does not cover the pulse plus 5 widths of tail ({})",
      grid.t_window, pulse.t0 + 5.0 * pulse.width));
  }
  const double peak = pulse.amplitude *
                      std::max(std::abs(pulse.weights.p1), std::abs(pulse.weights.p2));
  if (peak > 0.1 * params.gamma()) {
    warnings.push_back(fmt::format(
      "probe amplitude {} exceeds 0.1 Gamma; the weak-probe picture degrades", peak));
  }
  return warnings;
}

SpaceTimeRecord simulate(const ControlProfile& profile,
                         const MediumParams& params, const SimGrid& grid,
                         const InputPulse& pulse, const SimOptions& options)
{
  SpaceTimeRecord rec;
  rec.warnings = validate_simulation(profile, params, grid, pulse);
  const DecayConfig decay = options.decay.value_or(DecayConfig::standard(params));
  decay.validate();
  rec.speed_of_light = options.speed_of_light;

  const std::size_t nt = grid.nt();
  const std::size_t nz = grid.nz;
  const double dt = grid.dt;
  const double dz = grid.dz;
  const cplx coupling = 1i * params.alpha() * params.gamma() / (2.0 * params.length());

  for (std::size_t iz = 0; iz <= nz; ++iz) {
    rec.z.push_back(std::min(params.length(), static_cast<double>(iz) * dz));
  }
  for (std::size_t it = 0; it < nt; it += grid.store_every) {
    rec.t_stored.push_back(static_cast<double>(it) * dt);
  }
  const std::size_t n_stored = rec.t_stored.size();
  rec.fields.resize((nz + 1) * n_stored);
  rec.energy.resize(nz + 1);
  rec.peak.resize(nz + 1);
  rec.at_input_peak.resize(nz + 1);

  std::vector<RabiPair> omega(nt);
  for (std::size_t it = 0; it < nt; ++it) {
    omega[it] = pulse.at(static_cast<double>(it) * dt);
  }
  std::size_t peak_index = 0;
  {
    std::vector<double> total(nt);
    for (std::size_t it = 0; it < nt; ++it) {
      total[it] = omega[it].intensity();
      if (total[it] > total[peak_index]) {
        peak_index = it;
      }
    }
    rec.input_energy = trapezoid(total, dt);
    rec.input_peak = total[peak_index];
    rec.input_at_peak = omega[peak_index];
  }

  std::vector<double> scratch1(nt), scratch2(nt);
  auto store = [&](std::size_t iz, const std::vector<RabiPair>& field) {
    double peak1 = 0.0;
    double peak2 = 0.0;
    for (std::size_t it = 0; it < nt; ++it) {
      scratch1[it] = std::norm(field[it].p1);
      scratch2[it] = std::norm(field[it].p2);
      peak1 = std::max(peak1, scratch1[it]);
      peak2 = std::max(peak2, scratch2[it]);
    }
    rec.energy[iz] = {trapezoid(scratch1, dt), trapezoid(scratch2, dt)};
    rec.peak[iz] = {peak1, peak2};
    rec.at_input_peak[iz] = field[peak_index];
    for (std::size_t k = 0; k < n_stored; ++k) {
      rec.fields[iz * n_stored + k] = field[k * grid.store_every];
    }
  };

  auto coherences_at = [&](double z, const std::vector<RabiPair>& field,
                           std::vector<RabiPair>& out) {
    BlochState state = BlochState::from(cpt_state_matrix(theta_of_z(profile, z)));
    try {
      integrate_sampled(state, field, evaluate(profile, z), decay, dt, out);
    } catch (const DivergenceError& e) {
      throw DivergenceError(
        fmt::format("Bloch state diverged at z = {}, t' = {}", z, e.t()), z, e.t());
    }
  };

  std::vector<RabiPair> rho_entry(nt), rho_exit(nt), predicted(nt);
  coherences_at(0.0, omega, rho_entry);
  store(0, omega);

  for (std::size_t iz = 0; iz < nz; ++iz) {
    const double z_next = rec.z[iz + 1];
    const cplx step = dz * coupling;
    for (std::size_t it = 0; it < nt; ++it) {
      predicted[it] = omega[it] + step * rho_entry[it];
    }
    coherences_at(z_next, predicted, rho_exit);
    const cplx half = 0.5 * step;
    for (std::size_t it = 0; it < nt; ++it) {
      omega[it] = omega[it] + half * (rho_entry[it] + rho_exit[it]);
    }
    for (std::size_t it = 0; it < nt; ++it) {
      if (!omega[it].finite()) {
        const double t = static_cast<double>(it) * dt;
        throw DivergenceError(
          fmt::format("probe field diverged at z = {}, t' = {}", z_next, t), z_next, t);
      }
    }
    store(iz + 1, omega);
    if (iz + 1 < nz) {
      coherences_at(z_next, omega, rho_entry);
    }
  }
  return rec;
}

IntensityCurves intensity_profile(const SpaceTimeRecord& record,
                                  Reduction reduction)
{
  IntensityCurves curves;
  curves.z = record.z;
  const bool energy = reduction == Reduction::pulse_energy;
  const double norm = energy ? record.input_energy : record.input_peak;
  curves.p1.reserve(record.z.size());
  curves.p2.reserve(record.z.size());
  for (std::size_t iz = 0; iz < record.z.size(); ++iz) {
    const auto& v = energy ? record.energy[iz] : record.peak[iz];
    curves.p1.push_back(norm > 0.0 ? v[0] / norm : 0.0);
    curves.p2.push_back(norm > 0.0 ? v[1] / norm : 0.0);
  }
  return curves;
}

IntensityCurves intensity_curves(const PropagationResult& analytic,
                                 const RabiPair& input)
{
  IntensityCurves curves;
  curves.z = analytic.z_grid;
  const double norm = input.intensity();
  for (const RabiPair& f : analytic.fields) {
    curves.p1.push_back(norm > 0.0 ? std::norm(f.p1) / norm : 0.0);
    curves.p2.push_back(norm > 0.0 ? std::norm(f.p2) / norm : 0.0);
  }
  return curves;
}

DeviationReport compare_curves(const IntensityCurves& numeric,
                               const IntensityCurves& analytic)
{
  const std::size_t n = numeric.z.size();
  if (n == 0 || n != analytic.z.size()) {
    throw ValidationError(fmt::format(
      "z grids differ in size ({} numeric vs {} analytic)", n, analytic.z.size()));
  }
  const double scale = std::max(1.0, std::abs(numeric.z.back()));
  DeviationReport report;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(numeric.z[i] - analytic.z[i]) > 1e-9 * scale) {
      throw ValidationError(fmt::format(
        "z grids differ at index {} ({} vs {})", i, numeric.z[i], analytic.z[i]));
    }
    const double d1 = std::abs(numeric.p1[i] - analytic.p1[i]);
    const double d2 = std::abs(numeric.p2[i] - analytic.p2[i]);
    report.max_abs[0] = std::max(report.max_abs[0], d1);
    report.max_abs[1] = std::max(report.max_abs[1], d2);
    report.mean_abs[0] += d1;
    report.mean_abs[1] += d2;
  }
  report.mean_abs[0] /= static_cast<double>(n);
  report.mean_abs[1] /= static_cast<double>(n);
  return report;
}

DeviationReport compare_analytic(const SpaceTimeRecord& record,
                                 const PropagationResult& analytic,
                                 const RabiPair& input, Reduction reduction)
{
  return compare_curves(intensity_profile(record, reduction),
                        intensity_curves(analytic, input));
}

std::vector<RabiPair> transfer_factors(const SpaceTimeRecord& record)
{
  std::vector<RabiPair> factors;
  factors.reserve(record.z.size());
  const cplx ref = std::abs(record.input_at_peak.p1) >= std::abs(record.input_at_peak.p2)
                     ? record.input_at_peak.p1
                     : record.input_at_peak.p2;
  const double ref_mod = std::abs(ref);
  for (std::size_t iz = 0; iz < record.z.size(); ++iz) {
    auto factor = [&](cplx sample, double energy) {
      if (ref_mod == 0.0 || record.input_energy == 0.0) {
        return cplx{};
      }
      const double modulus = std::sqrt(energy / record.input_energy);
      const cplx ratio = sample / ref;
      return std::abs(ratio) > 0.0 ? modulus * ratio / std::abs(ratio) : cplx{};
    };
    const RabiPair& s = record.at_input_peak[iz];
    factors.push_back({factor(s.p1, record.energy[iz][0]),
                       factor(s.p2, record.energy[iz][1])});
  }
  return factors;
}

} // namespace dlambda
