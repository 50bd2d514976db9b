#include "dlambda/harness/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "dlambda/errors.hpp"

namespace dlambda::harness {

namespace {

std::string num(double v) { return fmt::format("{:.9g}", v); }

constexpr std::string_view fig2_config = R"(
[run]
name = fig2
mode = compare
[medium]
alpha = 40
length = 40 Labs
delta = 0 Gamma
[profile]
kind = constant
c1 = 1 Gamma
c2 = 1 Gamma
[pulse]
amplitude = 0.01 Gamma
t0 = 25 inv_Gamma
width = 10 inv_Gamma
channel = p1
[grid]
nz = 400
dt = 0.01 inv_Gamma
t_window = 100 inv_Gamma
)";

constexpr std::string_view fig3_config = R"(
[run]
name = fig3
mode = compare
[medium]
alpha = 40
length = 40 Labs
delta = 0 Gamma
[profile]
kind = sigmoid
omega_c = 1 Gamma
z0 = 20 Labs
z_bar = 2 Labs
[pulse]
amplitude = 0.01 Gamma
t0 = 25 inv_Gamma
width = 10 inv_Gamma
channel = p1
[grid]
nz = 400
dt = 0.01 inv_Gamma
t_window = 100 inv_Gamma
)";

constexpr std::string_view fig4_config = R"(
[run]
name = fig4
mode = compare
[medium]
alpha = 40
length = 40 Labs
delta = 0 Gamma
[profile]
kind = gaussian
omega_c = 1 Gamma
sigma = 16 Labs
[pulse]
amplitude = 0.01 Gamma
t0 = 25 inv_Gamma
width = 10 inv_Gamma
channel = p1
[grid]
nz = 400
dt = 0.01 inv_Gamma
t_window = 100 inv_Gamma
)";

constexpr std::string_view diffraction_config = R"(
[run]
name = diffraction-estimate
mode = analytic
[medium]
alpha = 40
physical_length = 100 um
[vortex]
l = 1
waist = 20 um
wavelength = 1 um
)";

PlotSpec intensity_plot(const ExperimentResult& r)
{
  PlotSpec plot;
  plot.name = "curves";
  plot.title = fmt::format("{}: normalised probe intensities", r.config.name);
  plot.x_label = "z / L_abs";
  plot.y_label = "|Omega_p|^2 / |Omega|^2";
  if (r.analytic_curves) {
    plot.series.push_back({"p1 analytic", r.analytic_curves->z, r.analytic_curves->p1, false});
    plot.series.push_back({"p2 analytic", r.analytic_curves->z, r.analytic_curves->p2, false});
  }
  if (r.numeric_curves) {
    plot.series.push_back({"p1 numeric", r.numeric_curves->z, r.numeric_curves->p1, true});
    plot.series.push_back({"p2 numeric", r.numeric_curves->z, r.numeric_curves->p2, true});
  }
  return plot;
}

Table curves_table(const ExperimentResult& r)
{
  Table t;
  t.name = "curves";
  t.columns = {"z/L_abs"};
  if (r.analytic_curves) {
    t.columns.insert(t.columns.end(), {"I_p1_analytic", "I_p2_analytic"});
  }
  if (r.numeric_curves) {
    t.columns.insert(t.columns.end(), {"I_p1_numeric", "I_p2_numeric"});
  }
  const IntensityCurves& ref = r.curves();
  for (std::size_t i = 0; i < ref.z.size(); ++i) {
    std::vector<Cell> row{ref.z[i]};
    if (r.analytic_curves) {
      row.emplace_back(r.analytic_curves->p1[i]);
      row.emplace_back(r.analytic_curves->p2[i]);
    }
    if (r.numeric_curves) {
      row.emplace_back(r.numeric_curves->p1[i]);
      row.emplace_back(r.numeric_curves->p2[i]);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::pair<Table, PlotSpec> control_profile(const ExperimentConfig& cfg)
{
  const ControlProfile profile = cfg.build_profile();
  Table t;
  t.name = "control_profile";
  t.columns = {"z/L_abs", "Omega_c1/Gamma", "Omega_c2/Gamma", "theta"};
  PlotSeries s1{"Omega_c1", {}, {}, false};
  PlotSeries s2{"Omega_c2", {}, {}, true};
  for (double z : cfg.z_grid()) {
    const ControlAmplitudes c = evaluate(profile, z);
    t.rows.push_back({z, c.c1, c.c2, theta_of_z(profile, z).theta()});
    s1.x.push_back(z);
    s1.y.push_back(c.c1);
    s2.x.push_back(z);
    s2.y.push_back(c.c2);
  }
  PlotSpec plot{"control_profile", fmt::format("{}: control fields", cfg.name), "z / L_abs",
                "Omega_c / Gamma", {s1, s2}};
  return {t, plot};
}

RabiPair input_vector(const InputPulse& pulse)
{
  return pulse.amplitude * pulse.weights;
}

std::vector<std::size_t> map_indices(const ExperimentConfig& cfg, const std::vector<double>& z)
{
  std::vector<std::size_t> out;
  if (!cfg.vortex || cfg.vortex->map_z.empty()) {
    out.push_back(z.size() - 1);
    return out;
  }
  for (double target : cfg.vortex->map_z) {
    const auto it = std::min_element(z.begin(), z.end(), [target](double a, double b) {
      return std::abs(a - target) < std::abs(b - target);
    });
    out.push_back(static_cast<std::size_t>(it - z.begin()));
  }
  return out;
}

void append_maps(ArtifactBundle& b, const std::vector<TransversePair>& pairs)
{
  for (const TransversePair& pair : pairs) {
    const auto emit_channel = [&](const TransverseField& f, std::string_view channel) {
      auto make = [&](std::string_view quantity) {
        return MapArtifact{fmt::format("z{}_{}_{}", num(pair.z), channel, quantity),
                           std::string(channel), std::string(quantity), f.winding(),
                           f.waist(), pair.z, f.size(), f.coord(0), f.spacing(), {}};
      };
      MapArtifact intensity = make("intensity");
      MapArtifact phase = make("phase");
      intensity.values.reserve(f.values().size());
      phase.values.reserve(f.values().size());
      for (cplx v : f.values()) {
        intensity.values.push_back(std::norm(v));
        phase.values.push_back(std::arg(v));
      }
      b.maps.push_back(std::move(intensity));
      b.maps.push_back(std::move(phase));
    };
    emit_channel(pair.p1, "p1");
    emit_channel(pair.p2, "p2");
  }
}

void append_winding(ArtifactBundle& b, const ExperimentResult& r)
{
  if (r.transverse.empty()) {
    return;
  }
  Table t;
  t.name = "winding";
  t.columns = {"z/L_abs", "channel", "winding", "total_phase"};
  const double radius = peak_radius(r.config.vortex->l, r.config.vortex->waist_um);
  for (const TransversePair& pair : r.transverse) {
    for (const auto& [field, channel] :
         {std::pair{&pair.p1, "p1"}, std::pair{&pair.p2, "p2"}}) {
      const WindingResult w = winding_number(*field, radius > 0.0 ? radius : field->waist());
      t.rows.push_back({pair.z, std::string(channel),
                        w.defined ? Cell{static_cast<double>(w.winding)} : Cell{std::string("undefined")},
                        w.total_phase});
    }
  }
  b.tables.push_back(std::move(t));
}

} // namespace

std::vector<double> Table::column(std::string_view c) const
{
  const auto it = std::find(columns.begin(), columns.end(), c);
  if (it == columns.end()) {
    throw ValidationError(fmt::format("table {} has no column {}", name, c));
  }
  const auto idx = static_cast<std::size_t>(it - columns.begin());
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    const double* v = std::get_if<double>(&row.at(idx));
    if (!v) {
      throw ValidationError(fmt::format("column {} of {} is not numeric", c, name));
    }
    out.push_back(*v);
  }
  return out;
}

const Table& ArtifactBundle::table(std::string_view which) const
{
  for (const Table& t : tables) {
    if (t.name == which) {
      return t;
    }
  }
  throw ValidationError(fmt::format("bundle {} has no table {}", name, which));
}

const IntensityCurves& ExperimentResult::curves() const
{
  if (numeric_curves) {
    return *numeric_curves;
  }
  if (analytic_curves) {
    return *analytic_curves;
  }
  throw ValidationError("experiment produced no curves");
}

double ExperimentResult::conversion() const
{
  return curves().p2.back();
}

double ExperimentResult::final_total() const
{
  const IntensityCurves& c = curves();
  return c.p1.back() + c.p2.back();
}

ExperimentResult run_experiment(const ExperimentConfig& config)
{
  ExperimentResult r;
  r.config = config;
  const MediumParams medium = config.medium();
  const ControlProfile profile = config.build_profile();
  const std::vector<double> z = config.z_grid();
  const RabiPair input = input_vector(config.pulse);

  if (profile.kind() != ProfileKind::constant) {
    r.adiabaticity = adiabaticity_report(profile, medium, config.adiabaticity_grid);
  }

  if (config.mode != Mode::numeric) {
    if (profile.kind() == ProfileKind::constant) {
      r.analytic = propagate_constant(theta_of_z(profile, 0.0), medium, z, input);
    } else {
      AdiabaticOptions opts;
      opts.adiabaticity_grid = config.adiabaticity_grid;
      r.analytic = propagate_adiabatic(profile, medium, z, input, opts);
    }
    r.analytic_curves = intensity_curves(*r.analytic, input);
    r.warnings.insert(r.warnings.end(), r.analytic->warnings.begin(), r.analytic->warnings.end());
  }
  if (config.mode != Mode::analytic) {
    r.numeric = simulate(profile, medium, config.grid, config.pulse);
    r.numeric_curves = intensity_profile(*r.numeric, config.reduction);
    r.warnings.insert(r.warnings.end(), r.numeric->warnings.begin(), r.numeric->warnings.end());
  }
  if (r.analytic_curves && r.numeric_curves) {
    r.deviation = compare_curves(*r.numeric_curves, *r.analytic_curves);
  }

  if (config.vortex) {
    const VortexSpec& v = *config.vortex;
    const TransverseField field =
      make_vortex(v.l, v.waist_um, config.pulse.amplitude, v.grid);
    std::vector<RabiPair> factors;
    if (r.numeric) {
      factors = transfer_factors(*r.numeric);
    } else {
      const double norm = std::sqrt(input.intensity());
      for (const RabiPair& f : r.analytic->fields) {
        factors.push_back((1.0 / norm) * f);
      }
    }
    std::vector<double> zs;
    std::vector<RabiPair> fs;
    for (std::size_t i : map_indices(config, z)) {
      zs.push_back(z[i]);
      fs.push_back(factors[i]);
    }
    r.transverse = propagate_transverse(field, zs, fs);
  }
  return r;
}

ArtifactBundle make_bundle(const ExperimentResult& r)
{
  ArtifactBundle b;
  b.name = r.config.name;
  b.config_echo = r.config.echo();
  b.warnings = r.warnings;
  if (r.analytic_curves) {
    b.metadata.emplace_back("conversion_analytic", num(r.analytic_curves->p2.back()));
    b.metadata.emplace_back("final_total_analytic",
                            num(r.analytic_curves->p1.back() + r.analytic_curves->p2.back()));
    b.metadata.emplace_back("efficiency_amplitude_analytic", num(r.analytic->efficiency));
  }
  if (r.numeric_curves) {
    b.metadata.emplace_back("conversion_numeric", num(r.numeric_curves->p2.back()));
    b.metadata.emplace_back("final_total_numeric",
                            num(r.numeric_curves->p1.back() + r.numeric_curves->p2.back()));
  }
  if (r.deviation) {
    b.metadata.emplace_back("max_deviation_p1", num(r.deviation->max_abs[0]));
    b.metadata.emplace_back("max_deviation_p2", num(r.deviation->max_abs[1]));
    b.metadata.emplace_back("mean_deviation_p1", num(r.deviation->mean_abs[0]));
    b.metadata.emplace_back("mean_deviation_p2", num(r.deviation->mean_abs[1]));
  }
  if (r.adiabaticity) {
    b.metadata.emplace_back("adiabaticity_lhs_max", num(r.adiabaticity->lhs_max));
    b.metadata.emplace_back("adiabaticity_rhs", num(r.adiabaticity->rhs));
    b.metadata.emplace_back("adiabaticity_margin", num(r.adiabaticity->margin));
    b.metadata.emplace_back("adiabaticity_worst_z", num(r.adiabaticity->worst_z));
  }

  b.tables.push_back(curves_table(r));
  b.plots.push_back(intensity_plot(r));
  if (r.config.profile.kind != ProfileKind::constant) {
    auto [table, plot] = control_profile(r.config);
    b.tables.push_back(std::move(table));
    b.plots.push_back(std::move(plot));
  }
  append_winding(b, r);
  append_maps(b, r.transverse);
  return b;
}

ArtifactBundle vortex_bundle(const ExperimentResult& r)
{
  ArtifactBundle b;
  b.name = r.config.name + "_vortex";
  b.config_echo = r.config.echo();
  b.warnings = r.warnings;
  append_winding(b, r);
  append_maps(b, r.transverse);
  return b;
}

std::vector<std::string> preset_names()
{
  return {"fig2", "fig3", "fig4", "diffraction-estimate"};
}

KeyValueConfig preset_config(std::string_view name)
{
  if (name == "fig2") {
    return KeyValueConfig::parse(fig2_config, "preset fig2");
  }
  if (name == "fig3") {
    return KeyValueConfig::parse(fig3_config, "preset fig3");
  }
  if (name == "fig4") {
    return KeyValueConfig::parse(fig4_config, "preset fig4");
  }
  if (name == "diffraction-estimate") {
    return KeyValueConfig::parse(diffraction_config, "preset diffraction-estimate");
  }
  throw ValidationError(fmt::format("unknown preset '{}'; available presets: {}", name,
                                    fmt::join(preset_names(), ", ")));
}

ArtifactBundle run_preset(std::string_view name,
                          const std::vector<std::pair<std::string, std::string>>& overrides)
{
  KeyValueConfig raw = preset_config(name);
  for (const auto& [key, value] : overrides) {
    raw.set(key, value);
  }
  if (name == "diffraction-estimate") {
    return diffraction_bundle(raw);
  }
  return make_bundle(run_experiment(resolve(raw)));
}

ArtifactBundle diffraction_bundle(const KeyValueConfig& raw)
{
  ExperimentConfig cfg = resolve(raw);
  if (!cfg.physical_length_um) {
    throw ValidationError("the diffraction estimate needs medium.physical_length");
  }
  const VortexSpec v = cfg.vortex.value_or(VortexSpec{});
  return diffraction_bundle(diffraction_check(*cfg.physical_length_um, v.waist_um, v.wavelength_um),
                            cfg.echo());
}

ArtifactBundle diffraction_bundle(const DiffractionCheck& check, Entries echo)
{
  ArtifactBundle b;
  b.name = "diffraction";
  b.config_echo = std::move(echo);
  Table t;
  t.name = "diffraction";
  t.columns = {"length_um", "waist_um", "wavelength_um", "figure_of_merit", "bound", "status"};
  t.rows.push_back({check.length, check.waist, check.wavelength, check.figure_of_merit,
                    std::numbers::pi, std::string(to_string(check.status))});
  b.metadata.emplace_back("figure_of_merit", fmt::format("{:.3f}", check.figure_of_merit));
  b.metadata.emplace_back("status", std::string(to_string(check.status)));
  b.tables.push_back(std::move(t));
  return b;
}

ArtifactBundle adiabaticity_bundle(const ExperimentConfig& cfg)
{
  const AdiabaticityReport rep =
    adiabaticity_report(cfg.build_profile(), cfg.medium(), cfg.adiabaticity_grid);
  ArtifactBundle b;
  b.name = cfg.name + "_adiabaticity";
  b.config_echo = cfg.echo();
  Table t;
  t.name = "adiabaticity";
  t.columns = {"lhs_max", "rhs", "margin", "worst_z", "status"};
  const bool ok = rep.margin > 1.0;
  t.rows.push_back({rep.lhs_max, rep.rhs, rep.margin, rep.worst_z,
                    std::string(ok ? "adiabatic" : "violated")});
  b.metadata.emplace_back("margin", num(rep.margin));
  if (!ok) {
    b.warnings.push_back(fmt::format("adiabaticity margin {} is not above 1", num(rep.margin)));
  }
  b.tables.push_back(std::move(t));
  return b;
}

} // namespace dlambda::harness
