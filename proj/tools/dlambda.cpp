// dlambda: command-line front end for the double-lambda vortex converter.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "dlambda/errors.hpp"
#include "dlambda/harness/config.hpp"
#include "dlambda/harness/emit.hpp"
#include "dlambda/harness/experiment.hpp"
#include "dlambda/harness/sweep.hpp"
#include "dlambda/vortex_fields.hpp"

namespace h = dlambda::harness;

namespace {

struct Common
{
  std::string config;
  std::string preset;
  std::vector<std::string> set;
  std::string out = "out";
  std::string format = "csv,svg";
  std::size_t jobs = 0;
  bool seedless = false;
  bool no_write = false;
};

void add_common(CLI::App* cmd, Common& c, bool source = true)
{
  if (source) {
    cmd->add_option("--config", c.config, "Experiment config file");
    cmd->add_option("--preset", c.preset, "Start from a named preset instead of a file");
    cmd->add_option("--set", c.set, "Override a key: section.key=value unit")->take_all();
  }
  cmd->add_option("--out", c.out, "Output directory")->capture_default_str();
  cmd->add_option("--format", c.format, "Comma list of csv, json, svg")->capture_default_str();
  cmd->add_option("--jobs", c.jobs, "Worker threads for sweeps (0: available cores)");
  cmd->add_flag("--seedless", c.seedless,
                "Assert a deterministic run (nothing in the program draws random numbers)");
  cmd->add_flag("--no-write", c.no_write, "Print the summary without writing files");
}

std::vector<std::pair<std::string, std::string>> overrides(const Common& c)
{
  std::vector<std::pair<std::string, std::string>> out;
  for (const std::string& s : c.set) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw dlambda::ValidationError(fmt::format("--set expects key=value, got '{}'", s));
    }
    auto trim = [](std::string v) {
      v.erase(0, v.find_first_not_of(" \t"));
      v.erase(v.find_last_not_of(" \t") + 1);
      return v;
    };
    out.emplace_back(trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
  }
  return out;
}

h::KeyValueConfig load_raw(const Common& c)
{
  if (!c.config.empty() && !c.preset.empty()) {
    throw dlambda::ValidationError("give either --config or --preset, not both");
  }
  h::KeyValueConfig raw;
  if (!c.config.empty()) {
    raw = h::KeyValueConfig::load(c.config);
  } else if (!c.preset.empty()) {
    raw = h::preset_config(c.preset);
  } else {
    throw dlambda::ValidationError("a --config file or a --preset is required");
  }
  for (const auto& [k, v] : overrides(c)) {
    raw.set(k, v);
  }
  return raw;
}

void report(const h::ArtifactBundle& b, const Common& c)
{
  for (const auto& [k, v] : b.metadata) {
    fmt::print("{} = {}\n", k, v);
  }
  for (const std::string& w : b.warnings) {
    fmt::print(stderr, "warning: {}\n", w);
  }
  if (c.no_write) {
    return;
  }
  for (const auto& path : h::emit(b, c.out, h::parse_formats(c.format))) {
    fmt::print("wrote {}\n", path.string());
  }
}

h::ArtifactBundle run_config(const Common& c, std::optional<h::Mode> mode)
{
  h::KeyValueConfig raw = load_raw(c);
  if (mode) {
    raw.set("run.mode", std::string(h::to_string(*mode)));
  }
  return h::make_bundle(h::run_experiment(h::resolve(raw)));
}

int run(int argc, char** argv)
{
  CLI::App app{"Double-lambda CPT vortex conversion: analytic propagation and "
               "Maxwell-Bloch simulation"};
  app.require_subcommand(1);
  Common c;

  auto* preset = app.add_subcommand("preset", "Run a named experiment preset");
  std::string preset_name;
  preset->add_option("name", preset_name, "fig2, fig3, fig4 or diffraction-estimate")->required();
  preset->add_option("--set", c.set, "Override a key: section.key=value unit")->take_all();
  add_common(preset, c, false);

  auto* simulate = app.add_subcommand("simulate", "Numeric Maxwell-Bloch run");
  add_common(simulate, c);
  auto* analytic = app.add_subcommand("analytic", "Analytic propagation only");
  add_common(analytic, c);
  auto* compare = app.add_subcommand("compare", "Analytic and numeric runs with deviation");
  add_common(compare, c);

  auto* sweep = app.add_subcommand("sweep", "Sweep one config parameter");
  std::string parameter, values, reduction;
  sweep->add_option("--parameter", parameter, "Parameter path, e.g. profile.z_bar");
  sweep->add_option("--values", values, "Value list with unit, e.g. '0.5, 1, 2 Labs'");
  sweep->add_option("--reduction", reduction, "efficiency or max-deviation");
  add_common(sweep, c);

  auto* vortex = app.add_subcommand("vortex-map", "Transverse vortex intensity and phase maps");
  add_common(vortex, c);

  auto* adiabatic = app.add_subcommand("check-adiabaticity",
                                       "max |theta'| against |beta| for a profile");
  add_common(adiabatic, c);

  auto* diffraction = app.add_subcommand("check-diffraction",
                                         "Diffraction figure of merit L lambda / w^2");
  std::string length, waist, wavelength;
  diffraction->add_option("--length", length, "Medium length, e.g. '100 um'");
  diffraction->add_option("--waist", waist, "Beam waist, e.g. '20 um'");
  diffraction->add_option("--wavelength", wavelength, "Wavelength, e.g. '1 um'");
  add_common(diffraction, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const auto start = std::chrono::steady_clock::now();
  if (preset->parsed()) {
    report(h::run_preset(preset_name, overrides(c)), c);
  } else if (simulate->parsed()) {
    report(run_config(c, h::Mode::numeric), c);
  } else if (analytic->parsed()) {
    report(run_config(c, h::Mode::analytic), c);
  } else if (compare->parsed()) {
    report(run_config(c, h::Mode::compare), c);
  } else if (sweep->parsed()) {
    h::KeyValueConfig raw = load_raw(c);
    if (!parameter.empty()) {
      raw.set("sweep.parameter", parameter);
    }
    if (!values.empty()) {
      raw.set("sweep.values", values);
    }
    if (!reduction.empty()) {
      raw.set("sweep.reduction", reduction);
    }
    const h::SweepSpec spec = h::sweep_spec(raw);
    h::validate(spec);
    report(h::run_sweep(spec, raw, c.jobs), c);
  } else if (vortex->parsed()) {
    h::KeyValueConfig raw = load_raw(c);
    if (!raw.contains("vortex.l")) {
      raw.set("vortex.l", "1");
    }
    report(h::vortex_bundle(h::run_experiment(h::resolve(raw))), c);
  } else if (adiabatic->parsed()) {
    const h::ArtifactBundle b = h::adiabaticity_bundle(h::resolve(load_raw(c)));
    const auto& row = b.tables.front().rows.front();
    fmt::print("max |theta'| = {:.6g} / L_abs, |beta| = {:.6g} / L_abs, margin = {:.6g}: {}\n",
               std::get<double>(row[0]), std::get<double>(row[1]), std::get<double>(row[2]),
               std::get<std::string>(row[4]));
    report(b, c);
  } else if (diffraction->parsed()) {
    h::ArtifactBundle b;
    if (!c.config.empty() || !c.preset.empty()) {
      b = h::diffraction_bundle(load_raw(c));
    } else {
      const double l = h::parse_physical_length_um(length.empty() ? "100 um" : length);
      const double w = h::parse_physical_length_um(waist.empty() ? "20 um" : waist);
      const double lambda = h::parse_physical_length_um(wavelength.empty() ? "1 um" : wavelength);
      b = h::diffraction_bundle(dlambda::diffraction_check(l, w, lambda));
    }
    const auto& row = b.tables.front().rows.front();
    fmt::print("L lambda / w^2 = {:.3f} (bound pi): {}\n", std::get<double>(row[3]),
               std::get<std::string>(row[5]));
    if (c.out != "out") {
      report(b, c);
    }
    return 0;
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  fmt::print(stderr, "elapsed {:.2f} s\n", elapsed.count());
  return 0;
}

} // namespace

int main(int argc, char** argv)
{
  try {
    return run(argc, argv);
  } catch (const dlambda::DivergenceError& e) {
    fmt::print(stderr, "numeric divergence at z = {}, t = {}: {}\n", e.z(), e.t(), e.what());
    return 3;
  } catch (const dlambda::ValidationError& e) {
    fmt::print(stderr, "validation error: {}\n", e.what());
    return 2;
  } catch (const dlambda::IoError& e) {
    fmt::print(stderr, "i/o error: {}\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
}
