#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "dlambda/analytic_propagator.hpp"
#include "dlambda/control_profiles.hpp"
#include "dlambda/harness/config.hpp"
#include "dlambda/mbe_simulator.hpp"
#include "dlambda/vortex_fields.hpp"

namespace dlambda::harness {

using Cell = std::variant<double, std::string>;

struct Table
{
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  /// Column `c` as numbers; throws if a cell is not numeric.
  std::vector<double> column(std::string_view c) const;
};

/// Square real-valued matrix (row-major, x fastest) over physical
/// coordinates in micrometres.
struct MapArtifact
{
  std::string name; // e.g. "z40_p2_intensity"
  std::string channel;
  std::string quantity; // intensity or phase
  int l = 0;
  double waist_um = 0.0;
  double z = 0.0; // Labs
  std::size_t n = 0;
  double coord_min = 0.0;
  double spacing = 0.0;
  std::vector<double> values;
};

struct PlotSeries
{
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

struct PlotSpec
{
  std::string name;
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
};

using Entries = std::vector<std::pair<std::string, std::string>>;

struct ArtifactBundle
{
  std::string name;
  Entries config_echo;
  Entries metadata;
  std::vector<Table> tables;
  std::vector<MapArtifact> maps;
  std::vector<PlotSpec> plots;
  std::vector<std::string> warnings;

  const Table& table(std::string_view name) const;
};

struct ExperimentResult
{
  ExperimentConfig config;
  std::optional<PropagationResult> analytic;
  std::optional<SpaceTimeRecord> numeric;
  std::optional<IntensityCurves> analytic_curves;
  std::optional<IntensityCurves> numeric_curves;
  std::optional<DeviationReport> deviation;
  std::optional<AdiabaticityReport> adiabaticity;
  std::vector<TransversePair> transverse;
  std::vector<std::string> warnings;

  /// |Omega_p2(z_f)|^2 / |Omega|^2 from the numeric run if present,
  /// otherwise from the analytic one.
  double conversion() const;
  /// Final total normalised intensity, same preference.
  double final_total() const;
  const IntensityCurves& curves() const;
};

/// Runs the analytic and/or numeric paths requested by `config.mode`.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Curves, control profile, deviation and maps of a finished run.
ArtifactBundle make_bundle(const ExperimentResult& result);

std::vector<std::string> preset_names();
/// Raw config of a named preset; throws ValidationError listing the known
/// presets otherwise.
KeyValueConfig preset_config(std::string_view name);

/// Resolves the preset with `overrides` applied on top and runs it.
ArtifactBundle run_preset(std::string_view name,
                          const std::vector<std::pair<std::string, std::string>>& overrides = {});

/// Diffraction figure of merit for the physical medium length and the
/// vortex waist and wavelength of `raw`.
ArtifactBundle diffraction_bundle(const KeyValueConfig& raw);
ArtifactBundle diffraction_bundle(const DiffractionCheck& check, Entries echo = {});

ArtifactBundle adiabaticity_bundle(const ExperimentConfig& config);

/// Transverse maps only, from the numeric factors if the mode permits it.
ArtifactBundle vortex_bundle(const ExperimentResult& result);

} // namespace dlambda::harness
