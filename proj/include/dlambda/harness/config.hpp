#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dlambda/control_profiles.hpp"
#include "dlambda/mbe_simulator.hpp"
#include "dlambda/quantum_core.hpp"
#include "dlambda/vortex_fields.hpp"

namespace dlambda::harness {

/// Raw `section.key -> value [unit]` entries of a config file.
///
/// Syntax: `[section]` headers, `key = value unit` lines, `#` comments.
/// Keys may also be written fully qualified (`profile.z_bar = 2 Labs`).
class KeyValueConfig
{
public:
  static KeyValueConfig parse(std::string_view text, std::string_view origin = "<string>");
  static KeyValueConfig load(const std::filesystem::path& path);

  void set(const std::string& key, const std::string& raw);
  void erase(const std::string& key) { entries_.erase(key); }
  std::optional<std::string> get(const std::string& key) const;
  bool contains(const std::string& key) const { return entries_.contains(key); }
  const std::map<std::string, std::string>& entries() const { return entries_; }
  /// Directory that relative table paths are resolved against.
  const std::filesystem::path& base_dir() const { return base_dir_; }

private:
  std::map<std::string, std::string> entries_;
  std::filesystem::path base_dir_;
};

enum class Mode
{
  analytic,
  numeric,
  compare
};

std::string_view to_string(Mode mode);
std::string_view to_string(Reduction reduction);

struct ProfileSpec
{
  ProfileKind kind = ProfileKind::constant;
  double omega_c = 1.0; // Gamma
  double c1 = 1.0;      // constant profile, Gamma
  double c2 = 1.0;
  double z0 = 20.0;     // Labs
  double z_bar = 2.0;   // Labs
  double sigma = 16.0;  // Labs
  std::string table;    // as written in the config
  std::vector<double> table_z, table_c1, table_c2;
};

struct VortexSpec
{
  int l = 1;
  double waist_um = 20.0;
  double wavelength_um = 1.0;
  MapGrid grid;
  std::vector<double> map_z; // Labs; empty means the exit face only
};

/// Fully resolved experiment. Internally lengths are in absorption
/// lengths, times in 1/Gamma and frequencies in Gamma.
struct ExperimentConfig
{
  std::string name = "experiment";
  Mode mode = Mode::compare;
  Reduction reduction = Reduction::pulse_energy;
  double alpha = 40.0;
  double gamma = 1.0;
  double delta = 0.0;
  std::optional<double> physical_length_um;
  ProfileSpec profile;
  InputPulse pulse;
  SimGrid grid;
  std::optional<VortexSpec> vortex;
  std::size_t adiabaticity_grid = 2048;

  double length() const { return alpha; } // L = alpha L_abs
  MediumParams medium() const;
  ControlProfile build_profile() const;
  /// Analytic grid matching the simulator's z samples.
  std::vector<double> z_grid() const;
  /// Canonical `key = value unit` listing of every resolved field.
  std::vector<std::pair<std::string, std::string>> echo() const;
};

/// Builds and validates an ExperimentConfig; every documented precondition
/// of the downstream modules is checked before returning.
ExperimentConfig resolve(const KeyValueConfig& raw);

/// True for every `section.key` the resolver understands.
bool is_known_key(const std::string& key);

/// Delimited (comma, semicolon, tab or space) table with 2 or 3 columns.
struct ProfileTable
{
  std::vector<double> z, c1, c2;
};
ProfileTable read_profile_table(const std::filesystem::path& path);

/// `a, b, c unit` -> values and trailing unit (possibly empty).
std::pair<std::vector<double>, std::string> parse_list(std::string_view raw);

/// Length with unit suffix (um, mm, m) converted to micrometres.
double parse_physical_length_um(std::string_view raw);

} // namespace dlambda::harness
