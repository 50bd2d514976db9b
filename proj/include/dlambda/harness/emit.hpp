#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dlambda/harness/experiment.hpp"

namespace dlambda::harness {

struct Formats
{
  bool csv = true;
  bool json = false;
  bool svg = true;
};

/// Comma-separated list of csv, json, svg.
Formats parse_formats(std::string_view list);

/// `#` header (bundle name, config echo, metadata, warnings), one header
/// row, then nine-significant-digit rows with LF endings.
std::string to_csv(const ArtifactBundle& bundle, const Table& table);
/// Matrix file: header comments then n rows of n values.
std::string to_matrix(const ArtifactBundle& bundle, const MapArtifact& map);
/// Single document with the config echo, metadata, tables and maps.
std::string to_json(const ArtifactBundle& bundle);

/// Writes the requested formats into `out_dir` (created if missing) and
/// returns the written paths. Throws IoError when a file cannot be written.
std::vector<std::filesystem::path> emit(const ArtifactBundle& bundle,
                                        const std::filesystem::path& out_dir,
                                        const Formats& formats);

} // namespace dlambda::harness
