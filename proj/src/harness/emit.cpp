#include "dlambda/harness/emit.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "dlambda/errors.hpp"
#include "dlambda/harness/svg_plot.hpp"

namespace dlambda::harness {

namespace {

std::string cell_text(const Cell& c)
{
  if (const double* v = std::get_if<double>(&c)) {
    return fmt::format("{:.9g}", *v);
  }
  const std::string& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) {
    return s;
  }
  std::string quoted = "\"";
  for (char ch : s) {
    quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  }
  return quoted + "\"";
}

std::string header(const ArtifactBundle& b)
{
  std::string out = fmt::format("# bundle: {}\n", b.name);
  for (const auto& [k, v] : b.config_echo) {
    out += fmt::format("# config: {} = {}\n", k, v);
  }
  for (const auto& [k, v] : b.metadata) {
    out += fmt::format("# meta: {} = {}\n", k, v);
  }
  for (const std::string& w : b.warnings) {
    out += fmt::format("# warning: {}\n", w);
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& text)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError(fmt::format("cannot open {} for writing", path.string()));
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) {
    throw IoError(fmt::format("failed writing {}", path.string()));
  }
}

nlohmann::ordered_json cell_json(const Cell& c)
{
  if (const double* v = std::get_if<double>(&c)) {
    return *v;
  }
  return std::get<std::string>(c);
}

} // namespace

Formats parse_formats(std::string_view list)
{
  Formats f{false, false, false};
  std::stringstream ss{std::string(list)};
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "csv") {
      f.csv = true;
    } else if (item == "json") {
      f.json = true;
    } else if (item == "svg" || item == "svg-plot") {
      f.svg = true;
    } else {
      throw ValidationError(fmt::format("unknown output format '{}' (csv, json, svg)", item));
    }
  }
  if (!f.csv && !f.json && !f.svg) {
    throw ValidationError("no output format requested");
  }
  return f;
}

std::string to_csv(const ArtifactBundle& bundle, const Table& table)
{
  std::string out = header(bundle);
  out += fmt::format("# table: {}\n", table.name);
  out += fmt::format("{}\n", fmt::join(table.columns, ","));
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out += (i ? "," : "") + cell_text(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string to_matrix(const ArtifactBundle& bundle, const MapArtifact& map)
{
  std::string out = header(bundle);
  out += fmt::format("# map: {}\n# quantity: {}\n# channel: {}\n# l: {}\n# waist_um: {:.9g}\n"
                     "# z_Labs: {:.9g}\n# n: {}\n# coord_min_um: {:.9g}\n# spacing_um: {:.9g}\n",
                     map.name, map.quantity, map.channel, map.l, map.waist_um, map.z, map.n,
                     map.coord_min, map.spacing);
  for (std::size_t iy = 0; iy < map.n; ++iy) {
    for (std::size_t ix = 0; ix < map.n; ++ix) {
      out += fmt::format("{}{:.9g}", ix ? "," : "", map.values[iy * map.n + ix]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const ArtifactBundle& b)
{
  nlohmann::ordered_json doc;
  doc["bundle"] = b.name;
  doc["config"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : b.config_echo) {
    doc["config"][k] = v;
  }
  doc["metadata"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : b.metadata) {
    doc["metadata"][k] = v;
  }
  doc["warnings"] = b.warnings;
  doc["tables"] = nlohmann::ordered_json::object();
  for (const Table& t : b.tables) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
      nlohmann::ordered_json r = nlohmann::ordered_json::array();
      for (const Cell& c : row) {
        r.push_back(cell_json(c));
      }
      rows.push_back(std::move(r));
    }
    doc["tables"][t.name] = {{"columns", t.columns}, {"rows", std::move(rows)}};
  }
  doc["maps"] = nlohmann::ordered_json::array();
  for (const MapArtifact& m : b.maps) {
    doc["maps"].push_back({{"name", m.name},
                           {"quantity", m.quantity},
                           {"channel", m.channel},
                           {"l", m.l},
                           {"waist_um", m.waist_um},
                           {"z_Labs", m.z},
                           {"n", m.n},
                           {"coord_min_um", m.coord_min},
                           {"spacing_um", m.spacing},
                           {"values", m.values}});
  }
  return doc.dump(1) + "\n";
}

std::vector<std::filesystem::path> emit(const ArtifactBundle& bundle,
                                        const std::filesystem::path& out_dir,
                                        const Formats& formats)
{
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) {
    throw IoError(fmt::format("cannot create output directory {}", out_dir.string()));
  }
  std::vector<std::filesystem::path> written;
  auto put = [&](const std::string& file, const std::string& text) {
    const std::filesystem::path path = out_dir / file;
    write_file(path, text);
    written.push_back(path);
  };
  if (formats.csv) {
    for (const Table& t : bundle.tables) {
      put(t.name == bundle.name ? t.name + ".csv" : fmt::format("{}_{}.csv", bundle.name, t.name),
          to_csv(bundle, t));
    }
    for (const MapArtifact& m : bundle.maps) {
      put(fmt::format("{}_{}.csv", bundle.name, m.name), to_matrix(bundle, m));
    }
  }
  if (formats.json) {
    put(bundle.name + ".json", to_json(bundle));
  }
  if (formats.svg) {
    for (const PlotSpec& p : bundle.plots) {
      put(fmt::format("{}_{}.svg", bundle.name, p.name), render_svg(p));
    }
  }
  return written;
}

} // namespace dlambda::harness
