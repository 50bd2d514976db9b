#include "dlambda/harness/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <optional>
#include <thread>

#include <fmt/format.h>

#include "dlambda/errors.hpp"

namespace dlambda::harness {

namespace {

struct RowResult
{
  std::optional<double> reduced;
  double p1 = 0.0;
  double p2 = 0.0;
  std::string error;
};

KeyValueConfig row_config(const KeyValueConfig& base, const SweepSpec& spec,
                          const std::string& value)
{
  KeyValueConfig raw = base;
  for (const auto& [key, v] : base.entries()) {
    if (key.rfind("sweep.", 0) == 0) {
      raw.erase(key);
    }
  }
  raw.set(spec.parameter, value);
  if (spec.parameter == "medium.alpha") {
    // The medium length follows alpha.
    const auto length = raw.get("medium.length");
    if (length && length->find("Labs") != std::string::npos) {
      raw.erase("medium.length");
    }
  }
  return raw;
}

RowResult run_row(const SweepSpec& spec, const KeyValueConfig& raw)
{
  RowResult row;
  try {
    ExperimentConfig cfg = resolve(raw);
    if (spec.reduction == SweepReduction::max_deviation) {
      cfg.mode = Mode::compare;
    }
    const ExperimentResult r = run_experiment(cfg);
    row.p1 = r.curves().p1.back();
    row.p2 = r.curves().p2.back();
    row.reduced = spec.reduction == SweepReduction::efficiency ? r.conversion()
                                                                : r.deviation->max();
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

} // namespace

SweepSpec sweep_spec(const KeyValueConfig& raw)
{
  SweepSpec spec;
  spec.parameter = raw.get("sweep.parameter").value_or("");
  if (auto values = raw.get("sweep.values")) {
    auto [numbers, unit] = parse_list(*values);
    for (double v : numbers) {
      spec.values.push_back(unit.empty() ? fmt::format("{}", v) : fmt::format("{} {}", v, unit));
    }
  }
  const std::string reduction = raw.get("sweep.reduction").value_or("efficiency");
  if (reduction == "efficiency") {
    spec.reduction = SweepReduction::efficiency;
  } else if (reduction == "max-deviation") {
    spec.reduction = SweepReduction::max_deviation;
  } else {
    throw ValidationError(fmt::format(
      "sweep.reduction must be efficiency or max-deviation (got '{}')", reduction));
  }
  return spec;
}

void validate(const SweepSpec& spec)
{
  if (spec.values.empty()) {
    throw ValidationError("sweep value list is empty");
  }
  if (spec.parameter.empty()) {
    throw ValidationError("sweep parameter is missing");
  }
  if (!is_known_key(spec.parameter) || spec.parameter.rfind("sweep.", 0) == 0 ||
      spec.parameter.rfind("run.", 0) == 0) {
    throw ValidationError(fmt::format("cannot sweep unknown parameter '{}'", spec.parameter));
  }
}

ArtifactBundle run_sweep(const SweepSpec& spec, const KeyValueConfig& base, std::size_t jobs)
{
  validate(spec);
  std::vector<KeyValueConfig> configs;
  configs.reserve(spec.values.size());
  for (const std::string& v : spec.values) {
    configs.push_back(row_config(base, spec, v));
  }

  if (jobs == 0) {
    jobs = std::max(1u, std::thread::hardware_concurrency());
  }
  jobs = std::min(jobs, configs.size());
  std::vector<RowResult> rows(configs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      rows[i] = run_row(spec, configs[i]);
    }
  };
  std::vector<std::jthread> pool;
  for (std::size_t j = 1; j < jobs; ++j) {
    pool.emplace_back(worker);
  }
  worker();
  pool.clear();

  const std::string reduced_name =
    spec.reduction == SweepReduction::efficiency ? "efficiency" : "max_deviation";
  ArtifactBundle b;
  try {
    b.config_echo = resolve(configs.front()).echo();
  } catch (const std::exception&) {
    for (const auto& [k, v] : configs.front().entries()) {
      b.config_echo.emplace_back(k, v);
    }
  }
  b.name = fmt::format("sweep_{}", spec.parameter);
  std::replace(b.name.begin(), b.name.end(), '.', '_');
  b.metadata.emplace_back("sweep.parameter", spec.parameter);
  b.metadata.emplace_back("sweep.reduction", reduced_name);

  Table t;
  t.name = "sweep";
  t.columns = {spec.parameter, reduced_name, "final_I_p1", "final_I_p2", "final_total", "status"};
  PlotSeries series{reduced_name, {}, {}, false};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const RowResult& r = rows[i];
    if (r.reduced) {
      t.rows.push_back({spec.values[i], *r.reduced, r.p1, r.p2, r.p1 + r.p2, std::string("ok")});
      const auto [numbers, unit] = parse_list(spec.values[i]);
      series.x.push_back(numbers.front());
      series.y.push_back(*r.reduced);
    } else {
      t.rows.push_back({spec.values[i], std::string(), std::string(), std::string(),
                        std::string(), "error: " + r.error});
      b.warnings.push_back(fmt::format("{} = {}: {}", spec.parameter, spec.values[i], r.error));
    }
  }
  b.tables.push_back(std::move(t));
  b.plots.push_back({"sweep", fmt::format("sweep of {}", spec.parameter), spec.parameter,
                     reduced_name, {series}});
  return b;
}

} // namespace dlambda::harness
