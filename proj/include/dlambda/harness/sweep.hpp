#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dlambda/harness/config.hpp"
#include "dlambda/harness/experiment.hpp"

namespace dlambda::harness {

enum class SweepReduction
{
  efficiency,   // final |Omega_p2|^2 / |Omega|^2
  max_deviation // numeric against analytic, both channels
};

struct SweepSpec
{
  std::string parameter;           // e.g. "profile.z_bar"
  std::vector<std::string> values; // raw values, units included
  SweepReduction reduction = SweepReduction::efficiency;
};

/// From `sweep.parameter`, `sweep.values` (`a, b, c unit`) and
/// `sweep.reduction`.
SweepSpec sweep_spec(const KeyValueConfig& raw);

/// Throws ValidationError for an empty value list or an unknown parameter.
void validate(const SweepSpec& spec);

/// One row per value in the given order. Rows run on `jobs` worker threads
/// (0 means available parallelism); a failing row records its error and
/// the remaining rows still run.
ArtifactBundle run_sweep(const SweepSpec& spec, const KeyValueConfig& base,
                         std::size_t jobs = 0);

} // namespace dlambda::harness
