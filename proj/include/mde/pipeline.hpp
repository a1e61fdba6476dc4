#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "mde/config.hpp"
#include "mde/divergence.hpp"
#include "mde/io.hpp"
#include "mde/surface.hpp"

namespace mde {

/// What a pipeline run should produce.  At least one of `measures` /
/// `with_bootstrap` / `with_crossval` must request work; bootstrap implies an
/// affinity surface even when `measures` omits it.
struct PipelineRequest {
  std::vector<Measure> measures{Measure::affinity};
  bool with_estimates = true;  // write estimate_<measure>.json artifacts
  bool with_bootstrap = false;
  bool with_crossval = false;
  Measure crossval_measure = Measure::affinity;
  std::filesystem::path out_dir;
  std::string command = "estimate";  // recorded in run metadata
};

struct PipelineOutcome {
  std::vector<std::pair<Measure, Estimate>> estimates;
  std::vector<std::filesystem::path> artifacts;
  double wall_time_s = 0.0;
};

/// Composes the full run: load the suite, build one surface per requested
/// measure, locate each best estimate, then optionally bootstrap a
/// confidence set (always from the affinity surface, which is added if not
/// requested) and cross-validate the suite.  All artifacts - surfaces
/// (JSON + plot table), estimates, confidence set, cross-validation report,
/// run metadata - are written into `out_dir` by the calling thread only.
/// Any module error propagates unchanged except for a prefix naming the
/// failing stage.
PipelineOutcome run_pipeline(const Manifest& manifest, const RunConfig& config,
                             const PipelineRequest& request);

}  // namespace mde
