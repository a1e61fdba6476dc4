#include "mde/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <nlohmann/json.hpp>

#include "mde/bootstrap.hpp"
#include "mde/crossval.hpp"
#include "mde/errors.hpp"
#include "mde/rng.hpp"

namespace mde {

namespace {

// Reruns any module error with the failing stage named, preserving the
// error's type (and therefore the exit code it maps to).
template <typename Fn>
auto stage(const std::string& name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const data_error& e) {
    throw data_error("[" + name + "] " + e.what());
  } catch (const numerical_error& e) {
    throw numerical_error("[" + name + "] " + e.what());
  } catch (const std::out_of_range& e) {
    throw std::out_of_range("[" + name + "] " + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("[" + name + "] " + e.what());
  }
}

}  // namespace

PipelineOutcome run_pipeline(const Manifest& manifest, const RunConfig& config,
                             const PipelineRequest& request) {
  const auto start = std::chrono::steady_clock::now();
  validate(config);
  if (request.out_dir.empty()) {
    throw std::invalid_argument("pipeline: output directory must be set");
  }
  std::filesystem::create_directories(request.out_dir);

  std::vector<Measure> measures;
  for (Measure m : request.measures) {
    if (std::find(measures.begin(), measures.end(), m) == measures.end()) {
      measures.push_back(m);
    }
  }
  if (request.with_bootstrap &&
      std::find(measures.begin(), measures.end(), Measure::affinity) ==
          measures.end()) {
    measures.push_back(Measure::affinity);  // the confidence set needs it
  }
  if (measures.empty() && !request.with_crossval) {
    throw std::invalid_argument("pipeline: nothing to do (no measure requested)");
  }

  const std::vector<VelocityDataset> sims =
      stage("load", [&] { return load_suite(manifest); });
  VelocityDataset observed;
  if (!measures.empty()) {
    observed = stage("load", [&] {
      return parse_velocity_file(manifest.resolve(manifest.observed_path));
    });
  }

  SurfaceOptions surface_options;
  surface_options.quad_resolution = config.quad_resolution;
  surface_options.alpha = config.alpha;
  surface_options.threads = config.threads;

  PipelineOutcome outcome;
  auto emit = [&outcome](const std::filesystem::path& p) {
    outcome.artifacts.push_back(p);
  };

  const Surface* affinity_surface = nullptr;
  std::vector<Surface> surfaces;
  surfaces.reserve(measures.size());
  for (Measure m : measures) {
    const std::string name = to_string(m);
    surfaces.push_back(stage("surface " + name, [&] {
      return build_surface(observed, sims, m, manifest.grid, surface_options);
    }));
    const Surface& surface = surfaces.back();
    const Estimate estimate =
        stage("estimate " + name, [&] { return best_estimate(surface); });
    outcome.estimates.emplace_back(m, estimate);

    stage("write " + name, [&] {
      const auto json_path = request.out_dir / ("surface_" + name + ".json");
      const auto table_path = request.out_dir / ("surface_" + name + ".txt");
      write_surface_json(json_path, surface);
      write_surface_table(table_path, surface);
      emit(json_path);
      emit(table_path);
      if (request.with_estimates) {
        const auto estimate_path = request.out_dir / ("estimate_" + name + ".json");
        write_estimate_json(estimate_path, surface, estimate);
        emit(estimate_path);
      }
    });
    if (m == Measure::affinity) affinity_surface = &surface;
  }

  if (request.with_bootstrap) {
    stage("bootstrap", [&] {
      const Estimate argmax = argmax_affinity(*affinity_surface);
      const auto flat = static_cast<std::size_t>(
          flat_index(argmax.location.k, argmax.location.j, manifest.grid));
      BootstrapOptions options;
      options.quad_resolution = config.quad_resolution;
      options.threads = config.threads;
      const ConfidenceSet set = bootstrap_confidence_set(
          observed, sims[flat - 1], *affinity_surface,
          config.bootstrap_replicates, config.confidence_level,
          Rng(config.seed), options);
      const auto path = request.out_dir / "confidence_set.json";
      write_confidence_set_json(path, set);
      emit(path);
    });
  }

  if (request.with_crossval) {
    stage("crossval", [&] {
      CrossValOptions options;
      options.quad_resolution = config.quad_resolution;
      options.threads = config.threads;
      options.alpha = config.alpha;
      options.model_name = manifest.model;
      const CrossValReport report =
          run_crossval(sims, manifest.grid, request.crossval_measure, options);
      const auto json_path = request.out_dir / "crossval.json";
      const auto table_path = request.out_dir / "crossval.txt";
      write_crossval_json(json_path, report);
      write_crossval_table(table_path, report);
      emit(json_path);
      emit(table_path);
    });
  }

  outcome.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  stage("write meta", [&] {
    nlohmann::json names = nlohmann::json::array();
    for (Measure m : measures) names.push_back(to_string(m));
    const nlohmann::json meta{
        {"command", request.command},
        {"model", manifest.model},
        {"config_hash", config_hash(config)},
        {"seed", config.seed},
        {"threads", config.threads},
        {"quad_resolution", config.quad_resolution},
        {"alpha", config.alpha},
        {"bootstrap_replicates", config.bootstrap_replicates},
        {"confidence_level", config.confidence_level},
        {"grid",
         {{"r0", config.grid.r0},
          {"theta0", config.grid.theta0},
          {"delta_r", config.grid.delta_r},
          {"delta_theta", config.grid.delta_theta},
          {"n_r", config.grid.n_r},
          {"n_theta", config.grid.n_theta}}},
        {"measures", std::move(names)},
        {"wall_time_s", outcome.wall_time_s}};
    const auto path = request.out_dir / "run_meta.json";
    std::ofstream out(path);
    if (!out) throw data_error("cannot open " + path.string() + " for writing");
    out << meta.dump(2) << "\n";
    emit(path);
  });

  return outcome;
}

}  // namespace mde
