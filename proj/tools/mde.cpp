// mde - minimum-distance estimation of a polar location from bivariate
// velocity samples.  See README.md for the workflow; `mde --help` for usage.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "mde/bootstrap.hpp"
#include "mde/config.hpp"
#include "mde/divergence.hpp"
#include "mde/errors.hpp"
#include "mde/grid.hpp"
#include "mde/io.hpp"
#include "mde/kde.hpp"
#include "mde/pipeline.hpp"
#include "mde/ratio.hpp"
#include "mde/rng.hpp"
#include "mde/synthgen.hpp"

namespace {

namespace fs = std::filesystem;

/// Shared config plumbing: defaults, then an optional --config file, then
/// explicit flags (most specific wins).
struct ConfigCli {
  std::string config_path;
  std::size_t resolution = 0;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  std::size_t replicates = 0;
  double level = 0.0;

  CLI::Option* config_opt = nullptr;
  CLI::Option* resolution_opt = nullptr;
  CLI::Option* alpha_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* threads_opt = nullptr;
  CLI::Option* replicates_opt = nullptr;
  CLI::Option* level_opt = nullptr;

  void attach(CLI::App& cmd) {
    config_opt = cmd.add_option("--config", config_path,
                                "Key=value config file (see README)");
    resolution_opt = cmd.add_option("--resolution", resolution,
                                    "Quadrature nodes per axis (default 256)");
    alpha_opt = cmd.add_option("--alpha", alpha,
                               "Mixture weight for rPE, in [0,1) (default 0.5)");
    seed_opt = cmd.add_option("--seed", seed, "Random seed (default 1729)");
    threads_opt = cmd.add_option("--threads", threads,
                                 "Worker threads (default 1)");
  }

  void attach_bootstrap(CLI::App& cmd) {
    replicates_opt = cmd.add_option("-B,--replicates", replicates,
                                    "Bootstrap replicates (default 300)");
    level_opt = cmd.add_option("--level", level,
                               "Confidence level in (0,1) (default 0.95)");
  }

  mde::RunConfig build() const {
    mde::RunConfig config = config_path.empty()
                                ? mde::default_config()
                                : mde::parse_config_file(config_path);
    if (resolution_opt && resolution_opt->count()) config.quad_resolution = resolution;
    if (alpha_opt && alpha_opt->count()) config.alpha = alpha;
    if (seed_opt && seed_opt->count()) config.seed = seed;
    if (threads_opt && threads_opt->count()) config.threads = threads;
    if (replicates_opt && replicates_opt->count()) config.bootstrap_replicates = replicates;
    if (level_opt && level_opt->count()) config.confidence_level = level;
    mde::validate(config);
    return config;
  }
};

std::vector<mde::Measure> parse_measures(const std::vector<std::string>& names) {
  std::vector<mde::Measure> out;
  out.reserve(names.size());
  for (const auto& name : names) out.push_back(mde::measure_from_string(name));
  return out;
}

void print_estimates(const mde::PipelineOutcome& outcome) {
  for (const auto& [measure, est] : outcome.estimates) {
    std::printf("%s %s: cell (k=%d, j=%d)  r=%.4f theta=%.4f  value=%.17g\n",
                to_string(measure).c_str(),
                est.orientation == mde::Orientation::maximize ? "argmax" : "argmin",
                est.location.k, est.location.j, est.location.r,
                est.location.theta, est.value);
  }
}

int cmd_estimate(const ConfigCli& cfg, const std::string& manifest_path,
                 const std::string& out_dir, const std::vector<std::string>& measures,
                 bool with_bootstrap, bool with_crossval) {
  const mde::RunConfig config = cfg.build();
  const mde::Manifest manifest = mde::load_manifest(manifest_path);
  mde::PipelineRequest request;
  request.command = "estimate";
  request.measures = parse_measures(measures);
  request.with_estimates = true;
  request.with_bootstrap = with_bootstrap;
  request.with_crossval = with_crossval;
  request.out_dir = out_dir;
  const mde::PipelineOutcome outcome = run_pipeline(manifest, config, request);
  print_estimates(outcome);
  std::printf("%zu artifacts in %s (%.1f s)\n", outcome.artifacts.size(),
              out_dir.c_str(), outcome.wall_time_s);
  return 0;
}

int cmd_surface(const ConfigCli& cfg, const std::string& manifest_path,
                const std::string& out_dir, const std::vector<std::string>& measures) {
  const mde::RunConfig config = cfg.build();
  const mde::Manifest manifest = mde::load_manifest(manifest_path);
  mde::PipelineRequest request;
  request.command = "surface";
  request.measures = parse_measures(measures);
  request.with_estimates = false;
  request.out_dir = out_dir;
  const mde::PipelineOutcome outcome = run_pipeline(manifest, config, request);
  std::printf("%zu artifacts in %s (%.1f s)\n", outcome.artifacts.size(),
              out_dir.c_str(), outcome.wall_time_s);
  return 0;
}

int cmd_bootstrap_ci(const ConfigCli& cfg, const std::string& manifest_path,
                     const std::string& out_dir) {
  const mde::RunConfig config = cfg.build();
  const mde::Manifest manifest = mde::load_manifest(manifest_path);
  mde::PipelineRequest request;
  request.command = "bootstrap-ci";
  request.measures = {mde::Measure::affinity};
  request.with_estimates = true;
  request.with_bootstrap = true;
  request.out_dir = out_dir;
  const mde::PipelineOutcome outcome = run_pipeline(manifest, config, request);
  print_estimates(outcome);
  std::printf("confidence set written to %s (%.1f s)\n",
              (fs::path(out_dir) / "confidence_set.json").string().c_str(),
              outcome.wall_time_s);
  return 0;
}

int cmd_crossval(const ConfigCli& cfg, const std::string& manifest_path,
                 const std::string& out_dir, const std::string& measure) {
  const mde::RunConfig config = cfg.build();
  const mde::Manifest manifest = mde::load_manifest(manifest_path);
  mde::PipelineRequest request;
  request.command = "crossval";
  request.measures.clear();
  request.with_estimates = false;
  request.with_crossval = true;
  request.crossval_measure = mde::measure_from_string(measure);
  request.out_dir = out_dir;
  run_pipeline(manifest, config, request);
  std::printf("cross-validation report written to %s\n",
              (fs::path(out_dir) / "crossval.txt").string().c_str());
  return 0;
}

int cmd_generate(const ConfigCli& cfg, const std::string& out_dir,
                 const std::string& model, const std::vector<int>& cell,
                 std::size_t n, std::size_t observed_n,
                 const mde::FieldParams& params) {
  const mde::RunConfig config = cfg.build();
  mde::validate(params);
  const mde::GridSpec grid = config.grid;
  const int k = cell.at(0), j = cell.at(1);
  const mde::GridLocation truth = mde::grid_location(k, j, grid);
  if (observed_n == 0) observed_n = n;

  const fs::path root(out_dir);
  fs::create_directories(root / "cells");

  const std::vector<mde::VelocityDataset> suite =
      mde::generate_suite(grid, n, params, config.seed);

  mde::Manifest manifest;
  manifest.grid = grid;
  manifest.model = model;
  manifest.root = root;
  manifest.observed_path = "observed.txt";
  char name[64];
  for (int i = 1; i <= grid.cell_count(); ++i) {
    const auto [ck, cj] = mde::indices_from_flat(i, grid);
    std::snprintf(name, sizeof name, "cells/k%02d_j%02d.txt", ck, cj);
    mde::ManifestEntry entry;
    entry.k = ck;
    entry.j = cj;
    entry.path = name;
    mde::write_velocity_file(root / name, suite[static_cast<std::size_t>(i - 1)],
                             "simulated velocities, cell (" + std::to_string(ck) +
                                 ", " + std::to_string(cj) + ")");
    manifest.entries.push_back(std::move(entry));
  }

  // Substream 0 is reserved for the observed draw; suite cells use 1..d.
  mde::Rng observed_rng = mde::Rng(config.seed).substream(0);
  const mde::VelocityDataset observed =
      mde::generate_velocity_dataset(truth, observed_n, params, observed_rng);
  mde::write_velocity_file(root / "observed.txt", observed,
                           "observed velocities drawn at cell (" +
                               std::to_string(k) + ", " + std::to_string(j) + ")");
  mde::save_manifest(root / "manifest.json", manifest);

  std::printf("suite of %d cells (n=%zu) + observed (n=%zu at k=%d, j=%d)\n",
              grid.cell_count(), n, observed_n, k, j);
  std::printf("manifest written to %s\n", (root / "manifest.json").string().c_str());
  return 0;
}

int cmd_divergence(const ConfigCli& cfg, const std::string& g_path,
                   const std::string& f_path, const std::string& measure_name) {
  const mde::RunConfig config = cfg.build();
  const mde::VelocityDataset g = mde::parse_velocity_file(g_path);
  const mde::VelocityDataset f = mde::parse_velocity_file(f_path);

  double value = 0.0;
  if (measure_name == "rpe-direct") {
    // rPE(g, f) compares against the mixture h_alpha = alpha f + (1-alpha) g,
    // so f is the ratio's numerator and g its denominator.
    mde::Rng rng(config.seed);
    const mde::RatioModel model =
        mde::fit_relative_ratio(f, g, config.alpha, rng);
    value = mde::direct_rpe(model, f, g);
  } else {
    const mde::Measure measure = mde::measure_from_string(measure_name);
    const mde::DensityEstimate g_kde = mde::fit_kde(g);
    const mde::DensityEstimate f_kde = mde::fit_kde(f);
    const mde::QuadratureGrid quad = mde::make_quadrature(
        f_kde, g_kde, config.quad_resolution, config.quad_resolution);
    value = mde::evaluate_measure(measure, g_kde, f_kde, quad, config.alpha).value;
  }
  std::printf("%.17g\n", value);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum-distance location estimation from bivariate velocity samples"};
  app.require_subcommand(1);

  // --- estimate ---
  auto* estimate = app.add_subcommand(
      "estimate", "Build surfaces and report the best cell per measure");
  std::string est_manifest, est_out;
  std::vector<std::string> est_measures{"affinity"};
  bool est_bootstrap = false, est_crossval = false;
  ConfigCli est_cfg;
  estimate->add_option("--manifest", est_manifest, "Suite manifest JSON")->required();
  estimate->add_option("--out", est_out, "Output directory")->required();
  estimate->add_option("--measure", est_measures,
                       "affinity|hellinger|kl|pe|rpe (repeatable)");
  estimate->add_flag("--bootstrap", est_bootstrap, "Also bootstrap a confidence set");
  estimate->add_flag("--crossval", est_crossval, "Also cross-validate the suite");
  est_cfg.attach(*estimate);
  est_cfg.attach_bootstrap(*estimate);

  // --- surface ---
  auto* surface = app.add_subcommand(
      "surface", "Build and write divergence surfaces only");
  std::string sur_manifest, sur_out;
  std::vector<std::string> sur_measures{"affinity"};
  ConfigCli sur_cfg;
  surface->add_option("--manifest", sur_manifest, "Suite manifest JSON")->required();
  surface->add_option("--out", sur_out, "Output directory")->required();
  surface->add_option("--measure", sur_measures,
                      "affinity|hellinger|kl|pe|rpe (repeatable)");
  sur_cfg.attach(*surface);

  // --- bootstrap-ci ---
  auto* bootstrap = app.add_subcommand(
      "bootstrap-ci", "Affinity surface plus smoothed-bootstrap confidence set");
  std::string boot_manifest, boot_out;
  ConfigCli boot_cfg;
  bootstrap->add_option("--manifest", boot_manifest, "Suite manifest JSON")->required();
  bootstrap->add_option("--out", boot_out, "Output directory")->required();
  boot_cfg.attach(*bootstrap);
  boot_cfg.attach_bootstrap(*bootstrap);

  // --- crossval ---
  auto* crossval = app.add_subcommand(
      "crossval", "Leave-out block cross-validation of a simulation suite");
  std::string cv_manifest, cv_out, cv_measure = "affinity";
  ConfigCli cv_cfg;
  crossval->add_option("--manifest", cv_manifest, "Suite manifest JSON")->required();
  crossval->add_option("--out", cv_out, "Output directory")->required();
  crossval->add_option("--measure", cv_measure, "affinity|hellinger|kl|pe|rpe");
  cv_cfg.attach(*crossval);

  // --- generate ---
  auto* generate = app.add_subcommand(
      "generate", "Write a synthetic suite + observed dataset + manifest");
  std::string gen_out, gen_model = "synthetic";
  std::vector<int> gen_cell;
  std::size_t gen_n = 400, gen_observed_n = 0;
  mde::FieldParams gen_params;
  ConfigCli gen_cfg;
  generate->add_option("--out", gen_out, "Output directory")->required();
  generate->add_option("--model", gen_model, "Model name recorded in the manifest");
  generate->add_option("--cell", gen_cell,
                       "True cell of the observed draw: K J (1-based)")
      ->expected(2)
      ->required();
  generate->add_option("--n", gen_n, "Sample size per grid cell (default 400)");
  generate->add_option("--observed-n", gen_observed_n,
                       "Observed sample size (default: --n)");
  generate->add_option("--amplitude", gen_params.amplitude,
                       "Field amplitude (default 20)");
  generate->add_option("--radial-gain", gen_params.radial_gain,
                       "Transverse gain (default 1)");
  generate->add_option("--angular-gain", gen_params.angular_gain,
                       "Angular gain (default 0.07)");
  generate->add_option("--noise", gen_params.noise_scale,
                       "Noise scale (default 1)");
  generate->add_option("--modes", gen_params.mode_count,
                       "Mixture mode count (default 1)");
  generate->add_option("--mode-spread", gen_params.mode_spread,
                       "Mode offset magnitude (default 0)");
  gen_cfg.attach(*generate);

  // --- divergence ---
  auto* divergence = app.add_subcommand(
      "divergence", "Print one measure between two velocity files");
  std::string div_g, div_f, div_measure = "affinity";
  ConfigCli div_cfg;
  divergence->add_option("g_file", div_g, "First dataset (g)")->required();
  divergence->add_option("f_file", div_f, "Second dataset (f)")->required();
  divergence->add_option(
      "--measure", div_measure,
      "affinity|hellinger|bhattacharyya|kl|pe|rpe|rpe-direct");
  div_cfg.attach(*divergence);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // help/version exit 0; usage errors exit 1
  }

  try {
    if (estimate->parsed()) {
      return cmd_estimate(est_cfg, est_manifest, est_out, est_measures,
                          est_bootstrap, est_crossval);
    }
    if (surface->parsed()) {
      return cmd_surface(sur_cfg, sur_manifest, sur_out, sur_measures);
    }
    if (bootstrap->parsed()) {
      return cmd_bootstrap_ci(boot_cfg, boot_manifest, boot_out);
    }
    if (crossval->parsed()) {
      return cmd_crossval(cv_cfg, cv_manifest, cv_out, cv_measure);
    }
    if (generate->parsed()) {
      return cmd_generate(gen_cfg, gen_out, gen_model, gen_cell, gen_n,
                          gen_observed_n, gen_params);
    }
    if (divergence->parsed()) {
      return cmd_divergence(div_cfg, div_g, div_f, div_measure);
    }
    std::fprintf(stderr, "error: no subcommand selected\n");
    return 1;
  } catch (const mde::data_error& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 2;
  } catch (const mde::numerical_error& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 3;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 1;
  } catch (const std::out_of_range& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
