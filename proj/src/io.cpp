#include "mde/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "mde/errors.hpp"

namespace mde {

using nlohmann::json;

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open " + path.string() + " for reading");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path);
  if (!out) throw data_error("cannot open " + path.string() + " for writing");
  return out;
}

json parse_json_file(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw data_error(path.string() + ": " + e.what());
  }
  return j;
}

json grid_to_json(const GridSpec& grid) {
  return json{{"r0", grid.r0},
              {"theta0", grid.theta0},
              {"delta_r", grid.delta_r},
              {"delta_theta", grid.delta_theta},
              {"n_r", grid.n_r},
              {"n_theta", grid.n_theta}};
}

GridSpec grid_from_json(const json& j, const std::string& where) {
  try {
    GridSpec grid;
    grid.r0 = j.at("r0").get<double>();
    grid.theta0 = j.at("theta0").get<double>();
    grid.delta_r = j.at("delta_r").get<double>();
    grid.delta_theta = j.at("delta_theta").get<double>();
    grid.n_r = j.at("n_r").get<int>();
    grid.n_theta = j.at("n_theta").get<int>();
    return grid;
  } catch (const json::exception& e) {
    throw data_error(where + ": bad grid object: " + e.what());
  }
}

}  // namespace

VelocityDataset parse_velocity_file(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  VelocityDataset data;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string cleaned;
    cleaned.reserve(line.size());
    for (char c : line) cleaned.push_back(c == ',' ? ' ' : c);
    std::istringstream fields(cleaned);
    double a = 0.0, b = 0.0;
    if (!(fields >> a)) {
      // Nothing parseable: blank or comment lines are fine, junk is not.
      std::istringstream probe(cleaned);
      std::string token;
      if (!(probe >> token) || token.front() == '#') continue;
      throw data_error(path.string() + ":" + std::to_string(line_no) +
                       ": expected two numeric fields");
    }
    std::string trailing;
    if (!(fields >> b) || (fields >> trailing)) {
      throw data_error(path.string() + ":" + std::to_string(line_no) +
                       ": expected exactly two numeric fields");
    }
    if (!std::isfinite(a) || !std::isfinite(b)) {
      throw data_error(path.string() + ":" + std::to_string(line_no) +
                       ": non-finite value");
    }
    data.append(a, b);
  }
  if (data.size() < 2) {
    throw data_error(path.string() + ": needs at least two data rows, found " +
                     std::to_string(data.size()));
  }
  return data;
}

void write_velocity_file(const std::filesystem::path& path,
                         const VelocityDataset& data, const std::string& comment) {
  std::ofstream out = open_output(path);
  if (!comment.empty()) out << "# " << comment << "\n";
  char buf[64];
  for (std::size_t i = 0; i < data.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", data.v1[i], data.v2[i]);
    out << buf;
  }
  if (!out) throw data_error("failed writing " + path.string());
}

void validate_manifest(const Manifest& manifest) {
  validate(manifest.grid);
  if (manifest.observed_path.empty()) {
    throw data_error("manifest: missing observed dataset path");
  }
  const auto d = static_cast<std::size_t>(manifest.grid.cell_count());
  std::vector<int> seen(d, 0);
  for (const auto& entry : manifest.entries) {
    int flat = 0;
    try {
      flat = flat_index(entry.k, entry.j, manifest.grid);
    } catch (const std::out_of_range& e) {
      throw data_error(std::string("manifest: entry outside the grid: ") + e.what());
    }
    if (entry.path.empty()) {
      throw data_error("manifest: empty path for cell (" + std::to_string(entry.k) +
                       ", " + std::to_string(entry.j) + ")");
    }
    if (++seen[static_cast<std::size_t>(flat - 1)] > 1) {
      throw data_error("manifest: duplicate entry for cell (" +
                       std::to_string(entry.k) + ", " + std::to_string(entry.j) + ")");
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    if (seen[i] == 0) {
      const auto [k, j] = indices_from_flat(static_cast<int>(i) + 1, manifest.grid);
      throw data_error("manifest: missing entry for cell (" + std::to_string(k) +
                       ", " + std::to_string(j) + ")");
    }
  }
}

Manifest load_manifest(const std::filesystem::path& path) {
  const json j = parse_json_file(path);
  Manifest manifest;
  manifest.root = path.has_parent_path() ? path.parent_path()
                                         : std::filesystem::path(".");
  try {
    manifest.grid = grid_from_json(j.at("grid"), path.string());
    manifest.model = j.value("model", std::string{});
    manifest.observed_path = std::filesystem::path(j.at("observed").get<std::string>());
    for (const auto& entry : j.at("cells")) {
      ManifestEntry e;
      e.k = entry.at("k").get<int>();
      e.j = entry.at("j").get<int>();
      e.path = std::filesystem::path(entry.at("path").get<std::string>());
      manifest.entries.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    throw data_error(path.string() + ": bad manifest: " + e.what());
  }
  validate_manifest(manifest);
  return manifest;
}

void save_manifest(const std::filesystem::path& path, const Manifest& manifest) {
  validate_manifest(manifest);
  json cells = json::array();
  for (const auto& entry : manifest.entries) {
    cells.push_back(json{{"k", entry.k},
                         {"j", entry.j},
                         {"path", entry.path.generic_string()}});
  }
  const json j{{"model", manifest.model},
               {"grid", grid_to_json(manifest.grid)},
               {"observed", manifest.observed_path.generic_string()},
               {"cells", std::move(cells)}};
  std::ofstream out = open_output(path);
  out << j.dump(2) << "\n";
  if (!out) throw data_error("failed writing " + path.string());
}

std::vector<VelocityDataset> load_suite(const Manifest& manifest) {
  validate_manifest(manifest);
  const auto d = static_cast<std::size_t>(manifest.grid.cell_count());
  std::vector<VelocityDataset> suite(d);
  std::vector<bool> filled(d, false);
  for (const auto& entry : manifest.entries) {
    const auto flat = static_cast<std::size_t>(
        flat_index(entry.k, entry.j, manifest.grid));
    try {
      suite[flat - 1] = parse_velocity_file(manifest.resolve(entry.path));
    } catch (const data_error& e) {
      throw data_error("cell (" + std::to_string(entry.k) + ", " +
                       std::to_string(entry.j) + "): " + e.what());
    }
    filled[flat - 1] = true;
  }
  (void)filled;  // completeness already guaranteed by validate_manifest
  return suite;
}

void write_surface_json(const std::filesystem::path& path, const Surface& surface) {
  json j{{"measure", to_string(surface.measure)},
         {"grid", grid_to_json(surface.grid)},
         {"values", surface.values},
         {"observed_n", surface.observed_n},
         {"per_cell_n", surface.per_cell_n}};
  if (surface.measure == Measure::rpe) j["alpha"] = surface.alpha;
  std::ofstream out = open_output(path);
  out << j.dump(2) << "\n";
  if (!out) throw data_error("failed writing " + path.string());
}

Surface read_surface_json(const std::filesystem::path& path) {
  const json j = parse_json_file(path);
  Surface surface;
  try {
    surface.measure = measure_from_string(j.at("measure").get<std::string>());
    surface.grid = grid_from_json(j.at("grid"), path.string());
    surface.values = j.at("values").get<std::vector<double>>();
    surface.observed_n = j.value("observed_n", std::size_t{0});
    surface.per_cell_n = j.value("per_cell_n", std::vector<std::size_t>{});
    surface.alpha = j.value("alpha", 0.5);
  } catch (const json::exception& e) {
    throw data_error(path.string() + ": bad surface: " + e.what());
  }
  validate(surface.grid);
  if (surface.values.size() != static_cast<std::size_t>(surface.grid.cell_count())) {
    throw data_error(path.string() + ": surface has " +
                     std::to_string(surface.values.size()) + " values for a " +
                     std::to_string(surface.grid.cell_count()) + "-cell grid");
  }
  return surface;
}

void write_surface_table(const std::filesystem::path& path, const Surface& surface) {
  std::ofstream out = open_output(path);
  out << "# r theta " << to_string(surface.measure) << "\n";
  char buf[96];
  for (int i = 1; i <= surface.grid.cell_count(); ++i) {
    const GridLocation loc = location_from_flat(i, surface.grid);
    std::snprintf(buf, sizeof buf, "%.4f %.4f %.17g\n", loc.r, loc.theta,
                  surface.values[static_cast<std::size_t>(i - 1)]);
    out << buf;
  }
  if (!out) throw data_error("failed writing " + path.string());
}

void write_estimate_json(const std::filesystem::path& path, const Surface& surface,
                         const Estimate& estimate) {
  const json j{
      {"measure", to_string(surface.measure)},
      {"orientation",
       estimate.orientation == Orientation::maximize ? "max" : "min"},
      {"k", estimate.location.k},
      {"j", estimate.location.j},
      {"r", estimate.location.r},
      {"theta", estimate.location.theta},
      {"value", estimate.value}};
  std::ofstream out = open_output(path);
  out << j.dump(2) << "\n";
  if (!out) throw data_error("failed writing " + path.string());
}

void write_confidence_set_json(const std::filesystem::path& path,
                               const ConfidenceSet& set) {
  json members = json::array();
  for (const auto& m : set.members) {
    members.push_back(json{{"k", m.k},
                           {"j", m.j},
                           {"r", m.r},
                           {"theta", m.theta},
                           {"affinity", m.affinity}});
  }
  const json j{{"level", set.level},
               {"cutoff", set.cutoff},
               {"members", std::move(members)},
               {"replicates", set.replicate_affinities}};
  std::ofstream out = open_output(path);
  out << j.dump(2) << "\n";
  if (!out) throw data_error("failed writing " + path.string());
}

void write_crossval_json(const std::filesystem::path& path,
                         const CrossValReport& report) {
  json records = json::array();
  for (const auto& rec : report.records) {
    records.push_back(json{{"midpoint_k", rec.midpoint_k},
                           {"midpoint_j", rec.midpoint_j},
                           {"best_k", rec.best_k},
                           {"best_j", rec.best_j},
                           {"best_value", rec.best_value},
                           {"ring", rec.ring}});
  }
  const json j{{"model", report.model},
               {"measure", to_string(report.measure)},
               {"records", std::move(records)},
               {"ring1", report.ring1_hits},
               {"ring2", report.ring2_hits},
               {"beyond", report.beyond}};
  std::ofstream out = open_output(path);
  out << j.dump(2) << "\n";
  if (!out) throw data_error("failed writing " + path.string());
}

void write_crossval_table(const std::filesystem::path& path,
                          const CrossValReport& report) {
  std::ofstream out = open_output(path);
  out << "# block cross-validation";
  if (!report.model.empty()) out << " for model " << report.model;
  out << " (measure " << to_string(report.measure) << ")\n";
  out << "# midpoint(k,j)  best(k,j)  ring  value\n";
  char buf[128];
  for (const auto& rec : report.records) {
    std::snprintf(buf, sizeof buf, "(%2d,%2d)  (%2d,%2d)  %d  %.17g\n",
                  rec.midpoint_k, rec.midpoint_j, rec.best_k, rec.best_j,
                  rec.ring, rec.best_value);
    out << buf;
  }
  out << "# ring1 " << report.ring1_hits << " / ring2 " << report.ring2_hits
      << " / beyond " << report.beyond << " of " << report.records.size()
      << " blocks\n";
  if (!out) throw data_error("failed writing " + path.string());
}

}  // namespace mde
