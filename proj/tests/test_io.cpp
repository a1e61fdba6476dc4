#include <doctest.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <stdexcept>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "mde/bootstrap.hpp"
#include "mde/config.hpp"
#include "mde/crossval.hpp"
#include "mde/errors.hpp"
#include "mde/io.hpp"
#include "mde/surface.hpp"

namespace fs = std::filesystem;
using mde::Manifest;
using mde::VelocityDataset;

namespace {

// Unique scratch directory per test case, removed on scope exit.
struct TempDir {
  fs::path path;

  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    const auto ticks =
        std::chrono::steady_clock::now().time_since_epoch().count();
    path = fs::temp_directory_path() /
           ("mde_io_" + tag + "_" + std::to_string(ticks % 1000000) + "_" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

// A tiny but complete manifest on disk: 3x3 grid, deterministic cell files.
Manifest make_disk_manifest(const TempDir& dir) {
  Manifest m;
  m.grid = testutil::tiny_grid();
  m.model = "demo";
  m.root = dir.path;
  m.observed_path = "observed.txt";
  mde::write_velocity_file(dir.path / "observed.txt",
                           testutil::standard_sample(40, 1));
  for (int k = 1; k <= 3; ++k) {
    for (int j = 1; j <= 3; ++j) {
      const std::string rel =
          "cells/k" + std::to_string(k) + "_j" + std::to_string(j) + ".txt";
      mde::write_velocity_file(
          dir.path / rel,
          testutil::gaussian_sample(30, k, j, 1.0, 1.0,
                                    static_cast<std::uint64_t>(10 * k + j)));
      m.entries.push_back({k, j, rel});
    }
  }
  return m;
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("velocity files round-trip bitwise") {
    const TempDir dir("roundtrip");
    VelocityDataset data;
    data.append(1.0 / 3.0, -2.718281828459045);
    data.append(1e-15, 6.02214076e23);
    data.append(-0.0, 123456.789012345678);
    data.append(3.14159265358979312, -1e-300);
    const fs::path file = dir.path / "vel.txt";
    mde::write_velocity_file(file, data, "round trip check");
    const VelocityDataset back = mde::parse_velocity_file(file);
    REQUIRE(back.size() == data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
      CHECK(back.v1[i] == data.v1[i]);
      CHECK(back.v2[i] == data.v2[i]);
    }
  }

  TEST_CASE("parser accepts comments, blanks, commas and mixed spacing") {
    const TempDir dir("formats");
    const fs::path file = dir.path / "vel.txt";
    write_text(file,
               "# header comment\n"
               "\n"
               "1.5 2.5\n"
               "3.5,4.5\n"
               "  5.5 ,  6.5 \n"
               "\t7.5\t8.5\n"
               "   # indented comment\n");
    const VelocityDataset data = mde::parse_velocity_file(file);
    REQUIRE(data.size() == 4);
    CHECK(data.v1[0] == 1.5);
    CHECK(data.v2[1] == 4.5);
    CHECK(data.v1[2] == 5.5);
    CHECK(data.v2[3] == 8.5);
  }

  TEST_CASE("parser reports the offending line") {
    const TempDir dir("badline");
    const fs::path file = dir.path / "vel.txt";
    SUBCASE("junk token") {
      write_text(file, "1 2\nbogus 3\n4 5\n");
      try {
        mde::parse_velocity_file(file);
        CHECK(false);
      } catch (const mde::data_error& e) {
        CHECK(std::string(e.what()).find(":2") != std::string::npos);
      }
    }
    SUBCASE("three fields") {
      write_text(file, "1 2\n3 4 5\n");
      CHECK_THROWS_AS(mde::parse_velocity_file(file), mde::data_error);
    }
    SUBCASE("missing second field") {
      write_text(file, "1 2\n3\n");
      CHECK_THROWS_AS(mde::parse_velocity_file(file), mde::data_error);
    }
    SUBCASE("non-finite value") {
      write_text(file, "1 2\nnan 4\n");
      CHECK_THROWS_AS(mde::parse_velocity_file(file), mde::data_error);
    }
    SUBCASE("too few rows") {
      write_text(file, "1 2\n");
      CHECK_THROWS_AS(mde::parse_velocity_file(file), mde::data_error);
    }
    SUBCASE("missing file") {
      CHECK_THROWS_AS(mde::parse_velocity_file(dir.path / "absent.txt"),
                      mde::data_error);
    }
  }

  TEST_CASE("manifest save, load, and suite loading") {
    const TempDir dir("manifest");
    const Manifest m = make_disk_manifest(dir);
    const fs::path mpath = dir.path / "manifest.json";
    mde::save_manifest(mpath, m);
    const Manifest loaded = mde::load_manifest(mpath);

    CHECK(loaded.model == "demo");
    CHECK(loaded.grid.n_r == 3);
    CHECK(loaded.grid.n_theta == 3);
    CHECK(loaded.grid.r0 == m.grid.r0);
    CHECK(loaded.observed_path == fs::path("observed.txt"));
    CHECK(loaded.root == dir.path);
    REQUIRE(loaded.entries.size() == 9);

    const auto suite = mde::load_suite(loaded);
    REQUIRE(suite.size() == 9);
    // flat order: cell (k, j) holds the sample seeded with 10k + j
    for (int k = 1; k <= 3; ++k) {
      for (int j = 1; j <= 3; ++j) {
        const auto& cell =
            suite[static_cast<std::size_t>(mde::flat_index(k, j, loaded.grid)) - 1];
        const VelocityDataset expect = testutil::gaussian_sample(
            30, k, j, 1.0, 1.0, static_cast<std::uint64_t>(10 * k + j));
        REQUIRE(cell.size() == expect.size());
        CHECK(cell.v1[0] == expect.v1[0]);
        CHECK(cell.v2[29] == expect.v2[29]);
      }
    }

    const VelocityDataset observed =
        mde::parse_velocity_file(loaded.resolve(loaded.observed_path));
    CHECK(observed.size() == 40);
  }

  TEST_CASE("manifest validation failures") {
    const TempDir dir("manifest_bad");
    SUBCASE("duplicate cell") {
      Manifest m = make_disk_manifest(dir);
      m.entries.push_back({1, 1, "cells/k1_j1.txt"});
      CHECK_THROWS_AS(mde::validate_manifest(m), mde::data_error);
    }
    SUBCASE("missing cell") {
      Manifest m = make_disk_manifest(dir);
      m.entries.pop_back();
      try {
        mde::validate_manifest(m);
        CHECK(false);
      } catch (const mde::data_error& e) {
        CHECK(std::string(e.what()).find("(3, 3)") != std::string::npos);
      }
    }
    SUBCASE("entry outside the grid") {
      Manifest m = make_disk_manifest(dir);
      m.entries[0].k = 4;
      CHECK_THROWS_AS(mde::validate_manifest(m), mde::data_error);
    }
    SUBCASE("empty observed path") {
      Manifest m = make_disk_manifest(dir);
      m.observed_path.clear();
      CHECK_THROWS_AS(mde::validate_manifest(m), mde::data_error);
    }
    SUBCASE("load error names the cell and path") {
      Manifest m = make_disk_manifest(dir);
      fs::remove(dir.path / "cells/k2_j3.txt");
      try {
        mde::load_suite(m);
        CHECK(false);
      } catch (const mde::data_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("(2, 3)") != std::string::npos);
        CHECK(msg.find("k2_j3.txt") != std::string::npos);
      }
    }
  }

  TEST_CASE("surface json round-trip") {
    const TempDir dir("surface");
    mde::Surface surf;
    surf.grid = testutil::tiny_grid();
    surf.measure = mde::Measure::rpe;
    surf.alpha = 0.25;
    surf.observed_n = 17;
    surf.per_cell_n.assign(9, 33);
    for (int i = 0; i < 9; ++i) surf.values.push_back(0.1 * i + 1.0 / 3.0);
    const fs::path file = dir.path / "surface.json";
    mde::write_surface_json(file, surf);
    const mde::Surface back = mde::read_surface_json(file);
    CHECK(back.measure == mde::Measure::rpe);
    CHECK(back.alpha == 0.25);
    CHECK(back.observed_n == 17);
    REQUIRE(back.per_cell_n.size() == 9);
    CHECK(back.per_cell_n[4] == 33);
    REQUIRE(back.values.size() == 9);
    for (std::size_t i = 0; i < 9; ++i) {
      CHECK(back.values[i] == surf.values[i]);  // json doubles round-trip
    }

    SUBCASE("value count must match the grid") {
      nlohmann::json j;
      {
        std::ifstream in(file);
        in >> j;
      }
      j["values"] = std::vector<double>{1.0, 2.0};
      write_text(dir.path / "broken.json", j.dump());
      CHECK_THROWS_AS(mde::read_surface_json(dir.path / "broken.json"),
                      mde::data_error);
    }
  }

  TEST_CASE("surface table lists r, theta, value per cell") {
    const TempDir dir("table");
    mde::Surface surf;
    surf.grid = testutil::tiny_grid();
    surf.measure = mde::Measure::affinity;
    for (int i = 0; i < 9; ++i) surf.values.push_back(0.5 + 0.01 * i);
    const fs::path file = dir.path / "surface.txt";
    mde::write_surface_table(file, surf);

    std::ifstream in(file);
    std::string header;
    REQUIRE(std::getline(in, header));
    CHECK(header == "# r theta affinity");
    std::vector<std::string> rows;
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty()) rows.push_back(line);
    }
    REQUIRE(rows.size() == 9);
    double r = 0, theta = 0, value = 0;
    REQUIRE(std::sscanf(rows[0].c_str(), "%lf %lf %lf", &r, &theta, &value) == 3);
    CHECK(r == doctest::Approx(1.7125).epsilon(1e-9));
    CHECK(theta == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(value == 0.5);  // %.17g round-trips
    REQUIRE(std::sscanf(rows[8].c_str(), "%lf %lf %lf", &r, &theta, &value) == 3);
    CHECK(r == doctest::Approx(1.7625).epsilon(1e-9));
    CHECK(theta == doctest::Approx(25.0).epsilon(1e-9));
    CHECK(value == 0.5 + 0.01 * 8);  // %.17g round-trips the stored double
  }

  TEST_CASE("estimate json carries location and orientation") {
    const TempDir dir("estimate");
    mde::Surface surf;
    surf.grid = testutil::tiny_grid();
    surf.measure = mde::Measure::affinity;
    surf.values.assign(9, 0.4);
    surf.values[5] = 0.9;
    const mde::Estimate est = mde::argmax_affinity(surf);
    const fs::path file = dir.path / "estimate.json";
    mde::write_estimate_json(file, surf, est);
    nlohmann::json j;
    {
      std::ifstream in(file);
      in >> j;
    }
    CHECK(j.at("measure") == "affinity");
    CHECK(j.at("orientation") == "max");
    CHECK(j.at("k") == 2);
    CHECK(j.at("j") == 3);
    CHECK(j.at("value").get<double>() == 0.9);
    CHECK(j.at("r").get<double>() == doctest::Approx(1.7375));
    CHECK(j.at("theta").get<double>() == doctest::Approx(25.0));
  }

  TEST_CASE("confidence set json carries members and replicates") {
    const TempDir dir("confset");
    mde::ConfidenceSet set;
    set.level = 0.95;
    set.cutoff = 0.8;
    set.members.push_back({2, 2, 1.7375, 15.0, 0.91});
    set.members.push_back({2, 3, 1.7375, 25.0, 0.85});
    set.replicate_affinities = {0.79, 0.91, 0.83};
    const fs::path file = dir.path / "confidence_set.json";
    mde::write_confidence_set_json(file, set);
    nlohmann::json j;
    {
      std::ifstream in(file);
      in >> j;
    }
    CHECK(j.at("level").get<double>() == 0.95);
    CHECK(j.at("cutoff").get<double>() == 0.8);
    REQUIRE(j.at("members").size() == 2);
    CHECK(j.at("members")[0].at("k") == 2);
    CHECK(j.at("members")[1].at("affinity").get<double>() == 0.85);
    REQUIRE(j.at("replicates").size() == 3);
    CHECK(j.at("replicates")[1].get<double>() == 0.91);
  }

  TEST_CASE("crossval json and table") {
    const TempDir dir("crossval");
    mde::CrossValReport report;
    report.model = "demo";
    report.measure = mde::Measure::affinity;
    report.records.push_back({2, 2, 3, 2, 0.88, 1});
    report.records.push_back({2, 5, 4, 6, 0.72, 2});
    report.ring1_hits = 1;
    report.ring2_hits = 1;
    report.beyond = 0;

    const fs::path jfile = dir.path / "crossval.json";
    mde::write_crossval_json(jfile, report);
    nlohmann::json j;
    {
      std::ifstream in(jfile);
      in >> j;
    }
    CHECK(j.at("model") == "demo");
    CHECK(j.at("measure") == "affinity");
    REQUIRE(j.at("records").size() == 2);
    CHECK(j.at("records")[0].at("ring") == 1);
    CHECK(j.at("records")[1].at("best_k") == 4);
    CHECK(j.at("ring1") == 1);
    CHECK(j.at("ring2") == 1);
    CHECK(j.at("beyond") == 0);

    const fs::path tfile = dir.path / "crossval.txt";
    mde::write_crossval_table(tfile, report);
    std::ifstream in(tfile);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    REQUIRE(lines.size() == 5);  // two headers, two records, one summary
    CHECK(lines[0].find("demo") != std::string::npos);
    CHECK(lines[4].find("ring1 1") != std::string::npos);
  }

  TEST_CASE("config defaults, parsing, and hashing") {
    const TempDir dir("config");
    const mde::RunConfig defaults = mde::default_config();
    CHECK_NOTHROW(mde::validate(defaults));
    CHECK(defaults.grid.n_r == 24);
    CHECK(defaults.grid.n_theta == 9);
    CHECK(defaults.quad_resolution == 256);
    CHECK(defaults.bootstrap_replicates == 300);
    CHECK(defaults.confidence_level == 0.95);
    CHECK(defaults.seed == 1729);

    SUBCASE("canonical text parses back to an identical hash") {
      const fs::path file = dir.path / "run.cfg";
      write_text(file, mde::canonical_config_text(defaults));
      const mde::RunConfig parsed = mde::parse_config_file(file);
      CHECK(mde::config_hash(parsed) == mde::config_hash(defaults));
      CHECK(mde::canonical_config_text(parsed) ==
            mde::canonical_config_text(defaults));
    }
    SUBCASE("keys, comments, and spacing") {
      const fs::path file = dir.path / "run.cfg";
      write_text(file,
                 "# a comment\n"
                 "grid.n_r = 6\n"
                 "grid.n_theta=3\n"
                 "  seed   =  99  \n"
                 "\n"
                 "alpha = 0.25\n");
      const mde::RunConfig parsed = mde::parse_config_file(file);
      CHECK(parsed.grid.n_r == 6);
      CHECK(parsed.grid.n_theta == 3);
      CHECK(parsed.seed == 99);
      CHECK(parsed.alpha == 0.25);
      CHECK(parsed.quad_resolution == 256);  // untouched keys keep defaults
    }
    SUBCASE("unknown key names its line") {
      const fs::path file = dir.path / "run.cfg";
      write_text(file, "seed = 1\nwidgets = 7\n");
      try {
        mde::parse_config_file(file);
        CHECK(false);
      } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        CHECK(msg.find(":2") != std::string::npos);
        CHECK(msg.find("widgets") != std::string::npos);
      }
    }
    SUBCASE("bad values and ranges") {
      const fs::path file = dir.path / "run.cfg";
      write_text(file, "seed = banana\n");
      CHECK_THROWS_AS(mde::parse_config_file(file), std::invalid_argument);
      write_text(file, "alpha = 1.0\n");
      CHECK_THROWS_AS(mde::parse_config_file(file), std::invalid_argument);
      write_text(file, "confidence_level = 0\n");
      CHECK_THROWS_AS(mde::parse_config_file(file), std::invalid_argument);
      write_text(file, "quad_resolution = 8\n");
      CHECK_THROWS_AS(mde::parse_config_file(file), std::invalid_argument);
      write_text(file, "no equals sign here\n");
      CHECK_THROWS_AS(mde::parse_config_file(file), std::invalid_argument);
      CHECK_THROWS_AS(mde::parse_config_file(dir.path / "absent.cfg"),
                      std::invalid_argument);
    }
    SUBCASE("hash is 16 hex digits and sensitive to every field") {
      const std::string base = mde::config_hash(defaults);
      CHECK(base.size() == 16);
      CHECK(base.find_first_not_of("0123456789abcdef") == std::string::npos);
      mde::RunConfig tweaked = defaults;
      tweaked.seed = 1730;
      CHECK(mde::config_hash(tweaked) != base);
      tweaked = defaults;
      tweaked.grid.delta_r = 0.05;
      CHECK(mde::config_hash(tweaked) != base);
    }
  }
}
