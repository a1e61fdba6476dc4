#include "mde/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mde {

RunConfig default_config() { return RunConfig{}; }

void validate(const RunConfig& config) {
  validate(config.grid);
  if (config.quad_resolution < 16) {
    throw std::invalid_argument("config: quad_resolution must be at least 16");
  }
  if (config.bootstrap_replicates < 2) {
    throw std::invalid_argument("config: bootstrap_replicates must be at least 2");
  }
  if (!(config.confidence_level > 0.0) || !(config.confidence_level < 1.0)) {
    throw std::invalid_argument("config: confidence_level must lie in (0, 1)");
  }
  if (!(config.alpha >= 0.0) || !(config.alpha < 1.0)) {
    throw std::invalid_argument("config: alpha must lie in [0, 1)");
  }
  if (config.threads < 1) {
    throw std::invalid_argument("config: threads must be at least 1");
  }
}

namespace {

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r");
  auto end = s.find_last_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  return s.substr(begin, end - begin + 1);
}

double parse_real(const std::string& value, const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad numeric value '" + value +
                                "' for key " + key);
  }
}

std::uint64_t parse_unsigned(const std::string& value, const std::string& key) {
  try {
    std::size_t used = 0;
    if (!value.empty() && value.front() == '-') throw std::invalid_argument(value);
    const std::uint64_t v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad integer value '" + value +
                                "' for key " + key);
  }
}

}  // namespace

RunConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("config: cannot open " + path.string());
  }
  RunConfig config;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: " + path.string() + ":" +
                                  std::to_string(line_no) +
                                  ": expected 'key = value'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key == "grid.r0") {
      config.grid.r0 = parse_real(value, key);
    } else if (key == "grid.theta0") {
      config.grid.theta0 = parse_real(value, key);
    } else if (key == "grid.delta_r") {
      config.grid.delta_r = parse_real(value, key);
    } else if (key == "grid.delta_theta") {
      config.grid.delta_theta = parse_real(value, key);
    } else if (key == "grid.n_r") {
      config.grid.n_r = static_cast<int>(parse_unsigned(value, key));
    } else if (key == "grid.n_theta") {
      config.grid.n_theta = static_cast<int>(parse_unsigned(value, key));
    } else if (key == "quad_resolution") {
      config.quad_resolution = static_cast<std::size_t>(parse_unsigned(value, key));
    } else if (key == "bootstrap_replicates") {
      config.bootstrap_replicates = static_cast<std::size_t>(parse_unsigned(value, key));
    } else if (key == "confidence_level") {
      config.confidence_level = parse_real(value, key);
    } else if (key == "alpha") {
      config.alpha = parse_real(value, key);
    } else if (key == "seed") {
      config.seed = parse_unsigned(value, key);
    } else if (key == "threads") {
      config.threads = static_cast<std::size_t>(parse_unsigned(value, key));
    } else {
      throw std::invalid_argument("config: " + path.string() + ":" +
                                  std::to_string(line_no) + ": unknown key '" +
                                  key + "'");
    }
  }
  validate(config);
  return config;
}

std::string canonical_config_text(const RunConfig& config) {
  char buf[64];
  auto real = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  std::ostringstream out;  // keys in sorted order
  out << "alpha = " << real(config.alpha) << "\n";
  out << "bootstrap_replicates = " << config.bootstrap_replicates << "\n";
  out << "confidence_level = " << real(config.confidence_level) << "\n";
  out << "grid.delta_r = " << real(config.grid.delta_r) << "\n";
  out << "grid.delta_theta = " << real(config.grid.delta_theta) << "\n";
  out << "grid.n_r = " << config.grid.n_r << "\n";
  out << "grid.n_theta = " << config.grid.n_theta << "\n";
  out << "grid.r0 = " << real(config.grid.r0) << "\n";
  out << "grid.theta0 = " << real(config.grid.theta0) << "\n";
  out << "quad_resolution = " << config.quad_resolution << "\n";
  out << "seed = " << config.seed << "\n";
  out << "threads = " << config.threads << "\n";
  return out.str();
}

std::string config_hash(const RunConfig& config) {
  const std::string text = canonical_config_text(config);
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return std::string(buf);
}

}  // namespace mde
