#pragma once

#include <array>
#include <map>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace wavesym {

using Json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.3.0";

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;               // derive | classify | reduce | verify | report-all
  std::string case_sel = "i";        // i | ii | generic
  std::string generator = "v1";
  int degree = 2;
  std::map<std::string, std::string> params;  // exact rationals as text, e.g. "1/2"
  std::array<int, 3> grid{21, 21, 21};
  std::array<double, 6> box{2.0, 3.0, 2.0, 3.0, 2.0, 3.0};
  double h = 1e-3;
  double tol = 1e-6;
  std::string format = "text";
  std::string out;
  std::string csv_dir;
};

/// Fills missing constants with the defaults and rejects anything the
/// families or the grid cannot take. Throws ConfigError.
void validate(RunConfig& cfg);

/// Merges a JSON config document into `cfg`.
void apply_config_json(RunConfig& cfg, const Json& doc);
Json config_json(const RunConfig& cfg);

struct Report {
  Json data;
  int exit_code = 0;  // 0 pass, 1 a check failed
};

/// Runs a validated config. CSV files are written only when csv_dir is set.
Report run(const RunConfig& cfg);

std::string render_text(const Json& data);

}  // namespace wavesym
