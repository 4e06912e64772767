#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace rwdrift::cli {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitNumerical = 3,
  kExitVerification = 4,
};

// Everything a run depends on. Echoed into every output document, and
// accepted back through --config (either bare or as a whole output document).
struct RunConfig {
  std::string command;
  int d = 0;
  std::vector<double> p;
  std::vector<double> q_sym;
  nlohmann::json spec;  // free-product spec, inline
  std::int64_t n = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 1;
  double tol = 0.0;
  std::string format = "json";
  std::string out;
  unsigned threads = 1;
  std::string functional = "word";
  std::string objective = "drift";
  std::string preset;
  std::vector<double> from;
  std::vector<double> to;
  int grid = 81;
  std::size_t chords = 1000;
  int starts = 8;
  bool increment = false;

  nlohmann::json to_json() const;
  // Overrides the fields present in j.
  void merge_json(const nlohmann::json& j);
};

std::vector<double> parse_list(const std::string& text);

// Full CLI. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rwdrift::cli
