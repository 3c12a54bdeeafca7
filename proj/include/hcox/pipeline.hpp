#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "hcox/gramsolve.hpp"
#include "hcox/io.hpp"

namespace hcox {

enum class Stage { Derive, Libgen, Enumerate, Solve, Certify };

std::string to_string(Stage s);
Stage parse_stage(std::string_view name);
std::vector<Stage> all_stages();

struct PipelineConfig {
  int weight_cap = 7;
  int k_max_angle = 30;
  int digits = 40;
  std::string tol_res = "1e-25";
  std::string tol_zero = "1e-20";
  int threads = 1;
  std::size_t row_limit = 50'000'000;
  std::uint64_t seed = 1;
  std::vector<Stage> stages;
  std::string input;  // polytope file; empty means the bundled data
  std::string out = "census_out";
  bool full_census = false;
  // Admissible labels by number (P_k -> k); empty means every label allowed
  // by full_census.
  std::vector<int> labels;
  std::function<void(const std::string&)> log;
};

// Labels 12, 13 and 14 take hours and run only with full_census.
bool long_running(int label);

// Throws std::invalid_argument on out-of-range settings.
void validate(const PipelineConfig& cfg);
SolveConfig solve_config(const PipelineConfig& cfg);

struct StageReport {
  Stage stage;
  double seconds = 0;
  Json counts;
};

struct RunReport {
  std::vector<StageReport> stages;
  // Per label: expected vs observed for every count the run produced.
  Json comparison;
  bool matches_expected = true;

  Json json() const;
};

// Runs the requested stages in order, reading each stage's input from and
// writing its output to cfg.out. A missing input names the stage that
// produces it.
RunReport run(const PipelineConfig& cfg);

Json load_expected_counts(const std::string& path = std::string(HCOX_DATA_DIR) + "/expected_counts.json");

// body(i) for i in [0, n) on up to `threads` workers.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

}  // namespace hcox
