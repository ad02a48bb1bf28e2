#pragma once

// Cross-checks one kernel through every pipeline: combinatorial and recursive
// moments, the free-product moments (separable kernels), density inversion
// and simulation. A failing stage is recorded and the remaining stages that
// do not depend on it still run.

#include <optional>
#include <string>
#include <vector>

#include "dwig/experiment.hpp"
#include "dwig/kernel_io.hpp"

namespace dwig {

struct CompareConfig {
  int n = 200;
  int replicates = 4;
  int max_m = 4;
  /// Truncation for the combinatorial sum; the support radius by default.
  std::optional<int> trunc;
  InputDist input_dist = InputDist::gaussian;
  std::uint64_t seed = 42;
  unsigned threads = 1;
  int grid_points = 401;
  double epsilon = 1e-3;
};

enum class StageState { ok, failed, skipped };

struct StageStatus {
  std::string name;
  StageState state = StageState::skipped;
  std::string message;
};

std::string to_string(StageState s);

struct CompareRow {
  int m = 0;
  std::optional<double> beta_comb, beta_rec, beta_freeconv, emp_mean, emp_std;
};

struct CompareReport {
  std::vector<StageStatus> stages;
  std::vector<CompareRow> rows;
  std::optional<double> levy, ks;

  /// True when no stage failed.
  bool complete() const;
  const StageStatus& stage(const std::string& name) const;

  /// m,beta_comb,beta_rec,beta_freeconv,emp_mean,emp_std (empty cells for missing values).
  std::string to_csv() const;
  std::string to_json() const;
  /// Aligned table followed by the Levy/KS row and stage statuses.
  std::string to_text() const;
};

/// Stages, in order: moments_comb, moments_rec, freeconv, density, simulation.
CompareReport compare(const KernelSpec& spec, const CompareConfig& cfg);

}  // namespace dwig
