#pragma once

// Monte-Carlo experiment: replicate spectra of A_n / sqrt(n), their moments
// and distances to a theoretical law.

#include <optional>
#include <string>
#include <vector>

#include "dwig/field.hpp"
#include "dwig/moments.hpp"
#include "dwig/spectrum.hpp"
#include "dwig/stieltjes.hpp"

namespace dwig {

struct Theory {
  std::string label;
  /// Distances are computed only when a CDF is present.
  CdfFn cdf;
  std::optional<MomentSequence> moments;

  static Theory from_density(const DensityCurve& curve, std::string label = "density");
  static Theory from_moments(MomentSequence m, std::string label = "moments");
  /// Semicircle dilated by sigma: CDF and moments C_m sigma^{2m}, m <= 10.
  static Theory semicircle(double sigma = 1.0);
};

struct ExperimentOptions {
  unsigned threads = 1;
  bool keep_spectra = false;
  /// Moments p = 1..max_power are tabulated.
  int max_power = 6;
};

struct MomentRow {
  int p = 0;
  double mean = 0.0;
  double std = 0.0;
  double stderr_ = 0.0;
  std::optional<double> theory;
};

struct ExperimentReport {
  int n = 0;
  int replicates = 0;
  InputDist input_dist = InputDist::gaussian;
  std::uint64_t seed = 0;
  int coeff_bound = 0;
  std::size_t coeff_count = 0;
  std::string theory_label;

  /// per_replicate[r][p - 1] = (1/n) sum lambda^p of replicate r.
  std::vector<std::vector<double>> per_replicate;
  std::vector<MomentRow> moments;

  std::vector<Distances> replicate_distances;
  std::optional<double> levy_mean, levy_std, ks_mean, ks_std;
  /// Empirical F(0) mean and std over replicates; theory value when a CDF is known.
  double cdf0_mean = 0.0, cdf0_std = 0.0;
  std::optional<double> cdf0_theory;

  /// Sorted scaled eigenvalues per replicate, only with keep_spectra.
  std::vector<std::vector<double>> spectra;

  const MomentRow& moment(int p) const;
  /// Stable key order; spectra are not included.
  std::string to_json() const;
  /// p,mean,std,stderr,theory
  std::string moments_csv() const;
};

/// Replicates run in parallel on independent RNG streams and are reduced in
/// replicate order, so the report does not depend on the thread count.
ExperimentReport run_experiment(const EnsembleConfig& cfg, const Theory& theory, const ExperimentOptions& opts = {});

/// Shortest round-trip decimal form (std::to_chars), locale independent.
/// "inf", "-inf" and "nan" for non-finite values.
std::string format_double(double x);

}  // namespace dwig
