#include "dwig/experiment.hpp"

#include <charconv>
#include <cmath>

#include <json.hpp>

#include "dwig/errors.hpp"
#include "dwig/freeconv.hpp"
#include "dwig/parallel.hpp"

namespace dwig {

namespace {

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

MeanStd mean_std(const std::vector<double>& xs) {
  MeanStd r;
  if (xs.empty()) return r;
  for (double x : xs) r.mean += x;
  r.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - r.mean) * (x - r.mean);
    r.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return r;
}

std::optional<double> theory_moment(const Theory& t, int p) {
  if (!t.moments) return std::nullopt;
  if (p % 2 != 0) return 0.0;
  if (p / 2 > t.moments->max_m()) return std::nullopt;
  return t.moments->moment(p);
}

nlohmann::ordered_json number_or_null(std::optional<double> x) {
  if (!x || !std::isfinite(*x)) return nullptr;
  return *x;
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

Theory Theory::from_density(const DensityCurve& curve, std::string label) {
  Theory t;
  t.label = std::move(label);
  t.cdf = [curve](double x) { return curve.cdf_at(x); };
  return t;
}

Theory Theory::from_moments(MomentSequence m, std::string label) {
  Theory t;
  t.label = std::move(label);
  t.moments = std::move(m);
  return t;
}

Theory Theory::semicircle(double sigma) {
  if (!(sigma > 0.0)) throw InvalidArgument("semicircle dilation must be positive");
  Theory t;
  t.label = sigma == 1.0 ? "semicircle" : "semicircle(sigma=" + format_double(sigma) + ")";
  t.cdf = [sigma](double x) { return semicircle_cdf(x / sigma); };
  MomentSequence m;
  m.method = MomentMethod::free_product;
  m.truncation = "exact";
  for (int k = 1; k <= 10; ++k) m.even.push_back(semicircle_moment(k) * std::pow(sigma, 2 * k));
  t.moments = std::move(m);
  return t;
}

const MomentRow& ExperimentReport::moment(int p) const {
  for (const auto& row : moments)
    if (row.p == p) return row;
  throw InvalidArgument("moment p = " + std::to_string(p) + " not tabulated");
}

ExperimentReport run_experiment(const EnsembleConfig& cfg, const Theory& theory, const ExperimentOptions& opts) {
  validate(cfg);
  if (opts.max_power < 1) throw InvalidArgument("max_power must be positive");
  const auto reps = static_cast<std::size_t>(cfg.replicates);

  std::vector<std::vector<double>> per_rep(reps);
  std::vector<Distances> dist(reps);
  std::vector<double> cdf0(reps);
  std::vector<std::vector<double>> spectra(opts.keep_spectra ? reps : 0);

  parallel_for(reps, resolve_threads(opts.threads), [&](std::size_t r) {
    const EmpiricalSpectrum s = EmpiricalSpectrum::of(generate_field(cfg, static_cast<int>(r)));
    per_rep[r].resize(static_cast<std::size_t>(opts.max_power));
    for (int p = 1; p <= opts.max_power; ++p) per_rep[r][static_cast<std::size_t>(p - 1)] = s.moment(p);
    cdf0[r] = s.cdf(0.0);
    if (theory.cdf) dist[r] = distances(s, theory.cdf);
    if (opts.keep_spectra) spectra[r] = s.eigenvalues();
  });

  ExperimentReport rep;
  rep.n = cfg.n;
  rep.replicates = cfg.replicates;
  rep.input_dist = cfg.input_dist;
  rep.seed = cfg.seed;
  rep.coeff_bound = cfg.coeffs.bound();
  rep.coeff_count = cfg.coeffs.entries().size();
  rep.theory_label = theory.label;
  rep.per_replicate = per_rep;
  rep.spectra = std::move(spectra);

  for (int p = 1; p <= opts.max_power; ++p) {
    std::vector<double> xs;
    for (const auto& row : per_rep) xs.push_back(row[static_cast<std::size_t>(p - 1)]);
    const MeanStd ms = mean_std(xs);
    rep.moments.push_back({p, ms.mean, ms.std, ms.std / std::sqrt(static_cast<double>(reps)), theory_moment(theory, p)});
  }

  const MeanStd c0 = mean_std(cdf0);
  rep.cdf0_mean = c0.mean;
  rep.cdf0_std = c0.std;
  if (theory.cdf) {
    rep.cdf0_theory = theory.cdf(0.0);
    rep.replicate_distances = dist;
    std::vector<double> levy, ks;
    for (const auto& d : dist) {
      levy.push_back(d.levy);
      ks.push_back(d.ks);
    }
    const MeanStd l = mean_std(levy), k = mean_std(ks);
    rep.levy_mean = l.mean;
    rep.levy_std = l.std;
    rep.ks_mean = k.mean;
    rep.ks_std = k.std;
  }
  return rep;
}

std::string ExperimentReport::to_json() const {
  using nlohmann::ordered_json;
  ordered_json j;
  j["config"] = {{"n", n},
                 {"replicates", replicates},
                 {"input_dist", to_string(input_dist)},
                 {"seed", seed},
                 {"coeff_bound", coeff_bound},
                 {"coeff_count", coeff_count}};
  j["theory"] = theory_label;
  ordered_json table = ordered_json::array();
  for (const auto& row : moments)
    table.push_back({{"p", row.p},
                     {"mean", row.mean},
                     {"std", row.std},
                     {"stderr", row.stderr_},
                     {"theory", number_or_null(row.theory)}});
  j["moments"] = table;
  j["distances"] = {{"levy_mean", number_or_null(levy_mean)},
                    {"levy_std", number_or_null(levy_std)},
                    {"ks_mean", number_or_null(ks_mean)},
                    {"ks_std", number_or_null(ks_std)}};
  ordered_json per = ordered_json::array();
  for (std::size_t r = 0; r < per_replicate.size(); ++r) {
    ordered_json row = {{"replicate", r}, {"moments", per_replicate[r]}};
    if (r < replicate_distances.size()) {
      row["levy"] = replicate_distances[r].levy;
      row["ks"] = replicate_distances[r].ks;
    }
    per.push_back(row);
  }
  j["replicates"] = per;
  j["cdf_at_zero"] = {{"mean", cdf0_mean}, {"std", cdf0_std}, {"theory", number_or_null(cdf0_theory)}};
  return j.dump(2) + "\n";
}

std::string ExperimentReport::moments_csv() const {
  std::string out = "p,mean,std,stderr,theory\n";
  for (const auto& row : moments) {
    out += std::to_string(row.p) + "," + format_double(row.mean) + "," + format_double(row.std) + "," +
           format_double(row.stderr_) + "," + (row.theory ? format_double(*row.theory) : "") + "\n";
  }
  return out;
}

}  // namespace dwig
