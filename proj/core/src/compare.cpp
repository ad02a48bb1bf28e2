#include "dwig/compare.hpp"

#include <cstdio>

#include <json.hpp>

#include "dwig/errors.hpp"
#include "dwig/freeconv.hpp"

namespace dwig {

namespace {

template <class F>
StageStatus run_stage(const std::string& name, F&& body) {
  try {
    body();
    return {name, StageState::ok, ""};
  } catch (const Error& e) {
    return {name, StageState::failed, e.what()};
  }
}

std::string cell(const std::optional<double>& x) { return x ? format_double(*x) : ""; }

}  // namespace

std::string to_string(StageState s) {
  switch (s) {
    case StageState::ok: return "ok";
    case StageState::failed: return "failed";
    case StageState::skipped: return "skipped";
  }
  return "?";
}

bool CompareReport::complete() const {
  for (const auto& s : stages)
    if (s.state == StageState::failed) return false;
  return true;
}

const StageStatus& CompareReport::stage(const std::string& name) const {
  for (const auto& s : stages)
    if (s.name == name) return s;
  throw InvalidArgument("no stage named '" + name + "'");
}

CompareReport compare(const KernelSpec& spec, const CompareConfig& cfg) {
  if (cfg.max_m < 1) throw InvalidArgument("max_m must be positive");
  const CovKernel& k = spec.kernel;
  CompareReport rep;
  rep.rows.resize(static_cast<std::size_t>(cfg.max_m));
  for (int m = 1; m <= cfg.max_m; ++m) rep.rows[static_cast<std::size_t>(m - 1)].m = m;

  std::optional<MomentSequence> comb;
  rep.stages.push_back(run_stage("moments_comb", [&] {
    comb = moments_combinatorial(k, cfg.max_m, cfg.trunc, cfg.threads);
    for (int m = 1; m <= cfg.max_m; ++m) rep.rows[static_cast<std::size_t>(m - 1)].beta_comb = comb->moment(2 * m);
  }));

  std::optional<SpectralDensity2D> f;
  rep.stages.push_back(run_stage("moments_rec", [&] {
    f = spectral_density(k, default_quadrature(k, cfg.max_m));
    const auto rec = beta_recursive(*f, cfg.max_m);
    for (int m = 1; m <= cfg.max_m; ++m)
      rep.rows[static_cast<std::size_t>(m - 1)].beta_rec = rec.moments.moment(2 * m);
  }));

  if (k.separable_factor() || k.is_separable()) {
    rep.stages.push_back(run_stage("freeconv", [&] {
      const auto fp = free_mult_semicircle(radial_from_kernel(k), cfg.max_m);
      for (int m = 1; m <= cfg.max_m; ++m) rep.rows[static_cast<std::size_t>(m - 1)].beta_freeconv = fp.moment(2 * m);
    }));
  } else {
    rep.stages.push_back({"freeconv", StageState::skipped, "kernel is not separable"});
  }

  std::optional<DensityCurve> density;
  if (f) {
    rep.stages.push_back(run_stage("density", [&] {
      InversionOptions io;
      io.epsilon = cfg.epsilon;
      density = invert_density(*f, default_lambda_grid(f->rbar, cfg.grid_points), io);
    }));
  } else {
    rep.stages.push_back({"density", StageState::skipped, "spectral density unavailable"});
  }

  rep.stages.push_back(run_stage("simulation", [&] {
    EnsembleConfig ec;
    ec.n = cfg.n;
    ec.replicates = cfg.replicates;
    ec.coeffs = simulation_coeffs(spec);
    ec.input_dist = cfg.input_dist;
    ec.seed = cfg.seed;
    Theory theory;
    if (density) theory = Theory::from_density(*density);
    if (comb) theory.moments = comb;
    ExperimentOptions eo;
    eo.threads = cfg.threads;
    eo.max_power = 2 * cfg.max_m;
    const auto er = run_experiment(ec, theory, eo);
    for (int m = 1; m <= cfg.max_m; ++m) {
      auto& row = rep.rows[static_cast<std::size_t>(m - 1)];
      row.emp_mean = er.moment(2 * m).mean;
      row.emp_std = er.moment(2 * m).std;
    }
    rep.levy = er.levy_mean;
    rep.ks = er.ks_mean;
  }));
  return rep;
}

std::string CompareReport::to_csv() const {
  std::string out = "m,beta_comb,beta_rec,beta_freeconv,emp_mean,emp_std\n";
  for (const auto& r : rows)
    out += std::to_string(r.m) + "," + cell(r.beta_comb) + "," + cell(r.beta_rec) + "," + cell(r.beta_freeconv) +
           "," + cell(r.emp_mean) + "," + cell(r.emp_std) + "\n";
  return out;
}

std::string CompareReport::to_json() const {
  using nlohmann::ordered_json;
  auto num = [](const std::optional<double>& x) -> ordered_json {
    if (!x) return nullptr;
    return *x;
  };
  ordered_json j;
  ordered_json st = ordered_json::array();
  for (const auto& s : stages) st.push_back({{"name", s.name}, {"status", to_string(s.state)}, {"message", s.message}});
  j["stages"] = st;
  ordered_json table = ordered_json::array();
  for (const auto& r : rows)
    table.push_back({{"m", r.m},
                     {"beta_comb", num(r.beta_comb)},
                     {"beta_rec", num(r.beta_rec)},
                     {"beta_freeconv", num(r.beta_freeconv)},
                     {"emp_mean", num(r.emp_mean)},
                     {"emp_std", num(r.emp_std)}});
  j["table"] = table;
  j["distances"] = {{"levy", num(levy)}, {"ks", num(ks)}};
  j["complete"] = complete();
  return j.dump(2) + "\n";
}

std::string CompareReport::to_text() const {
  auto fmt = [](const std::optional<double>& x) {
    if (!x) return std::string("-");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", *x);
    return std::string(buf);
  };
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%3s | %16s | %16s | %16s | %s\n", "m", "beta_comb", "beta_rec", "beta_freeconv",
                "empirical mean +- std");
  out += line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%3d | %16s | %16s | %16s | %s +- %s\n", r.m, fmt(r.beta_comb).c_str(),
                  fmt(r.beta_rec).c_str(), fmt(r.beta_freeconv).c_str(), fmt(r.emp_mean).c_str(),
                  fmt(r.emp_std).c_str());
    out += line;
  }
  out += "levy " + fmt(levy) + "  ks " + fmt(ks) + "\n";
  for (const auto& s : stages)
    out += "stage " + s.name + ": " + to_string(s.state) + (s.message.empty() ? "" : " (" + s.message + ")") + "\n";
  return out;
}

}  // namespace dwig
