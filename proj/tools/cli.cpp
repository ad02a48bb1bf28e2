#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "dwig/compare.hpp"
#include "dwig/errors.hpp"
#include "dwig/experiment.hpp"
#include "dwig/freeconv.hpp"
#include "dwig/kernel_io.hpp"
#include "dwig/moments.hpp"
#include "dwig/parallel.hpp"
#include "dwig/presets.hpp"
#include "manifest.hpp"

#ifndef DWIG_VERSION
#define DWIG_VERSION "0.0.0"
#endif

namespace dwig::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Globals {
  unsigned threads = 0;
  std::string out_dir;
  std::uint64_t seed = 42;
};

struct ModelOpts {
  std::string kernel;
  std::string preset;
  double rho = 0.5;
  int N = 1;
  int radius = 12;
};

void add_preset_options(CLI::App* sc, ModelOpts& m) {
  sc->add_option("--rho", m.rho, "Preset parameter rho (example1, example3)")->capture_default_str();
  sc->add_option("--N", m.N, "Preset parameter N (example2)")->capture_default_str();
  sc->add_option("--radius", m.radius, "Truncation radius of analytic preset kernels")->capture_default_str();
}

void add_model_options(CLI::App* sc, ModelOpts& m) {
  auto* k = sc->add_option("--kernel", m.kernel, "Kernel JSON file");
  auto* p = sc->add_option("--preset", m.preset, "Worked model instead of a file: example1 .. example6");
  k->excludes(p);
  add_preset_options(sc, m);
}

struct Model {
  KernelSpec spec;
  json config;
  std::optional<Preset> preset;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Model load_model(const ModelOpts& m) {
  if (m.kernel.empty() == m.preset.empty()) throw InputError("give exactly one of --kernel or --preset");
  Model out;
  if (!m.kernel.empty()) {
    const std::string text = read_file(m.kernel);
    out.spec = parse_kernel_json(text);
    out.config = {{"kernel_file", m.kernel}, {"kernel", json::parse(text)}};
    return out;
  }
  PresetParams pp;
  pp.rho = m.rho;
  pp.N = m.N;
  pp.radius = m.radius;
  Preset p = make_preset(m.preset, pp);
  out.spec.kernel = *p.kernel;
  out.spec.coeffs = p.coeffs;
  out.spec.type = p.kernel->separable_factor() ? KernelSpec::Type::separable
                  : p.coeffs                   ? KernelSpec::Type::coeffs
                                               : KernelSpec::Type::explicit_values;
  out.config = {{"preset", m.preset}, {"rho", m.rho}, {"N", m.N}, {"radius", m.radius}};
  out.preset = std::move(p);
  return out;
}

std::vector<double> parse_grid(const std::string& s) {
  double a = 0, b = 0;
  int n = 0;
  char c1 = 0, c2 = 0;
  std::istringstream in(s);
  in.imbue(std::locale::classic());
  if (!(in >> a >> c1 >> b >> c2 >> n) || c1 != ':' || c2 != ':' || !in.eof())
    throw InputError("--grid must look like a:b:n, got '" + s + "'");
  if (!(a < b) || n < 2) throw InputError("--grid needs a < b and n >= 2");
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  return g;
}

cplx parse_z(const std::string& s) {
  double re = 0, im = 0;
  char c = 0;
  std::istringstream in(s);
  in.imbue(std::locale::classic());
  if (!(in >> re >> c >> im) || c != ',' || !in.eof()) throw InputError("--z must look like re,im, got '" + s + "'");
  return {re, im};
}

class Outputs {
 public:
  explicit Outputs(std::string dir) : dir_(std::move(dir)) {}

  bool enabled() const { return !dir_.empty(); }

  void write(const std::string& name, const std::string& content) {
    fs::create_directories(dir_);
    const fs::path path = fs::path(dir_) / name;
    std::ofstream f(path, std::ios::binary);
    f << content;
    if (!f) throw InputError("cannot write '" + path.string() + "'");
    files_.push_back(path.string());
  }

  void finish(RunManifest& m) {
    m.finished = std::chrono::system_clock::now();
    m.outputs = files_;
    m.outputs.push_back((fs::path(dir_) / "manifest.json").string());
    const std::string text = m.to_json();
    std::ofstream f(fs::path(dir_) / "manifest.json", std::ios::binary);
    f << text;
    if (!f) throw InputError("cannot write manifest");
  }

 private:
  std::string dir_;
  std::vector<std::string> files_;
};

std::string cell(double x) { return format_double(x); }

}  // namespace

std::string density_csv(const DensityCurve& c) {
  std::string out = "lambda,density,cdf\n";
  for (std::size_t i = 0; i < c.lambdas.size(); ++i)
    out += cell(c.lambdas[i]) + "," + cell(c.density[i]) + "," + cell(c.cdf[i]) + "\n";
  return out;
}

DensityCurve parse_density_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("lambda,density,cdf", 0) != 0)
    throw InputError("density CSV must start with the header lambda,density,cdf");
  DensityCurve c;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    row.imbue(std::locale::classic());
    double l, d, f;
    char s1, s2;
    if (!(row >> l >> s1 >> d >> s2 >> f) || s1 != ',' || s2 != ',')
      throw InputError("bad density CSV row: '" + line + "'");
    if (!c.lambdas.empty() && !(l > c.lambdas.back())) throw InputError("density CSV lambdas must increase");
    c.lambdas.push_back(l);
    c.density.push_back(d);
    c.cdf.push_back(f);
  }
  if (c.lambdas.size() < 2) throw InputError("density CSV needs at least two rows");
  return c;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Eigenvalue laws of symmetric random matrices with correlated entries", "dwig"};
  app.set_version_flag("--version", DWIG_VERSION);
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--threads", g.threads, "Worker threads, 0 = all cores")->capture_default_str();
  app.add_option("--out-dir", g.out_dir, "Directory for artifacts and manifest.json");
  app.add_option("--seed", g.seed, "Seed of the input generator")->capture_default_str();

  // partitions
  auto* c_part = app.add_subcommand("partitions", "List pair partitions of {1..2m}, one per line");
  int part_m = 0;
  bool part_all = false, part_kreweras = false;
  c_part->add_option("--m", part_m, "Half size m (1..8)")->required();
  c_part->add_flag("--all", part_all, "All pairings instead of the non-crossing ones");
  c_part->add_flag("--kreweras", part_kreweras, "Append Kreweras blocks of non-crossing pairings");

  // kernel validate
  auto* c_kernel = app.add_subcommand("kernel", "Kernel utilities");
  c_kernel->require_subcommand(1);
  auto* c_validate = c_kernel->add_subcommand("validate", "Print kernel diagnostics; exit 3 on a hard failure");
  std::string validate_file;
  c_validate->add_option("file", validate_file, "Kernel JSON file")->required();

  // moments
  auto* c_mom = app.add_subcommand("moments", "Even moments beta_2m by the combinatorial sum and the recursion");
  ModelOpts mom_model;
  add_model_options(c_mom, mom_model);
  int mom_max_m = 4;
  std::string mom_method = "both";
  std::optional<int> mom_trunc;
  std::string mom_quad;
  c_mom->add_option("--max-m", mom_max_m, "Largest m")->capture_default_str();
  c_mom->add_option("--method", mom_method, "comb, rec or both")
      ->check(CLI::IsMember({"comb", "rec", "both"}))
      ->capture_default_str();
  c_mom->add_option("--trunc", mom_trunc, "Truncation N of the combinatorial sum (default: support radius)");
  c_mom->add_option("--quad", mom_quad, "Recursion grid, trap:N or gl:N (default: exact trapezoid)");

  // stieltjes
  auto* c_st = app.add_subcommand("stieltjes", "Solve for G(z) at one point; prints one JSON line");
  ModelOpts st_model;
  add_model_options(c_st, st_model);
  std::string st_z;
  int st_steps = 24;
  c_st->add_option("--z", st_z, "Point re,im (use --z=-1,0.5 for a negative real part)")->required();
  c_st->add_option("--steps", st_steps, "Continuation steps if the direct solve fails")->capture_default_str();

  // density
  auto* c_den = app.add_subcommand("density", "Density and cdf by Stieltjes inversion; CSV lambda,density,cdf");
  ModelOpts den_model;
  add_model_options(c_den, den_model);
  std::string den_grid, den_quad;
  double den_eps = 1e-3;
  bool den_rich = false;
  c_den->add_option("--grid", den_grid, "a:b:n (default 601 points on +-2.5 sqrt(rbar); --grid=-3:3:601)");
  c_den->add_option("--eps", den_eps, "Distance of the evaluation line from the real axis")->capture_default_str();
  c_den->add_flag("--richardson", den_rich, "Extrapolate 2 d(eps) - d(2 eps)");
  c_den->add_option("--quad", den_quad, "Grid of the functional equation, trap:N or gl:N");

  // lsd
  auto* c_lsd = app.add_subcommand("lsd", "Moments and description of the limit law of a worked model");
  ModelOpts lsd_model;
  c_lsd->add_option("--preset", lsd_model.preset, "example1 .. example6")->required();
  add_preset_options(c_lsd, lsd_model);
  int lsd_max_m = 5;
  bool lsd_json = false;
  c_lsd->add_option("--max-m", lsd_max_m, "Largest m (<= 8)")->capture_default_str();
  c_lsd->add_flag("--json", lsd_json, "Print one JSON object instead of CSV");

  // simulate
  auto* c_sim = app.add_subcommand("simulate", "Monte-Carlo spectra; writes report.json, moments.csv, eigs_<rep>.csv");
  ModelOpts sim_model;
  add_model_options(c_sim, sim_model);
  int sim_n = 1000, sim_reps = 20;
  std::string sim_dist = "gaussian", sim_theory;
  c_sim->add_option("--n", sim_n, "Matrix size")->capture_default_str();
  c_sim->add_option("--reps", sim_reps, "Replicates")->capture_default_str();
  c_sim->add_option("--dist", sim_dist, "gaussian, rademacher or uniform")
      ->check(CLI::IsMember({"gaussian", "rademacher", "uniform"}))
      ->capture_default_str();
  c_sim->add_option("--theory", sim_theory, "Density CSV (lambda,density,cdf) to measure distances against");

  // compare
  auto* c_cmp = app.add_subcommand("compare", "All pipelines side by side; writes compare.csv and compare.json");
  ModelOpts cmp_model;
  add_model_options(c_cmp, cmp_model);
  CompareConfig cmp;
  std::string cmp_dist = "gaussian";
  c_cmp->add_option("--n", cmp.n, "Matrix size")->capture_default_str();
  c_cmp->add_option("--reps", cmp.replicates, "Replicates")->capture_default_str();
  c_cmp->add_option("--max-m", cmp.max_m, "Largest m")->capture_default_str();
  c_cmp->add_option("--trunc", cmp.trunc, "Truncation N of the combinatorial sum");
  c_cmp->add_option("--dist", cmp_dist, "gaussian, rademacher or uniform")
      ->check(CLI::IsMember({"gaussian", "rademacher", "uniform"}))
      ->capture_default_str();
  c_cmp->add_option("--grid-points", cmp.grid_points, "Density grid points")->capture_default_str();
  c_cmp->add_option("--eps", cmp.epsilon, "Inversion offset")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  RunManifest manifest;
  for (int i = 0; i < argc; ++i) manifest.command_line += (i ? " " : "") + std::string(argv[i]);
  manifest.seed = g.seed;
  manifest.tool_version = DWIG_VERSION;
  manifest.started = std::chrono::system_clock::now();
  const unsigned threads = resolve_threads(g.threads);

  try {
    if (c_part->parsed()) {
      std::string text;
      if (part_all) {
        for_each_pairing(part_m, [&](const PairPartition& p) { text += to_string(p) + "\n"; });
      } else {
        for (const auto& p : enumerate_nc2(part_m)) {
          text += to_string(p);
          if (part_kreweras) {
            text += " ";
            for (const auto& block : kreweras(p).blocks) {
              text += "{";
              for (std::size_t i = 0; i < block.size(); ++i) text += (i ? "," : "") + std::to_string(block[i]);
              text += "}";
            }
          }
          text += "\n";
        }
      }
      out << text;
      Outputs o(g.out_dir);
      if (o.enabled()) {
        manifest.config = {{"command", "partitions"}, {"m", part_m}, {"all", part_all}, {"kreweras", part_kreweras}};
        o.write("partitions.txt", text);
        o.finish(manifest);
      }
      return kExitOk;
    }

    if (c_validate->parsed()) {
      const KernelSpec spec = parse_kernel_json(read_file(validate_file));
      out << "type: " << to_string(spec.type) << "\n"
          << "support radius: " << spec.kernel.support_radius() << "\n"
          << "rbar: " << format_double(rbar(spec.kernel)) << "\n"
          << validate(spec.kernel).to_text();
      return kExitOk;
    }

    if (c_mom->parsed()) {
      const Model model = load_model(mom_model);
      const CovKernel& k = model.spec.kernel;
      std::optional<MomentSequence> comb, rec;
      if (mom_method != "rec") comb = moments_combinatorial(k, mom_max_m, mom_trunc, threads);
      if (mom_method != "comb") {
        const Quadrature q = mom_quad.empty() ? default_quadrature(k, mom_max_m) : Quadrature::parse(mom_quad);
        rec = beta_recursive(spectral_density(k, q), mom_max_m).moments;
      }
      std::string text = "m,beta_comb,beta_rec,abs_diff\n";
      for (int m = 1; m <= mom_max_m; ++m) {
        const std::string a = comb ? cell(comb->moment(2 * m)) : "";
        const std::string b = rec ? cell(rec->moment(2 * m)) : "";
        const std::string d = comb && rec ? cell(std::abs(comb->moment(2 * m) - rec->moment(2 * m))) : "";
        text += std::to_string(m) + "," + a + "," + b + "," + d + "\n";
      }
      out << text;
      Outputs o(g.out_dir);
      if (o.enabled()) {
        manifest.config = model.config;
        manifest.config.update({{"command", "moments"}, {"max_m", mom_max_m}, {"method", mom_method},
                                {"trunc", mom_trunc ? json(*mom_trunc) : json(nullptr)}, {"quad", mom_quad}});
        o.write("moments.csv", text);
        o.finish(manifest);
      }
      return kExitOk;
    }

    if (c_st->parsed()) {
      const Model model = load_model(st_model);
      const cplx z = parse_z(st_z);
      const SpectralDensity2D f = spectral_density(model.spec.kernel, default_quadrature(model.spec.kernel));
      StieltjesField field;
      try {
        field = solve_H(f, z);
      } catch (const ConvergenceError&) {
        if (z.imag() <= 0.0) throw;
        PathSpec path;
        path.steps = st_steps;
        field = continuation_solve(f, z, path);
      }
      nlohmann::ordered_json j;
      j["z"] = {z.real(), z.imag()};
      j["g"] = {field.g.real(), field.g.imag()};
      j["residual"] = field.residual;
      j["iterations"] = field.iterations;
      const std::string text = j.dump() + "\n";
      out << text;
      Outputs o(g.out_dir);
      if (o.enabled()) {
        manifest.config = model.config;
        manifest.config.update({{"command", "stieltjes"}, {"z", st_z}, {"steps", st_steps}});
        o.write("stieltjes.json", text);
        o.finish(manifest);
      }
      return kExitOk;
    }

    if (c_den->parsed()) {
      const Model model = load_model(den_model);
      const CovKernel& k = model.spec.kernel;
      const Quadrature q = den_quad.empty() ? default_quadrature(k) : Quadrature::parse(den_quad);
      const SpectralDensity2D f = spectral_density(k, q);
      InversionOptions io;
      io.epsilon = den_eps;
      io.richardson = den_rich;
      const auto grid = den_grid.empty() ? default_lambda_grid(f.rbar) : parse_grid(den_grid);
      const DensityCurve curve = invert_density(f, grid, io);
      if (curve.max_outside_support > 1e-6)
        err << "warning: density " << format_double(curve.max_outside_support)
            << " found outside |lambda| <= 2 sqrt(rbar) + " << format_double(curve.support_margin) << "\n";
      const std::string text = density_csv(curve);
      out << text;
      Outputs o(g.out_dir);
      if (o.enabled()) {
        manifest.config = model.config;
        manifest.config.update({{"command", "density"}, {"grid", den_grid}, {"eps", den_eps},
                                {"richardson", den_rich}, {"quad", den_quad}});
        o.write("density.csv", text);
        o.finish(manifest);
      }
      return kExitOk;
    }

    if (c_lsd->parsed()) {
      const Model model = load_model(lsd_model);
      const Preset& p = *model.preset;
      const FreeProductMoments fp = free_mult_semicircle(*p.radial, lsd_max_m);
      std::string csv = "m,moment\n";
      for (int m = 1; m <= lsd_max_m; ++m) csv += std::to_string(m) + "," + cell(fp.moment(2 * m)) + "\n";
      nlohmann::ordered_json j;
      j["preset"] = p.name;
      j["descriptor"] = nlohmann::ordered_json::parse(p.descriptor_json);
      nlohmann::ordered_json moments = nlohmann::ordered_json::array();
      for (int m = 1; m <= lsd_max_m; ++m) {
        const double v = fp.moment(2 * m);
        moments.push_back({{"m", m}, {"value", std::isfinite(v) ? nlohmann::ordered_json(v) : nullptr}});
      }
      j["moments"] = moments;
      j["first_divergent_m"] = fp.first_divergent_m;
      const std::string js = j.dump() + "\n";
      out << (lsd_json ? js : csv);
      Outputs o(g.out_dir);
      if (o.enabled()) {
        manifest.config = model.config;
        manifest.config.update({{"command", "lsd"}, {"max_m", lsd_max_m}});
        o.write("lsd.csv", csv);
        o.write("lsd.json", js);
        o.finish(manifest);
      }
      return kExitOk;
    }

    if (c_sim->parsed()) {
      const Model model = load_model(sim_model);
      EnsembleConfig ec;
      ec.n = sim_n;
      ec.replicates = sim_reps;
      ec.input_dist = parse_input_dist(sim_dist);
      ec.seed = g.seed;
      ec.coeffs = simulation_coeffs(model.spec);
      validate(ec);

      const CovKernel& k = model.spec.kernel;
      Theory theory;
      if (!sim_theory.empty()) {
        theory = Theory::from_density(parse_density_csv(read_file(sim_theory)), sim_theory);
      } else if (model.preset && model.preset->dilation) {
        theory = Theory::semicircle(*model.preset->dilation);
      } else if (k.values().size() == 1) {
        theory = Theory::semicircle(std::sqrt(k.variance()));
      }
      if (!theory.moments) {
        theory.moments = moments_combinatorial(k, 3, std::nullopt, threads);
        if (theory.label.empty()) theory.label = "combinatorial moments";
      }
      ExperimentOptions eo;
      eo.threads = threads;
      eo.keep_spectra = true;
      const ExperimentReport rep = run_experiment(ec, theory, eo);

      Outputs o(g.out_dir.empty() ? "." : g.out_dir);
      o.write("report.json", rep.to_json());
      o.write("moments.csv", rep.moments_csv());
      for (std::size_t r = 0; r < rep.spectra.size(); ++r) {
        std::string eigs;
        for (double x : rep.spectra[r]) eigs += cell(x) + "\n";
        o.write("eigs_" + std::to_string(r) + ".csv", eigs);
      }
      manifest.config = model.config;
      manifest.config.update({{"command", "simulate"}, {"n", sim_n}, {"reps", sim_reps}, {"dist", sim_dist},
                              {"theory", sim_theory}, {"seed", g.seed}});
      o.finish(manifest);
      out << rep.moments_csv();
      if (rep.ks_mean) out << "levy_mean," << cell(*rep.levy_mean) << "\nks_mean," << cell(*rep.ks_mean) << "\n";
      return kExitOk;
    }

    if (c_cmp->parsed()) {
      const Model model = load_model(cmp_model);
      cmp.input_dist = parse_input_dist(cmp_dist);
      cmp.seed = g.seed;
      cmp.threads = threads;
      const CompareReport rep = compare(model.spec, cmp);
      Outputs o(g.out_dir.empty() ? "." : g.out_dir);
      o.write("compare.csv", rep.to_csv());
      o.write("compare.json", rep.to_json());
      manifest.config = model.config;
      manifest.config.update({{"command", "compare"}, {"n", cmp.n}, {"reps", cmp.replicates}, {"max_m", cmp.max_m},
                              {"trunc", cmp.trunc ? json(*cmp.trunc) : json(nullptr)}, {"dist", cmp_dist},
                              {"grid_points", cmp.grid_points}, {"eps", cmp.epsilon}, {"seed", g.seed}});
      o.finish(manifest);
      out << rep.to_text();
      if (!rep.complete()) {
        err << "compare: some stages failed; partial report written\n";
        return kExitNumeric;
      }
      return kExitOk;
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitUsage;
}

}  // namespace dwig::cli
