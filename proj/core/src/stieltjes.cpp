#include "dwig/stieltjes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include "dwig/errors.hpp"

namespace dwig {

namespace {

// Weighted kernel W_ij = f(x_i, x_j) w_j, so (W h)_i approximates int f(x_i, y) h(y) dy.
std::vector<double> weighted_kernel(const SpectralDensity2D& f) {
  const std::size_t n = f.size();
  std::vector<double> W(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) W[i * n + j] = f(i, j) * f.quad.weights[j];
  return W;
}

void apply(const std::vector<double>& W, const std::vector<cplx>& h, std::vector<cplx>& out) {
  const std::size_t n = h.size();
  for (std::size_t i = 0; i < n; ++i) {
    cplx s = 0.0;
    const double* row = &W[i * n];
    for (std::size_t j = 0; j < n; ++j) s += row[j] * h[j];
    out[i] = s;
  }
}

double defect(cplx z, const std::vector<cplx>& h, const std::vector<cplx>& p, std::vector<cplx>* F = nullptr) {
  double worst = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const cplx d = z * h[i] - 1.0 - h[i] * p[i];
    if (F) (*F)[i] = d;
    worst = std::max(worst, std::abs(d));
  }
  return worst;
}

// Solves A x = b in place (A row-major n x n) with partial pivoting; false if singular.
bool lu_solve(std::vector<cplx>& A, std::vector<cplx>& b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    double best = std::abs(A[col * n + col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double v = std::abs(A[r * n + col]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0.0 || !std::isfinite(best)) return false;
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(A[col * n + c], A[piv * n + c]);
      std::swap(b[col], b[piv]);
    }
    const cplx inv = 1.0 / A[col * n + col];
    for (std::size_t r = col + 1; r < n; ++r) {
      const cplx factor = A[r * n + col] * inv;
      if (factor == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) A[r * n + c] -= factor * A[col * n + c];
      b[r] -= factor * b[col];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    cplx s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= A[i * n + c] * b[c];
    b[i] = s / A[i * n + i];
  }
  return true;
}

std::string describe(cplx z) {
  std::ostringstream os;
  os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

}  // namespace

cplx g_transform(const SpectralDensity2D& f, const std::vector<cplx>& h) {
  cplx g = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) g += f.quad.weights[i] * h[i];
  return g;
}

StieltjesField solve_H(const SpectralDensity2D& f, cplx z, const SolverOptions& opts, const std::vector<cplx>* warm) {
  if (z.imag() == 0.0) throw InvalidArgument("solve_H needs Im z != 0");
  const std::size_t n = f.size();
  if (warm && warm->size() != n) throw InvalidArgument("warm start has the wrong size");

  const auto W = weighted_kernel(f);
  std::vector<cplx> h = warm ? *warm : std::vector<cplx>(n, 1.0 / z);
  std::vector<cplx> p(n), F(n), trial(n), tp(n);

  double omega = opts.damping;
  double prev = std::numeric_limits<double>::infinity();
  int rising = 0;
  bool newton_gave_up = !opts.newton;
  const int newton_start = warm ? std::min(2, opts.newton_after) : opts.newton_after;

  StieltjesField out;
  out.z = z;
  int iter = 0;
  apply(W, h, p);
  double res = defect(z, h, p);
  while (res > opts.tol) {
    if (iter >= opts.max_iter)
      throw ConvergenceError("Stieltjes fixed point did not converge at z = " + describe(z) + " after " +
                                 std::to_string(iter) + " iterations (residual " + std::to_string(res) + ")",
                             z, res);

    if (!newton_gave_up && iter >= newton_start) {
      // Newton on F(h) = z h - 1 - h (W h); J = diag(z - W h) - diag(h) W.
      bool progressed = true;
      while (res > opts.tol && progressed && iter < opts.max_iter) {
        defect(z, h, p, &F);
        std::vector<cplx> J(n * n);
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = 0; j < n; ++j) J[i * n + j] = -h[i] * W[i * n + j];
          J[i * n + i] += z - p[i];
        }
        std::vector<cplx> step(n);
        for (std::size_t i = 0; i < n; ++i) step[i] = -F[i];
        progressed = lu_solve(J, step);
        if (!progressed) break;
        progressed = false;
        double t = 1.0;
        for (int ls = 0; ls < 12; ++ls, t *= 0.5) {
          for (std::size_t i = 0; i < n; ++i) trial[i] = h[i] + t * step[i];
          apply(W, trial, tp);
          const double r = defect(z, trial, tp);
          if (r < res) {
            h.swap(trial);
            p.swap(tp);
            res = r;
            progressed = true;
            break;
          }
        }
        ++iter;
      }
      if (res <= opts.tol) break;
      newton_gave_up = true;
      continue;
    }

    if (res > prev) {
      if (++rising >= 10) {
        omega *= 0.5;
        rising = 0;
      }
    } else {
      rising = 0;
    }
    prev = res;
    for (std::size_t i = 0; i < n; ++i) h[i] = (1.0 - omega) * h[i] + omega / (z - p[i]);
    apply(W, h, p);
    res = defect(z, h, p);
    ++iter;
  }

  out.h = std::move(h);
  out.g = g_transform(f, out.h);
  out.residual = res;
  out.iterations = iter;
  if (!std::isfinite(out.g.real()) || !std::isfinite(out.g.imag()))
    throw ConvergenceError("non-finite Stieltjes transform at z = " + describe(z), z, res);
  if ((z.imag() > 0.0 && out.g.imag() >= 0.0) || (z.imag() < 0.0 && out.g.imag() <= 0.0))
    throw ConvergenceError("fixed point at z = " + describe(z) + " is not a Stieltjes transform (sign of Im G)", z,
                           res);
  return out;
}

StieltjesField continuation_solve(const SpectralDensity2D& f, cplx z_target, const PathSpec& path,
                                  const SolverOptions& opts) {
  if (z_target.imag() <= 0.0) throw InvalidArgument("continuation needs Im z_target > 0");
  if (path.steps < 1) throw InvalidArgument("continuation path needs at least one point");
  if (path.steps == 1) return solve_H(f, z_target, opts);

  const double y0 = path.start_height.value_or(4.0 * std::sqrt(std::max(f.rbar, 1e-300)));
  const double y1 = z_target.imag();
  StieltjesField field;
  for (int k = 0; k < path.steps; ++k) {
    const double t = static_cast<double>(k) / (path.steps - 1);
    const cplx z = k + 1 == path.steps ? z_target
                                       : cplx(z_target.real() * t, std::pow(y0, 1.0 - t) * std::pow(y1, t));
    try {
      field = k == 0 ? solve_H(f, z, opts) : solve_H(f, z, opts, &field.h);
    } catch (const ConvergenceError& e) {
      throw ConvergenceError("continuation failed at path point " + std::to_string(k + 1) + "/" +
                                 std::to_string(path.steps) + " (z = " + describe(z) + "): " + e.what(),
                             z, e.residual());
    }
  }
  return field;
}

double DensityCurve::cdf_at(double x) const {
  if (lambdas.empty() || x < lambdas.front()) return 0.0;
  if (x >= lambdas.back()) return cdf.back();
  const auto it = std::upper_bound(lambdas.begin(), lambdas.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - lambdas.begin());
  const double t = (x - lambdas[j - 1]) / (lambdas[j] - lambdas[j - 1]);
  return cdf[j - 1] + t * (cdf[j] - cdf[j - 1]);
}

double DensityCurve::moment(int p) const {
  double s = 0.0;
  for (std::size_t i = 1; i < lambdas.size(); ++i) {
    const double a = std::pow(lambdas[i - 1], p) * density[i - 1];
    const double b = std::pow(lambdas[i], p) * density[i];
    s += 0.5 * (a + b) * (lambdas[i] - lambdas[i - 1]);
  }
  return s;
}

std::vector<double> default_lambda_grid(double rbar, int points) {
  if (points < 2) throw InvalidArgument("lambda grid needs at least two points");
  const double half = 2.5 * std::sqrt(rbar);
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) grid[i] = -half + 2.0 * half * i / (points - 1);
  return grid;
}

namespace {

std::vector<double> raw_density(const SpectralDensity2D& f, const std::vector<double>& grid, double eps,
                                const InversionOptions& opts, std::vector<double>& failed) {
  std::vector<double> d(grid.size(), 0.0);
  std::vector<cplx> last;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const cplx z(grid[i], eps);
    std::optional<StieltjesField> field;
    if (!last.empty()) {
      try {
        field = solve_H(f, z, opts.solver, &last);
      } catch (const ConvergenceError&) {
      }
    }
    if (!field) {
      try {
        field = continuation_solve(f, z, opts.path, opts.solver);
      } catch (const ConvergenceError&) {
        failed.push_back(grid[i]);
        last.clear();
        continue;
      }
    }
    d[i] = -field->g.imag() / std::numbers::pi;
    last = std::move(field->h);
  }
  return d;
}

}  // namespace

DensityCurve invert_density(const SpectralDensity2D& f, const std::vector<double>& lambda_grid,
                            const InversionOptions& opts) {
  if (opts.epsilon <= 0.0) throw InvalidArgument("inversion offset epsilon must be positive");
  if (lambda_grid.size() < 2) throw InvalidArgument("lambda grid needs at least two points");
  for (std::size_t i = 1; i < lambda_grid.size(); ++i)
    if (!(lambda_grid[i] > lambda_grid[i - 1])) throw InvalidArgument("lambda grid must be increasing");

  std::vector<double> failed;
  DensityCurve c;
  c.lambdas = lambda_grid;
  c.epsilon = opts.epsilon;
  c.richardson = opts.richardson;
  auto d1 = raw_density(f, lambda_grid, opts.epsilon, opts, failed);
  std::vector<double> d2;
  if (opts.richardson) d2 = raw_density(f, lambda_grid, 2.0 * opts.epsilon, opts, failed);
  if (!failed.empty()) {
    std::sort(failed.begin(), failed.end());
    failed.erase(std::unique(failed.begin(), failed.end()), failed.end());
    std::ostringstream os;
    os << "Stieltjes inversion failed at " << failed.size() << " of " << lambda_grid.size() << " grid points";
    throw PartialResultError(os.str(), failed);
  }
  for (const auto* d : {&d1, &d2})
    for (std::size_t i = 0; i < d->size(); ++i)
      if ((*d)[i] < -1e-9)
        throw NumericalConsistencyError("negative density " + std::to_string((*d)[i]) + " at lambda = " +
                                        std::to_string(lambda_grid[i]));

  c.density.resize(lambda_grid.size());
  for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
    const double v = opts.richardson ? 2.0 * d1[i] - d2[i] : d1[i];
    c.density[i] = std::max(v, 0.0);
  }
  c.cdf.assign(lambda_grid.size(), 0.0);
  for (std::size_t i = 1; i < lambda_grid.size(); ++i)
    c.cdf[i] = c.cdf[i - 1] + 0.5 * (c.density[i - 1] + c.density[i]) * (lambda_grid[i] - lambda_grid[i - 1]);

  const double edge = 2.0 * std::sqrt(f.rbar);
  for (std::size_t i = 0; i < lambda_grid.size(); ++i)
    if (std::abs(lambda_grid[i]) > edge + c.support_margin)
      c.max_outside_support = std::max(c.max_outside_support, c.density[i]);
  const bool covers_support = lambda_grid.front() <= -edge && lambda_grid.back() >= edge;
  if (covers_support && std::abs(c.cdf.back() - 1.0) > 1e-3)
    throw NumericalConsistencyError("inverted density has total mass " + std::to_string(c.cdf.back()) +
                                    " (expected 1 within 1e-3)");
  return c;
}

std::vector<double> laurent_moments(const SpectralDensity2D& f, int m_max, double radius, int points,
                                    const SolverOptions& opts) {
  if (m_max < 1) throw InvalidArgument("m_max must be positive");
  if (points < 4 || points % 2 != 0) throw InvalidArgument("contour needs an even number of points >= 4");
  if (!(radius > 2.0 * std::sqrt(f.rbar))) throw InvalidArgument("contour radius must exceed 2 sqrt(rbar)");
  // z_j = radius e^{i theta_j}, theta_j = 2 pi (j + 1/2) / points; dz = i z dtheta, so
  // beta_p = (1/points) sum_j z_j^{p+1} G(z_j), and the lower half mirrors the upper.
  std::vector<double> sums(static_cast<std::size_t>(m_max), 0.0);
  for (int j = 0; j < points / 2; ++j) {
    const double theta = 2.0 * std::numbers::pi * (j + 0.5) / points;
    const cplx z = std::polar(radius, theta);
    const cplx g = solve_H(f, z, opts).g;
    for (int m = 1; m <= m_max; ++m) sums[static_cast<std::size_t>(m - 1)] += 2.0 * (std::pow(z, 2 * m + 1) * g).real();
  }
  for (double& s : sums) s /= points;
  return sums;
}

}  // namespace dwig
