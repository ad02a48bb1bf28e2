#include "dwig/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dwig/errors.hpp"

namespace dwig {

namespace {

// Column-major work matrix: v(r, c) = w[c * n + r], so the inner loops of
// the reduction, which run down columns, touch contiguous memory.
struct Work {
  int n;
  std::vector<double> w;
  double& operator()(int r, int c) noexcept { return w[static_cast<std::size_t>(c) * n + r]; }
};

// Householder tridiagonalization (tred2 ordering). On return d holds the
// diagonal, e the subdiagonal in e[1..n-1], and v the orthogonal transform
// when accumulate is set.
void tridiagonalize(Work& v, std::vector<double>& d, std::vector<double>& e, bool accumulate) {
  const int n = v.n;
  for (int j = 0; j < n; ++j) d[j] = v(n - 1, j);

  for (int i = n - 1; i > 0; --i) {
    double scale = 0.0, h = 0.0;
    for (int k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (int j = 0; j < i; ++j) {
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
        v(j, i) = 0.0;
      }
    } else {
      for (int k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (int j = 0; j < i; ++j) e[j] = 0.0;

      for (int j = 0; j < i; ++j) {
        f = d[j];
        v(j, i) = f;
        g = e[j] + v(j, j) * f;
        double* col = &v.w[static_cast<std::size_t>(j) * n];
        for (int k = j + 1; k <= i - 1; ++k) {
          g += col[k] * d[k];
          e[k] += col[k] * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (int j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (int j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (int j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        double* col = &v.w[static_cast<std::size_t>(j) * n];
        for (int k = j; k <= i - 1; ++k) col[k] -= (f * e[k] + g * d[k]);
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
      }
    }
    d[i] = h;
  }

  if (!accumulate) {
    for (int j = 0; j < n; ++j) d[j] = v(j, j);
    e[0] = 0.0;
    return;
  }

  for (int i = 0; i < n - 1; ++i) {
    v(n - 1, i) = v(i, i);
    v(i, i) = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (int k = 0; k <= i; ++k) d[k] = v(k, i + 1) / h;
      const double* ci = &v.w[static_cast<std::size_t>(i + 1) * n];
      for (int j = 0; j <= i; ++j) {
        double* cj = &v.w[static_cast<std::size_t>(j) * n];
        double g = 0.0;
        for (int k = 0; k <= i; ++k) g += ci[k] * cj[k];
        for (int k = 0; k <= i; ++k) cj[k] -= g * d[k];
      }
    }
    for (int k = 0; k <= i; ++k) v(k, i + 1) = 0.0;
  }
  for (int j = 0; j < n; ++j) {
    d[j] = v(n - 1, j);
    v(n - 1, j) = 0.0;
  }
  v(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
}

// Implicit-shift QL on the tridiagonal (d, e); rotations are applied to the
// columns of v when given.
void ql_implicit(std::vector<double>& d, std::vector<double>& e, Work* v) {
  const int n = static_cast<int>(d.size());
  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;
  constexpr double eps = 0x1.0p-52;

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (++iter > kMaxQlSweeps)
        throw ConvergenceError("QL iteration did not converge for eigenvalue " + std::to_string(l), {d[l], 0.0},
                               std::abs(e[l]));
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      bool underflow = false;
      for (int i = m - 1; i >= l; --i) {
        double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        if (v) {
          double* c0 = &v->w[static_cast<std::size_t>(i) * n];
          double* c1 = &v->w[static_cast<std::size_t>(i + 1) * n];
          for (int k = 0; k < n; ++k) {
            f = c1[k];
            c1[k] = s * c0[k] + c * f;
            c0[k] = c * c0[k] - s * f;
          }
        }
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    } while (true);
  }
}

Work load(const SymMatrix& a) {
  require_symmetric(a);
  // a is symmetric, so its row-major storage is also the column-major one.
  return Work{a.n, a.a};
}

}  // namespace

void require_symmetric(const SymMatrix& a, double tol) {
  if (a.n < 1 || a.a.size() != static_cast<std::size_t>(a.n) * a.n)
    throw InvalidArgument("matrix storage does not match its size");
  double scale = 1.0;
  for (double x : a.a) scale = std::max(scale, std::abs(x));
  for (int i = 0; i < a.n; ++i)
    for (int j = i + 1; j < a.n; ++j)
      if (std::abs(a(i, j) - a(j, i)) > tol * scale)
        throw InvalidArgument("matrix is not symmetric at (" + std::to_string(i) + "," + std::to_string(j) + ")");
}

std::vector<double> symmetric_eigenvalues(const SymMatrix& a) {
  Work v = load(a);
  std::vector<double> d(a.n), e(a.n);
  tridiagonalize(v, d, e, false);
  ql_implicit(d, e, nullptr);
  std::sort(d.begin(), d.end());
  return d;
}

EigenDecomposition symmetric_eigen(const SymMatrix& a) {
  Work v = load(a);
  const int n = a.n;
  std::vector<double> d(n), e(n);
  tridiagonalize(v, d, e, true);
  ql_implicit(d, e, &v);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) { return d[x] < d[y]; });
  EigenDecomposition out{n, std::vector<double>(n), std::vector<double>(static_cast<std::size_t>(n) * n)};
  for (int k = 0; k < n; ++k) {
    out.values[k] = d[order[k]];
    std::copy_n(&v.w[static_cast<std::size_t>(order[k]) * n], n, &out.vectors[static_cast<std::size_t>(k) * n]);
  }
  return out;
}

}  // namespace dwig
