#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "sorte/errors.hpp"

namespace sorte {

/// Dense row-major matrix, used for endowments and allocations (agents as
/// rows, scenarios as columns).
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double value = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, value) {}

  double& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  double operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  std::vector<double> row(int r) const {
    std::vector<double> out(cols_);
    for (int c = 0; c < cols_; ++c) out[c] = (*this)(r, c);
    return out;
  }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

namespace numerics {

/// exp with the argument clamped to +-700, so deep tails stay finite and
/// monotone instead of overflowing to inf.
inline double clamped_exp(double x) {
  if (x > 700.0) x = 700.0;
  if (x < -700.0) x = -700.0;
  return std::exp(x);
}

/// log(sum_i w_i * exp(z_i)) with max subtraction; w_i >= 0, not all zero.
inline double log_sum_exp(const std::vector<double>& weights, const std::vector<double>& z) {
  double zmax = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (weights[i] > 0.0 && z[i] > zmax) zmax = z[i];
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (weights[i] > 0.0) sum += weights[i] * std::exp(z[i] - zmax);
  }
  return zmax + std::log(sum);
}

struct RootOptions {
  double abs_tol = 0.0;      // absolute tolerance on the abscissa
  double rel_tol = 4e-16;    // relative tolerance on the abscissa
  double f_tol = 0.0;        // early exit once |f| falls below this
  int max_iter = 200;
};

/// Brent's method on a sign-changing bracket [a, b]. The callable is assumed
/// continuous; convergence is guaranteed by the bisection fallback.
template <class F>
double brent_root(F&& f, double a, double b, double fa, double fb, const RootOptions& opts = {},
                  int* iterations = nullptr) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) throw BracketError("brent_root: endpoints do not bracket a root");

  double c = a, fc = fa;
  double d = b - a, e = d;
  int iter = 0;
  for (; iter < opts.max_iter; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::fabs(b) +
                        0.5 * (opts.abs_tol + opts.rel_tol * std::fabs(b));
    const double xm = 0.5 * (c - b);
    if (std::fabs(xm) <= tol1 || fb == 0.0 || std::fabs(fb) <= opts.f_tol) break;
    if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
      // inverse quadratic / secant step
      const double s = fb / fa;
      double p, q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        q = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::fabs(p);
      const double min1 = 3.0 * xm * q - std::fabs(tol1 * q);
      const double min2 = std::fabs(e * q);
      if (2.0 * p < std::min(min1, min2)) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::fabs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
    fb = f(b);
  }
  if (iterations) *iterations += iter;
  if (iter >= opts.max_iter) throw ConvergenceError("brent_root: iteration budget exhausted");
  return b;
}

/// Root of a (weakly) increasing function on (0, inf), bracketed by growing /
/// shrinking geometrically from `seed`. Floors at 1e-300 and caps at 1e300;
/// failure to find a sign change raises BracketError.
template <class F>
double root_increasing_positive(F&& f, double seed, const RootOptions& opts = {},
                                int* iterations = nullptr) {
  double hi = seed > 0.0 ? seed : 1.0;
  double f_hi = f(hi);
  if (f_hi == 0.0) return hi;
  double lo = hi, f_lo = f_hi;
  if (f_hi < 0.0) {
    for (int k = 0; k < 700 && f_hi < 0.0; ++k) {
      lo = hi;
      f_lo = f_hi;
      hi *= 8.0;
      if (hi > 1e300) throw BracketError("root_increasing_positive: no sign change up to 1e300");
      f_hi = f(hi);
    }
    if (f_hi < 0.0) throw BracketError("root_increasing_positive: no sign change up to 1e300");
  } else {
    for (int k = 0; k < 700 && f_lo > 0.0; ++k) {
      hi = lo;
      f_hi = f_lo;
      lo /= 8.0;
      if (lo < 1e-300) throw BracketError("root_increasing_positive: no sign change down to 1e-300");
      f_lo = f(lo);
    }
    if (f_lo > 0.0) throw BracketError("root_increasing_positive: no sign change down to 1e-300");
  }
  return brent_root(f, lo, hi, f_lo, f_hi, opts, iterations);
}

/// Root of a (weakly) increasing function on the whole line, bracketed by
/// symmetric geometric expansion around `seed` with initial step `step`.
template <class F>
double root_increasing_real(F&& f, double seed, double step, const RootOptions& opts = {},
                            int* iterations = nullptr) {
  double x = seed;
  double fx = f(x);
  if (fx == 0.0) return x;
  double lo, hi, f_lo, f_hi;
  if (step <= 0.0) step = 1.0;
  if (fx < 0.0) {
    lo = x;
    f_lo = fx;
    hi = x + step;
    f_hi = f(hi);
    for (int k = 0; k < 2000 && f_hi < 0.0; ++k) {
      lo = hi;
      f_lo = f_hi;
      step *= 2.0;
      hi += step;
      if (!std::isfinite(hi)) throw BracketError("root_increasing_real: no upper sign change");
      f_hi = f(hi);
    }
    if (f_hi < 0.0) throw BracketError("root_increasing_real: no upper sign change");
  } else {
    hi = x;
    f_hi = fx;
    lo = x - step;
    f_lo = f(lo);
    for (int k = 0; k < 2000 && f_lo > 0.0; ++k) {
      hi = lo;
      f_hi = f_lo;
      step *= 2.0;
      lo -= step;
      if (!std::isfinite(lo)) throw BracketError("root_increasing_real: no lower sign change");
      f_lo = f(lo);
    }
    if (f_lo > 0.0) throw BracketError("root_increasing_real: no lower sign change");
  }
  return brent_root(f, lo, hi, f_lo, f_hi, opts, iterations);
}

}  // namespace numerics
}  // namespace sorte
