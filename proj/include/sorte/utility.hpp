#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "sorte/errors.hpp"
#include "sorte/numerics.hpp"

namespace sorte {

/// Preferences of one agent: a strictly increasing, strictly concave utility
/// on the whole real line together with its derivative, its convex conjugate
/// v(y) = sup_x {u(x) - x y} and the conjugate derivative. The solver only
/// ever touches this quadruple.
///
/// A positive weight gamma scales the utility; the weighted conjugate is
/// obtained from the base one through v_g(y) = gamma * v(y / gamma) and
/// v_g'(y) = v'(y / gamma), so custom families inherit weighting for free.
class AgentUtility {
 public:
  using Fn = std::function<double(double)>;

  static AgentUtility exponential(double alpha, double gamma = 1.0) {
    if (!(alpha > 0.0)) throw DomainError("exponential utility: alpha must be positive");
    if (!(gamma > 0.0)) throw DomainError("utility weight must be positive");
    AgentUtility au;
    au.exponential_ = true;
    au.alpha_ = alpha;
    au.gamma_ = gamma;
    return au;
  }

  /// Custom family given as the quadruple (u, u', v, v') for weight one.
  /// The quadruple is validated numerically at registration; a family that
  /// fails any of the checks is rejected with ValidationError.
  static AgentUtility custom(Fn u, Fn u_prime, Fn v, Fn v_prime, double gamma = 1.0) {
    if (!(gamma > 0.0)) throw DomainError("utility weight must be positive");
    AgentUtility au;
    au.exponential_ = false;
    au.gamma_ = gamma;
    au.u_fn_ = std::move(u);
    au.u_prime_fn_ = std::move(u_prime);
    au.v_fn_ = std::move(v);
    au.v_prime_fn_ = std::move(v_prime);
    au.validate_custom();
    return au;
  }

  bool is_exponential() const { return exponential_; }
  double alpha() const { return alpha_; }
  double weight() const { return gamma_; }

  /// Same preferences with the weight multiplied by `gamma`.
  AgentUtility weighted(double gamma) const {
    if (!(gamma > 0.0)) throw DomainError("utility weight must be positive");
    AgentUtility au = *this;
    au.gamma_ *= gamma;
    return au;
  }

  double u(double x) const {
    if (exponential_) return gamma_ * (1.0 - numerics::clamped_exp(-alpha_ * x));
    return gamma_ * u_fn_(x);
  }

  double u_prime(double x) const {
    if (exponential_) return gamma_ * alpha_ * numerics::clamped_exp(-alpha_ * x);
    return gamma_ * u_prime_fn_(x);
  }

  /// Conjugate at y >= 0; v(0) is the limit u(+inf).
  double v(double y) const {
    if (y < 0.0) throw DomainError("v: argument must be nonnegative");
    if (y == 0.0) return u_sup();
    if (exponential_) {
      const double t = y / alpha_;
      return gamma_ - t + t * std::log(y / (gamma_ * alpha_));
    }
    const double yb = y / gamma_;
    return gamma_ * v_fn_(yb);
  }

  double v_prime(double y) const {
    if (!(y > 0.0)) throw DomainError("v': argument must be positive");
    if (exponential_) return std::log(y / (gamma_ * alpha_)) / alpha_;
    return v_prime_fn_(y / gamma_);
  }

  /// lim_{x -> +inf} u(x); finite for the exponential family, estimated
  /// numerically for custom families (may be +inf).
  double u_sup() const {
    if (exponential_) return gamma_;
    const double far = gamma_ * u_fn_(1e9);
    const double farther = gamma_ * u_fn_(1e12);
    if (farther > far + 1e-6 * (std::fabs(far) + 1.0))
      return std::numeric_limits<double>::infinity();
    return farther;
  }

 private:
  void validate_custom() const {
    // Growth conditions at +-1e6.
    const double lo = u_fn_(-1e6) / (-1e6);
    const double hi = u_fn_(1e6) / 1e6;
    if (!(lo > 10.0))
      throw ValidationError("custom utility: u(x)/x must diverge as x -> -inf");
    if (!(std::fabs(hi) < 0.1))
      throw ValidationError("custom utility: u(x)/x must vanish as x -> +inf");

    // Monotonicity and concavity of u on a coarse grid. Strictness is
    // enforced through u' (representable even where u saturates in doubles).
    double prev_u = u_fn_(-50.0), prev_up = u_prime_fn_(-50.0);
    for (double x = -45.0; x <= 50.0; x += 5.0) {
      const double ux = u_fn_(x), upx = u_prime_fn_(x);
      if (!(ux >= prev_u)) throw ValidationError("custom utility: u must be increasing");
      if (!(upx > 0.0)) throw ValidationError("custom utility: u' must be positive");
      if (!(upx < prev_up))
        throw ValidationError("custom utility: u' must be strictly decreasing (strict concavity)");
      prev_u = ux;
      prev_up = upx;
    }

    // Conjugacy identities and convexity of v on a log-spaced grid.
    double prev_vp = -std::numeric_limits<double>::infinity();
    for (double e = -6.0; e <= 6.0; e += 0.5) {
      const double y = std::pow(10.0, e);
      const double vy = v_fn_(y);
      const double vpy = v_prime_fn_(y);
      if (!(vpy > prev_vp))
        throw ValidationError("custom utility: v' must be strictly increasing");
      prev_vp = vpy;
      const double lhs = u_fn_(-vpy);
      const double rhs = vy - y * vpy;
      if (std::fabs(lhs - rhs) > 1e-10 * (1.0 + std::fabs(rhs)))
        throw ValidationError("custom utility: conjugacy identity u(-v'(y)) = v(y) - y v'(y) fails");
      const double up = u_prime_fn_(-vpy);
      if (std::fabs(up - y) > 1e-8 * (1.0 + y))
        throw ValidationError("custom utility: inverse-marginal identity u'(-v'(y)) = y fails");
      const double h = 1e-4 * y;
      const double second = (v_fn_(y + h) - 2.0 * vy + v_fn_(y - h)) / (h * h);
      if (second < -1e-9) throw ValidationError("custom utility: v must be convex");
    }

    // v'(0+) = -inf and v'(inf) = +inf, needed so the solver's root brackets
    // always close.
    if (!(v_prime_fn_(1e-280) < v_prime_fn_(1.0) - 10.0))
      throw ValidationError("custom utility: v'(0+) must diverge to -inf");
    if (!(v_prime_fn_(1e280) > v_prime_fn_(1.0) + 10.0))
      throw ValidationError("custom utility: v'(inf) must diverge to +inf");
  }

  bool exponential_ = true;
  double alpha_ = 1.0;
  double gamma_ = 1.0;
  Fn u_fn_, u_prime_fn_, v_fn_, v_prime_fn_;
};

/// Utilities of all agents, in agent order.
struct UtilityProfile {
  std::vector<AgentUtility> agents;

  static UtilityProfile exponential(const std::vector<double>& alphas,
                                    const std::vector<double>& gammas = {}) {
    if (!gammas.empty() && gammas.size() != alphas.size())
      throw DimensionError("UtilityProfile: gammas length does not match alphas");
    UtilityProfile p;
    p.agents.reserve(alphas.size());
    for (std::size_t n = 0; n < alphas.size(); ++n)
      p.agents.push_back(AgentUtility::exponential(alphas[n], gammas.empty() ? 1.0 : gammas[n]));
    return p;
  }

  int size() const { return static_cast<int>(agents.size()); }
  const AgentUtility& operator[](int n) const { return agents[n]; }
};

/// Profile whose n-th utility is gamma_n times the n-th input utility.
inline UtilityProfile apply_weights(const UtilityProfile& profile,
                                    const std::vector<double>& gammas) {
  if (static_cast<int>(gammas.size()) != profile.size())
    throw DimensionError("apply_weights: gammas length does not match profile");
  UtilityProfile out;
  out.agents.reserve(profile.agents.size());
  for (int n = 0; n < profile.size(); ++n) out.agents.push_back(profile[n].weighted(gammas[n]));
  return out;
}

}  // namespace sorte
