#include "msa/math_core.hpp"

#include <cmath>

#include "msa/errors.hpp"

namespace msa {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInvE = 0.36787944117144232160;

double lambert_initial_guess(double z) {
  if (z < -0.30) {
    // Series about the branch point in p = sqrt(2(e*z + 1)).
    const double p = std::sqrt(std::max(0.0, 2.0 * (std::exp(1.0) * z + 1.0)));
    return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0)));
  }
  if (z < 0.30) {
    return z * (1.0 + z * (-1.0 + z * (1.5 - z * (8.0 / 3.0))));
  }
  if (z < 3.0) {
    return std::log1p(z) * 0.8;
  }
  const double l = std::log(z);
  const double ll = std::log(l);
  return l - ll + ll / l;
}

double lambert_bisect(double z, double tol_abs) {
  // w*exp(w) is increasing on [-1, inf); bracket generously.
  double lo = -1.0;
  double hi = 2.0;
  while (hi * std::exp(hi) < z) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double f = mid * std::exp(mid) - z;
    if (std::abs(f) <= tol_abs) return mid;
    if (f < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double lambert_w0(double z, const NumericTolerances& tol) {
  if (std::isnan(z) || z < -kInvE)
    throw DomainError("lambert_w0: argument below -1/e has no real principal-branch value");
  if (z == 0.0) return 0.0;

  const double tol_abs = tol.residual_tol * std::max(1.0, std::abs(z));
  double w = lambert_initial_guess(z);
  if (w < -1.0) w = -1.0;

  const auto halley_step = [z](double wk, double f, double ew) {
    const double wp1 = wk + 1.0;
    const double denom = ew * wp1 - (wk + 2.0) * f / (2.0 * wp1);
    if (denom == 0.0 || !std::isfinite(denom)) return wk;
    const double next = wk - f / denom;
    return next < -1.0 ? -1.0 : next;
  };

  for (int i = 0; i < tol.max_iterations; ++i) {
    const double ew = std::exp(w);
    const double f = w * ew - z;
    if (std::abs(f) <= tol_abs) {
      // One guarded polish step; keeps whichever iterate has the smaller
      // residual, so the result typically lands at machine precision.
      const double polished = halley_step(w, f, ew);
      return std::abs(polished * std::exp(polished) - z) < std::abs(f) ? polished : w;
    }
    // Halley step; wp1 = 0 only at the branch point, where the residual
    // check above already fires.
    const double next = halley_step(w, f, ew);
    if (next == w) break;
    w = next;
  }

  const double ew = std::exp(w);
  if (std::abs(w * ew - z) <= tol_abs) return w;
  w = lambert_bisect(z, tol_abs);
  if (std::abs(w * std::exp(w) - z) <= tol_abs) return w;
  throw ConvergenceError("lambert_w0: residual target not reached");
}

double gamma_reflection_product(double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw DomainError("gamma_reflection_product: delta must lie in (0,1)");
  // sin(pi*delta) evaluated at the smaller of delta, 1-delta for accuracy
  // near the endpoints.
  const double m = delta <= 0.5 ? delta : 1.0 - delta;
  return kPi * delta / std::sin(kPi * m);
}

double solve_bracketed_root(const std::function<double(double)>& f, double lo,
                            double hi, const NumericTolerances& tol) {
  if (!(lo <= hi)) throw DomainError("solve_bracketed_root: lo must not exceed hi");
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw BracketError("solve_bracketed_root: f(lo) and f(hi) have the same sign");

  for (int i = 0; i < tol.max_iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if (std::abs(fmid) <= tol.residual_tol || (hi - lo) <= tol.residual_tol)
      return mid;
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  if ((hi - lo) <= tol.residual_tol) return 0.5 * (lo + hi);
  throw ConvergenceError("solve_bracketed_root: max_iterations exhausted");
}

}  // namespace msa
