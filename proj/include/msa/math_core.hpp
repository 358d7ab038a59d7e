#pragma once

#include <functional>

namespace msa {

struct NumericTolerances {
  double residual_tol = 1e-12;
  int max_iterations = 64;
};

// Principal-branch Lambert W: the w >= -1 solving w*exp(w) = z, defined for
// z >= -1/e. Series/log initial guess refined by Halley iteration until
// |w*exp(w) - z| <= residual_tol * max(1, |z|), with a bisection fallback.
// Only the principal branch is provided: the lower branch would make success
// probability grow with arrival rate and is rejected by the model.
// Throws DomainError for z < -1/e (an over-loaded network upstream).
double lambert_w0(double z, const NumericTolerances& tol = {});

// Gamma(1+delta) * Gamma(1-delta) for delta in (0,1), computed as
// pi*delta / sin(pi*delta). Throws DomainError outside (0,1).
double gamma_reflection_product(double delta);

// Bisection on a continuous monotone f with f(lo)*f(hi) <= 0. Returns t with
// |f(t)| <= residual_tol or bracket width <= residual_tol. Plain bisection:
// determinism over speed. Throws BracketError when the signs agree,
// ConvergenceError when max_iterations is exhausted.
double solve_bracketed_root(const std::function<double(double)>& f, double lo,
                            double hi, const NumericTolerances& tol = {});

}  // namespace msa
