#pragma once

namespace vabench {

/// Regularized incomplete beta I_x(a, b).
double reg_inc_beta(double x, double a, double b);

/// Regularized lower incomplete gamma P(a, x).
double reg_inc_gamma_lower(double a, double x);
/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed directly.
double reg_inc_gamma_upper(double a, double x);

/// P(F > f) for an F(d1, d2) variable.
double f_upper_tail(double f, double d1, double d2);

/// P(X > x) for a chi-squared variable with `df` degrees of freedom.
double chisq_upper_tail(double x, double df);

}  // namespace vabench
