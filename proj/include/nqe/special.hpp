#pragma once

// Special functions shared across the library. Accuracy target is ~1e-12
// relative in the interior of each domain; branch switches are placed where
// both sides agree to that level.

namespace nqe::numerics {

double erf(double x);
double erfc(double x);

// exp(x^2) * erfc(x). Positive everywhere; grows like 2*exp(x^2) for x -> -inf.
double erfcx(double x);

// Dawson's integral exp(-x^2) * int_0^x exp(t^2) dt.
double dawson(double x);

// Imaginary error function. Throws OverflowDomain for |x| > 26.5 where the
// result exceeds double range.
double erfi(double x);

double norm_cdf(double x);
// Inverse standard normal CDF; DomainError for u outside (0,1).
double norm_ppf(double u);

// Regularized lower incomplete gamma P(a,x).
double lower_gamma_reg(double a, double x);

// chi^2 CDF with k degrees of freedom; DomainError for x < 0 or k < 1.
double chi2_cdf(int k, double x);

} // namespace nqe::numerics
