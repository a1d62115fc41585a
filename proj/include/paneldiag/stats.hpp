#pragma once

#include <vector>

namespace paneldiag {

// Regularized incomplete gamma P(a, x) and its complement Q(a, x) = 1 - P.
// Series expansion below the a+1 crossover, Lentz continued fraction above.
double inc_gamma_lower(double a, double x);
double inc_gamma_upper(double a, double x);

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double inc_beta(double a, double b, double x);

// Survival functions used by the Wald test. chi2_sf(x, k) = Q(k/2, x/2);
// f_sf(x, d1, d2) = I_{d2/(d2 + d1 x)}(d2/2, d1/2).
double chi2_sf(double x, double dof);
double f_sf(double x, double dof1, double dof2);

// Standard normal quantile (Wichura's AS241, double precision).
double normal_quantile(double p);

// Kolmogorov-Smirnov distance between a sample and the uniform [0,1] cdf.
double ks_distance_uniform(std::vector<double> sample);

}  // namespace paneldiag
