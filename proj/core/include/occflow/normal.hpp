#pragma once

namespace occflow {

// Standard normal density.
double norm_pdf(double x);

// Density of N(0, s), s > 0.
double norm_pdf_var(double x, double s);

// Standard normal CDF.
double norm_cdf(double x);

// Inverse standard normal CDF, accurate to full double precision on (0,1).
double norm_inv_cdf(double p);

}  // namespace occflow
