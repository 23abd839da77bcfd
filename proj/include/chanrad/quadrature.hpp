#pragma once

#include <vector>

namespace chanrad::quadrature {

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Golub-Welsch from the three-term recurrence of the monic orthogonal
// polynomials: alpha[0..n-1], beta[1..n-1] (beta[0] unused), mu0 = total mass.
GaussRule golub_welsch(const std::vector<double>& alpha, const std::vector<double>& beta, double mu0);

// n-point Gauss-Legendre on [a, b].
GaussRule gauss_legendre(int n, double a, double b);

// n-point Gauss-Hermite, weight exp(-x^2) on the real line.
GaussRule gauss_hermite(int n);

// n-point half-range Gauss-Hermite, weight exp(-x^2) on [0, inf).
// Recurrence coefficients come from a discretized Stieltjes procedure;
// accurate to machine precision up to n = 256.
GaussRule half_range_hermite(int n);

}  // namespace chanrad::quadrature
