#include "chanrad/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "chanrad/error.hpp"

namespace chanrad::quadrature {

GaussRule golub_welsch(const std::vector<double>& alpha, const std::vector<double>& beta, double mu0) {
  const auto n = static_cast<Eigen::Index>(alpha.size());
  if (n < 1 || beta.size() != alpha.size())
    throw Error(Errc::invalid_input, "Golub-Welsch needs matching recurrence arrays");

  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(std::max<Eigen::Index>(n - 1, 0));
  for (Eigen::Index i = 0; i < n; ++i) diag(i) = alpha[i];
  for (Eigen::Index i = 1; i < n; ++i) sub(i - 1) = std::sqrt(beta[i]);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw Error(Errc::invalid_input, "tridiagonal eigenproblem did not converge");

  // Weights from the Christoffel function 1 / sum_k p_k(x)^2 over the
  // orthonormal polynomials. The eigenvector route loses relative accuracy in
  // the small tail weights.
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const long double x = solver.eigenvalues()(i);
    long double p_prev = 0, p = 1.0L / std::sqrt(static_cast<long double>(mu0));
    long double sum = p * p;
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
      const long double b_next = std::sqrt(static_cast<long double>(beta[k + 1]));
      const long double b_here = k == 0 ? 0.0L : std::sqrt(static_cast<long double>(beta[k]));
      const long double p_next = ((x - alpha[k]) * p - b_here * p_prev) / b_next;
      p_prev = p;
      p = p_next;
      sum += p * p;
    }
    rule.nodes[i] = static_cast<double>(x);
    rule.weights[i] = std::isfinite(sum) ? static_cast<double>(1.0L / sum) : 0.0;
  }
  return rule;
}

GaussRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw Error(Errc::invalid_input, "quadrature order must be >= 1");
  std::vector<double> alpha(n, 0.0), beta(n, 0.0);
  for (int k = 1; k < n; ++k) beta[k] = k * k / (4.0 * k * k - 1.0);
  GaussRule rule = golub_welsch(alpha, beta, 2.0);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = mid + half * rule.nodes[i];
    rule.weights[i] *= half;
  }
  return rule;
}

GaussRule gauss_hermite(int n) {
  if (n < 1) throw Error(Errc::invalid_input, "quadrature order must be >= 1");
  std::vector<double> alpha(n, 0.0), beta(n, 0.0);
  for (int k = 1; k < n; ++k) beta[k] = 0.5 * k;
  return golub_welsch(alpha, beta, std::sqrt(std::numbers::pi));
}

GaussRule half_range_hermite(int n) {
  if (n < 1) throw Error(Errc::invalid_input, "quadrature order must be >= 1");

  // Discretize exp(-x^2) on [0, X] with panel Gauss-Legendre; the largest
  // node of an n-point rule sits near sqrt(4n), so X leaves ample tail room.
  const double x_end = std::sqrt(4.0 * n + 2.0) + 10.0;
  constexpr double kPanelWidth = 0.25;
  constexpr int kPanelOrder = 24;
  const int panels = static_cast<int>(std::ceil(x_end / kPanelWidth));
  const GaussRule unit = gauss_legendre(kPanelOrder, 0.0, kPanelWidth);

  std::vector<long double> x, w;
  x.reserve(static_cast<std::size_t>(panels) * kPanelOrder);
  w.reserve(x.capacity());
  for (int p = 0; p < panels; ++p) {
    for (int i = 0; i < kPanelOrder; ++i) {
      const long double xi = p * kPanelWidth + static_cast<long double>(unit.nodes[i]);
      x.push_back(xi);
      w.push_back(unit.weights[i] * std::exp(-xi * xi));
    }
  }

  // Stieltjes on the discrete measure with orthonormal vectors q_k(x_i), in
  // long double so exp(-x^2) stays representable out to x ~ 100.
  const std::size_t m = x.size();
  std::vector<long double> q_prev(m, 0.0L), q(m), r(m);
  const long double mu0 = std::accumulate(w.begin(), w.end(), 0.0L);
  std::fill(q.begin(), q.end(), 1.0L / std::sqrt(mu0));

  std::vector<double> alpha(n, 0.0), beta(n, 0.0);
  for (int k = 0; k < n; ++k) {
    long double a = 0;
    for (std::size_t i = 0; i < m; ++i) a += w[i] * x[i] * q[i] * q[i];
    alpha[k] = static_cast<double>(a);
    if (k + 1 == n) break;
    const long double sqrt_b = k == 0 ? 0.0L : std::sqrt(static_cast<long double>(beta[k]));
    long double norm2 = 0;
    for (std::size_t i = 0; i < m; ++i) {
      r[i] = (x[i] - a) * q[i] - sqrt_b * q_prev[i];
      norm2 += w[i] * r[i] * r[i];
    }
    beta[k + 1] = static_cast<double>(norm2);
    const long double inv = 1.0L / std::sqrt(norm2);
    for (std::size_t i = 0; i < m; ++i) {
      q_prev[i] = q[i];
      q[i] = r[i] * inv;
    }
  }
  return golub_welsch(alpha, beta, 0.5 * std::sqrt(std::numbers::pi));
}

}  // namespace chanrad::quadrature
