#include "mctail/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "mctail/error.hpp"

namespace mctail::linalg {

namespace {

double off_diagonal_norm(const Eigen::MatrixXd& a) {
  double sum = 0.0;
  const int n = static_cast<int>(a.rows());
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) sum += a(p, q) * a(p, q);
  return std::sqrt(2.0 * sum);
}

}  // namespace

SymmetricEigen jacobi_eigen(Eigen::MatrixXd a, double off_tol, int max_sweeps) {
  const int n = static_cast<int>(a.rows());
  if (n == 0 || a.cols() != n) fail(errc::invalid_parameter, "jacobi_eigen: matrix must be square");

  a = 0.5 * (a + a.transpose()).eval();
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);

  const double scale = std::max(1.0, a.norm());
  const double tol = off_tol * scale;

  bool converged = off_diagonal_norm(a) <= tol;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) < 1e-300) continue;

        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (int i = 0; i < n; ++i) {
          const double aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(i, q) = s * aip + c * aiq;
        }
        for (int j = 0; j < n; ++j) {
          const double apj = a(p, j), aqj = a(q, j);
          a(p, j) = c * apj - s * aqj;
          a(q, j) = s * apj + c * aqj;
        }
        for (int i = 0; i < n; ++i) {
          const double vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
      }
    }
    converged = off_diagonal_norm(a) <= tol;
  }
  if (!converged)
    fail(errc::numerical_failure, "jacobi_eigen: no convergence within sweep cap");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) > a(j, j); });

  SymmetricEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (int i = 0; i < n; ++i) {
    out.values(i) = a(order[i], order[i]);
    out.vectors.col(i) = v.col(order[i]);
  }
  return out;
}

Eigen::VectorXd stationary_power(const Eigen::MatrixXd& kernel, double residual_tol,
                                 int max_iters) {
  const int n = static_cast<int>(kernel.rows());
  if (n == 0 || kernel.cols() != n)
    fail(errc::invalid_parameter, "stationary_power: matrix must be square");

  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / n);
  for (int it = 0; it < max_iters; ++it) {
    // x <- x (P + I)/2, renormalized.
    Eigen::VectorXd next = 0.5 * (kernel.transpose() * x + x);
    next /= next.sum();
    x = next;
    const double residual = (kernel.transpose() * x - x).cwiseAbs().maxCoeff();
    if (residual <= residual_tol) return x;
  }
  fail(errc::numerical_failure, "stationary_power: no convergence within iteration cap");
}

}  // namespace mctail::linalg
