#pragma once

#include <Eigen/Dense>
#include <vector>

namespace cubic::detail {

// Lawson-Hanson active set method for min ||Ax - b|| subject to x >= 0
inline Eigen::VectorXd nnls_unit_columns(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  const int n = static_cast<int>(A.cols());
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  if (n == 0) return x;
  std::vector<bool> passive(n, false);
  const double tol = 1e-13 * (1 + A.norm() * b.norm());
  for (int outer = 0; outer < 3 * n + 10; ++outer) {
    const Eigen::VectorXd grad = A.transpose() * (b - A * x);
    int best = -1;
    double gmax = tol;
    for (int j = 0; j < n; ++j)
      if (!passive[j] && grad[j] > gmax) gmax = grad[j], best = j;
    if (best < 0) break;
    passive[best] = true;
    for (int inner = 0; inner < 3 * n + 10; ++inner) {
      std::vector<int> idx;
      for (int j = 0; j < n; ++j)
        if (passive[j]) idx.push_back(j);
      Eigen::MatrixXd Ap(A.rows(), idx.size());
      for (size_t k = 0; k < idx.size(); ++k) Ap.col(k) = A.col(idx[k]);
      const Eigen::VectorXd zp = Ap.colPivHouseholderQr().solve(b);
      Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
      for (size_t k = 0; k < idx.size(); ++k) z[idx[k]] = zp[k];
      bool feasible = true;
      for (int j : idx) feasible &= z[j] > 0;
      if (feasible) {
        x = z;
        break;
      }
      double alpha = 1;
      for (int j : idx)
        if (z[j] <= 0) alpha = std::min(alpha, x[j] / (x[j] - z[j]));
      x += alpha * (z - x);
      for (int j : idx)
        if (x[j] <= 1e-15) {
          x[j] = 0;
          passive[j] = false;
        }
    }
  }
  return x.cwiseMax(0.0);
}

// columns are rescaled to unit norm first; otherwise the pivoted QR treats a short column
// as rank deficient when the atoms differ widely in size
inline Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  Eigen::VectorXd cn = A.colwise().norm().transpose();
  for (int j = 0; j < cn.size(); ++j)
    if (cn[j] == 0) cn[j] = 1;
  return nnls_unit_columns(A * cn.cwiseInverse().asDiagonal(), b).cwiseQuotient(cn);
}

}  // namespace cubic::detail
