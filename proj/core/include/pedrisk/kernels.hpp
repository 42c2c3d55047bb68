#pragma once

#include <Eigen/Core>
#include <string>

namespace pedrisk {

enum class KernelKind { Linear, Polynomial, Gaussian };

// Kernel specification shared by KPCA and the SVM classifiers.
//   Linear:      k(a,b) = a.b
//   Polynomial:  k(a,b) = (a.b + coef0)^degree, degree 2 or 3
//   Gaussian:    k(a,b) = exp(-gamma * |a-b|^2), gamma > 0
struct KernelSpec {
  KernelKind kind = KernelKind::Gaussian;
  int degree = 2;
  double coef0 = 1.0;
  double gamma = 1.0;

  static KernelSpec linear() { return {KernelKind::Linear, 0, 0.0, 0.0}; }
  static KernelSpec polynomial(int degree, double coef0 = 1.0) {
    return {KernelKind::Polynomial, degree, coef0, 0.0};
  }
  static KernelSpec gaussian(double gamma) {
    return {KernelKind::Gaussian, 0, 0.0, gamma};
  }
};

// Throws DataError on mismatched dimensions or invalid parameters.
double kernel_eval(const KernelSpec& spec, const Eigen::VectorXd& a,
                   const Eigen::VectorXd& b);

// Full Gram matrix K[i,j] = k(rows_i, rows_j); symmetric by construction.
Eigen::MatrixXd kernel_matrix(const KernelSpec& spec, const Eigen::MatrixXd& rows);

// Kernel column against a set of rows: out[i] = k(rows_i, x).
Eigen::VectorXd kernel_column(const KernelSpec& spec, const Eigen::MatrixXd& rows,
                              const Eigen::VectorXd& x);

// Default bandwidth 1 / (dims * mean per-column variance); 1 when the data
// is degenerate. Used when a config leaves gamma at 0.
double default_gamma(const Eigen::MatrixXd& rows);

std::string to_string(const KernelSpec& spec);

}  // namespace pedrisk
