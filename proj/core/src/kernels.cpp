#include "pedrisk/kernels.hpp"

#include <cmath>

#include "pedrisk/error.hpp"

namespace pedrisk {

namespace {

void validate(const KernelSpec& spec) {
  switch (spec.kind) {
    case KernelKind::Linear:
      return;
    case KernelKind::Polynomial:
      if (spec.degree != 2 && spec.degree != 3) {
        throw DataError("kernel: polynomial degree must be 2 or 3");
      }
      return;
    case KernelKind::Gaussian:
      if (!(spec.gamma > 0.0)) throw DataError("kernel: gaussian gamma must be > 0");
      return;
  }
  throw DataError("kernel: unknown kind");
}

}  // namespace

double kernel_eval(const KernelSpec& spec, const Eigen::VectorXd& a,
                   const Eigen::VectorXd& b) {
  validate(spec);
  if (a.size() != b.size()) throw DataError("kernel: dimension mismatch");
  switch (spec.kind) {
    case KernelKind::Linear:
      return a.dot(b);
    case KernelKind::Polynomial: {
      double base = a.dot(b) + spec.coef0;
      return spec.degree == 2 ? base * base : base * base * base;
    }
    case KernelKind::Gaussian:
      return std::exp(-spec.gamma * (a - b).squaredNorm());
  }
  throw DataError("kernel: unknown kind");
}

Eigen::MatrixXd kernel_matrix(const KernelSpec& spec, const Eigen::MatrixXd& rows) {
  validate(spec);
  const Eigen::Index m = rows.rows();
  Eigen::MatrixXd k(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      double v = kernel_eval(spec, rows.row(i), rows.row(j));
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

Eigen::VectorXd kernel_column(const KernelSpec& spec, const Eigen::MatrixXd& rows,
                              const Eigen::VectorXd& x) {
  validate(spec);
  if (rows.cols() != x.size()) throw DataError("kernel: dimension mismatch");
  Eigen::VectorXd col(rows.rows());
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    col(i) = kernel_eval(spec, rows.row(i), x);
  }
  return col;
}

double default_gamma(const Eigen::MatrixXd& rows) {
  if (rows.rows() < 2 || rows.cols() < 1) return 1.0;
  const double m = static_cast<double>(rows.rows());
  double var_sum = 0.0;
  for (Eigen::Index c = 0; c < rows.cols(); ++c) {
    double mean = rows.col(c).mean();
    var_sum += (rows.col(c).array() - mean).square().sum() / m;
  }
  if (!(var_sum > 0.0)) return 1.0;
  // 1 / (dims * total feature variance): for standardized N-dim inputs this
  // is 1 / N^2, mild enough that the kernel spectrum stays low-dimensional.
  return 1.0 / (static_cast<double>(rows.cols()) * var_sum);
}

std::string to_string(const KernelSpec& spec) {
  switch (spec.kind) {
    case KernelKind::Linear:
      return "linear";
    case KernelKind::Polynomial:
      return spec.degree == 2 ? "quadratic" : "cubic";
    case KernelKind::Gaussian:
      return "gaussian";
  }
  return "unknown";
}

}  // namespace pedrisk
