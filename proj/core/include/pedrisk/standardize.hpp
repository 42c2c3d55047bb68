#pragma once

#include <Eigen/Core>

namespace pedrisk {

// Per-column zero-mean unit-variance scaling. Columns with (near) zero
// variance keep scale 1 so the transform stays invertible.
struct Standardizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;  // standard deviation, floored

  static Standardizer fit(const Eigen::MatrixXd& rows);

  Eigen::MatrixXd apply(const Eigen::MatrixXd& rows) const;
  Eigen::VectorXd apply_row(const Eigen::VectorXd& row) const;
};

}  // namespace pedrisk
