#include "pedrisk/standardize.hpp"

#include <cmath>

#include "pedrisk/error.hpp"

namespace pedrisk {

Standardizer Standardizer::fit(const Eigen::MatrixXd& rows) {
  if (rows.rows() < 1) throw DataError("standardize: empty input");
  Standardizer s;
  s.mean = rows.colwise().mean();
  s.scale.resize(rows.cols());
  const double m = static_cast<double>(rows.rows());
  for (Eigen::Index c = 0; c < rows.cols(); ++c) {
    double var = (rows.col(c).array() - s.mean(c)).square().sum() / m;
    double sd = std::sqrt(var);
    s.scale(c) = sd > 1e-12 ? sd : 1.0;
  }
  return s;
}

Eigen::MatrixXd Standardizer::apply(const Eigen::MatrixXd& rows) const {
  if (rows.cols() != mean.size()) throw DataError("standardize: dimension mismatch");
  return (rows.rowwise() - mean.transpose()).array().rowwise() /
         scale.transpose().array();
}

Eigen::VectorXd Standardizer::apply_row(const Eigen::VectorXd& row) const {
  if (row.size() != mean.size()) throw DataError("standardize: dimension mismatch");
  return (row - mean).cwiseQuotient(scale);
}

}  // namespace pedrisk
