#include "pedrisk/kpca.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "pedrisk/error.hpp"

namespace pedrisk {

namespace {

struct EigenDecomposition {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXd vectors;  // columns matching values
};

EigenDecomposition centered_kernel_eigs(const Eigen::MatrixXd& rows,
                                        const KernelSpec& spec,
                                        Eigen::VectorXd& row_means,
                                        double& grand_mean) {
  const Eigen::Index m = rows.rows();
  Eigen::MatrixXd k = kernel_matrix(spec, rows);
  row_means = k.rowwise().mean();
  grand_mean = row_means.mean();

  // Double centering: K~ = K - 1K - K1 + 1K1.
  Eigen::MatrixXd centered = k;
  centered.colwise() -= row_means;
  centered.rowwise() -= row_means.transpose();
  centered.array() += grand_mean;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(centered);
  if (solver.info() != Eigen::Success) {
    throw NumericError("kpca: eigensolver failed to converge");
  }

  EigenDecomposition out;
  out.values.resize(m);
  out.vectors.resize(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {  // ascending -> descending
    out.values(j) = solver.eigenvalues()(m - 1 - j);
    out.vectors.col(j) = solver.eigenvectors().col(m - 1 - j);
  }

  const double lead = std::max(out.values(0), 0.0);
  if (out.values(m - 1) < -1e-8 * std::max(lead, 1.0)) {
    throw NumericError("kpca: centered kernel matrix is not PSD (min eigenvalue " +
                       std::to_string(out.values(m - 1)) + ")");
  }
  return out;
}

KpcaModel build_model(const Eigen::MatrixXd& rows, const KernelSpec& spec,
                      const EigenDecomposition& eig, Eigen::VectorXd row_means,
                      double grand_mean, int d) {
  const Eigen::Index m = rows.rows();
  KpcaModel model;
  model.kernel = spec;
  model.training_rows = rows;
  model.row_means = std::move(row_means);
  model.grand_mean = grand_mean;
  model.eigenvalues = eig.values.head(d).cwiseMax(0.0);
  model.coeffs.resize(m, d);
  model.scores.resize(m, d);

  const double tol = 1e-12 * std::max(1.0, eig.values(0));
  for (int j = 0; j < d; ++j) {
    double lambda = model.eigenvalues(j);
    if (lambda > tol) {
      double inv_sqrt = 1.0 / std::sqrt(lambda);
      model.coeffs.col(j) = eig.vectors.col(j) * inv_sqrt;
      model.scores.col(j) = eig.vectors.col(j) * std::sqrt(lambda);
    } else {
      // Zero-variance component: carries no signal, projects to 0.
      model.coeffs.col(j).setZero();
      model.scores.col(j).setZero();
    }
  }

  double total = 0.0, kept = 0.0;
  for (Eigen::Index j = 0; j < eig.values.size(); ++j) {
    total += std::max(eig.values(j), 0.0);
  }
  for (int j = 0; j < d; ++j) kept += model.eigenvalues(j);
  model.explained_variance = total > 0.0 ? kept / total : 1.0;
  return model;
}

}  // namespace

KpcaModel kpca_fit(const Eigen::MatrixXd& rows, const KernelSpec& spec, int d) {
  if (d < 1) throw DataError("kpca_fit: retained dimension must be >= 1");
  if (rows.rows() < d) throw DataError("kpca_fit: fewer rows than retained dimensions");
  Eigen::VectorXd row_means;
  double grand_mean = 0.0;
  auto eig = centered_kernel_eigs(rows, spec, row_means, grand_mean);
  return build_model(rows, spec, eig, std::move(row_means), grand_mean, d);
}

KpcaModel kpca_fit_auto(const Eigen::MatrixXd& rows, const KernelSpec& spec,
                        double var_ratio, int min_dims) {
  if (!(var_ratio > 0.0) || var_ratio > 1.0) {
    throw DataError("kpca_fit_auto: var_ratio must lie in (0, 1]");
  }
  if (rows.rows() < 1) throw DataError("kpca_fit_auto: empty input");
  Eigen::VectorXd row_means;
  double grand_mean = 0.0;
  auto eig = centered_kernel_eigs(rows, spec, row_means, grand_mean);

  double total = 0.0;
  for (Eigen::Index j = 0; j < eig.values.size(); ++j) {
    total += std::max(eig.values(j), 0.0);
  }
  int d = 1;
  if (total > 0.0) {
    double acc = 0.0;
    for (d = 0; d < eig.values.size(); ) {
      acc += std::max(eig.values(d), 0.0);
      ++d;
      if (acc >= var_ratio * total) break;
    }
  }
  d = std::min<int>(std::max(d, min_dims), static_cast<int>(rows.rows()));
  return build_model(rows, spec, eig, std::move(row_means), grand_mean, d);
}

Eigen::VectorXd KpcaModel::project(const Eigen::VectorXd& s) const {
  if (s.size() != training_rows.cols()) {
    throw DataError("kpca project: dimension mismatch");
  }
  Eigen::VectorXd k_x = kernel_column(kernel, training_rows, s);
  const double k_mean = k_x.mean();
  Eigen::VectorXd centered =
      k_x.array() - k_mean - row_means.array() + grand_mean;
  return coeffs.transpose() * centered;
}

}  // namespace pedrisk
