#pragma once

#include <Eigen/Core>

#include "pedrisk/kernels.hpp"

namespace pedrisk {

// Kernel principal component analysis. The centered kernel matrix is
// eigendecomposed and projections carry the PCA scaling: the fitted score of
// training row i on component j is sqrt(lambda_j) * u_ij, so a linear kernel
// on centered data reproduces ordinary PCA scores up to component sign.
struct KpcaModel {
  KernelSpec kernel;
  Eigen::MatrixXd training_rows;  // M x N, retained for projection
  Eigen::VectorXd row_means;      // per-row means of the uncentered Gram
  double grand_mean = 0.0;
  Eigen::VectorXd eigenvalues;    // d retained, descending
  Eigen::MatrixXd coeffs;         // M x d projection coefficients
  Eigen::MatrixXd scores;         // M x d fitted training projections
  double explained_variance = 0.0;  // retained / total positive eigenmass

  int dims() const { return static_cast<int>(eigenvalues.size()); }

  // Centered kernel column against the training rows dotted with the stored
  // coefficients. Throws DataError on dimension mismatch.
  Eigen::VectorXd project(const Eigen::VectorXd& s) const;
};

// Keeps exactly d components (rows >= d >= 1).
KpcaModel kpca_fit(const Eigen::MatrixXd& rows, const KernelSpec& spec, int d);

// Keeps the smallest d whose eigenmass reaches var_ratio, floored at
// min_dims.
KpcaModel kpca_fit_auto(const Eigen::MatrixXd& rows, const KernelSpec& spec,
                        double var_ratio = 0.95, int min_dims = 2);

}  // namespace pedrisk
