#pragma once

#include <vector>

#include "pedrisk/types.hpp"

namespace pedrisk {

// Locally weighted scatterplot smoothing over the frame index, tricube
// weights, local linear fit, optional bisquare robustness iterations.
// Degree 1 reproduces affine-in-time series exactly, so straight-line
// motion passes through unchanged.
//
// span is the fraction of the series used per local fit, in (0, 1];
// span * length must cover at least 2 points. Throws DataError otherwise
// or when the series is shorter than 3 samples.
std::vector<double> lowess_smooth_series(const std::vector<double>& values,
                                         double span, int robust_iters = 1);

// Applies lowess_smooth_series independently to the x and y coordinates.
PedestrianTrack lowess_smooth(const PedestrianTrack& track, double span = 0.3,
                              int robust_iters = 1);

}  // namespace pedrisk
