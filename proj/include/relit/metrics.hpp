// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "relit/types.hpp"

namespace relit {

struct LossWeights {
  double albedo = 1.0;
  double normal = 2.0;
  double depth = 1.0;
  double roughness = 1.0;
  double reconstruction = 1.0;
  double relighting = 1.0;
};

struct LossComponents {
  double albedo = 0.0;
  double normal = 0.0;
  double depth = 0.0;
  double roughness = 0.0;
  double reconstruction = 0.0;
  double relighting = 0.0;
};

/// Masked mean squared error: sum over masked pixels of the squared
/// channel differences, divided by the number of masked pixels (channels
/// are summed in the numerator, not counted in the normalizer).
/// Throws std::invalid_argument on dimension mismatch or an all-zero mask
/// (the normalizer is the masked pixel count).
double masked_mse(const ColorMap& estimate, const ColorMap& truth, const ScalarMap& mask);
double masked_mse(const ScalarMap& estimate, const ScalarMap& truth, const ScalarMap& mask);

/// Masked MSE over forward-difference gradients of the two maps, one term
/// per direction (x then y), each normalized by its own count of valid
/// pairs. A pair is valid only when both pixels are masked in, so
/// differences straddling the mask boundary are excluded.
double roughness_gradient_loss(const ScalarMap& estimate, const ScalarMap& truth,
                               const ScalarMap& mask);

/// Weighted sum of the component losses. The depth term is counted once.
double total_loss(const LossComponents& components, const LossWeights& weights = {});

/// Mean over masked pixels of acos(est . truth), in degrees.
double mean_angular_error_deg(const NormalMap& estimate, const NormalMap& truth,
                              const ScalarMap& mask);

/// Mean structural similarity, 11x11 Gaussian window (sigma 1.5),
/// K1 = 0.01, K2 = 0.03, dynamic range 1, computed per channel over the
/// fully-covered interior and averaged across channels. Inputs are
/// expected in [0, 1]; throws if the image is smaller than the window.
double ssim(const ColorMap& estimate, const ColorMap& truth);

}  // namespace relit
