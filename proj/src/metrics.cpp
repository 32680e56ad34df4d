// SPDX-License-Identifier: Apache-2.0
#include "relit/metrics.hpp"

#include <cmath>

namespace relit {

namespace {

template <int C>
double masked_mse_impl(const Image<double, C>& estimate, const Image<double, C>& truth,
                       const ScalarMap& mask) {
  if (!estimate.same_size(truth) || !estimate.same_size(mask))
    throw std::invalid_argument("masked_mse: dimension mismatch");
  double sum = 0.0;
  Eigen::Index count = 0;
  for (Eigen::Index i = 0; i < mask.pixel_count(); ++i) {
    if (mask.values()(i, 0) == 0.0) continue;
    ++count;
    sum += (estimate.row(i) - truth.row(i)).square().sum();
  }
  if (count == 0)
    throw std::invalid_argument(
        "masked_mse: mask has zero coverage; the normalizer is the masked pixel count");
  return sum / static_cast<double>(count);
}

}  // namespace

double masked_mse(const ColorMap& e, const ColorMap& t, const ScalarMap& m) {
  return masked_mse_impl(e, t, m);
}
double masked_mse(const ScalarMap& e, const ScalarMap& t, const ScalarMap& m) {
  return masked_mse_impl(e, t, m);
}

double roughness_gradient_loss(const ScalarMap& estimate, const ScalarMap& truth,
                               const ScalarMap& mask) {
  if (!estimate.same_size(truth) || !estimate.same_size(mask))
    throw std::invalid_argument("roughness_gradient_loss: dimension mismatch");
  const int w = mask.width();
  const int h = mask.height();

  // dx = 1, dy = 0 then dx = 0, dy = 1.
  const auto directional = [&](int dx, int dy, double& sum, Eigen::Index& count) {
    for (int y = 0; y + dy < h; ++y) {
      for (int x = 0; x + dx < w; ++x) {
        if (mask.at(x, y) == 0.0 || mask.at(x + dx, y + dy) == 0.0) continue;
        const double ge = estimate.at(x + dx, y + dy) - estimate.at(x, y);
        const double gt = truth.at(x + dx, y + dy) - truth.at(x, y);
        sum += (ge - gt) * (ge - gt);
        ++count;
      }
    }
  };

  double sum_x = 0.0, sum_y = 0.0;
  Eigen::Index count_x = 0, count_y = 0;
  directional(1, 0, sum_x, count_x);
  directional(0, 1, sum_y, count_y);
  if (count_x + count_y == 0)
    throw std::invalid_argument("roughness_gradient_loss: mask admits no gradient pairs");
  double loss = 0.0;
  if (count_x > 0) loss += sum_x / static_cast<double>(count_x);
  if (count_y > 0) loss += sum_y / static_cast<double>(count_y);
  return loss;
}

double total_loss(const LossComponents& c, const LossWeights& w) {
  return w.albedo * c.albedo + w.normal * c.normal + w.depth * c.depth +
         w.roughness * c.roughness + w.reconstruction * c.reconstruction +
         w.relighting * c.relighting;
}

double mean_angular_error_deg(const NormalMap& estimate, const NormalMap& truth,
                              const ScalarMap& mask) {
  if (!estimate.same_size(truth) || !estimate.same_size(mask))
    throw std::invalid_argument("mean_angular_error: dimension mismatch");
  double sum = 0.0;
  Eigen::Index count = 0;
  for (Eigen::Index i = 0; i < mask.pixel_count(); ++i) {
    if (mask.values()(i, 0) == 0.0) continue;
    ++count;
    const double d = std::clamp((estimate.row(i) * truth.row(i)).sum(), -1.0, 1.0);
    sum += std::acos(d);
  }
  if (count == 0) throw std::invalid_argument("mean_angular_error: mask has zero coverage");
  return sum / static_cast<double>(count) * (180.0 / EIGEN_PI);
}

namespace {

constexpr int kSsimWindow = 11;
constexpr double kSsimSigma = 1.5;

Eigen::Matrix<double, kSsimWindow, 1> gaussian_kernel() {
  Eigen::Matrix<double, kSsimWindow, 1> k;
  const double c = (kSsimWindow - 1) / 2.0;
  for (int i = 0; i < kSsimWindow; ++i)
    k[i] = std::exp(-(i - c) * (i - c) / (2.0 * kSsimSigma * kSsimSigma));
  return k / k.sum();
}

// Separable valid-region Gaussian filtering of one channel.
Eigen::ArrayXXd filter_valid(const Eigen::ArrayXXd& img) {
  static const auto kernel = gaussian_kernel();
  const Eigen::Index h = img.rows(), w = img.cols();
  Eigen::ArrayXXd horiz(h, w - kSsimWindow + 1);
  for (Eigen::Index y = 0; y < h; ++y)
    for (Eigen::Index x = 0; x + kSsimWindow <= w; ++x)
      horiz(y, x) = (img.row(y).segment(x, kSsimWindow).transpose() * kernel.array()).sum();
  Eigen::ArrayXXd out(h - kSsimWindow + 1, horiz.cols());
  for (Eigen::Index x = 0; x < horiz.cols(); ++x)
    for (Eigen::Index y = 0; y + kSsimWindow <= h; ++y)
      out(y, x) = (horiz.col(x).segment(y, kSsimWindow) * kernel.array()).sum();
  return out;
}

}  // namespace

double ssim(const ColorMap& estimate, const ColorMap& truth) {
  if (!estimate.same_size(truth)) throw std::invalid_argument("ssim: dimension mismatch");
  const int w = estimate.width(), h = estimate.height();
  if (w < kSsimWindow || h < kSsimWindow)
    throw std::invalid_argument("ssim: image smaller than the 11x11 window");

  constexpr double kC1 = 0.01 * 0.01;  // (K1 * L)^2, L = 1
  constexpr double kC2 = 0.03 * 0.03;

  double channel_mean_sum = 0.0;
  for (int c = 0; c < 3; ++c) {
    Eigen::ArrayXXd a(h, w), b(h, w);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        a(y, x) = estimate.values()(estimate.index(x, y), c);
        b(y, x) = truth.values()(truth.index(x, y), c);
      }
    const Eigen::ArrayXXd mu_a = filter_valid(a);
    const Eigen::ArrayXXd mu_b = filter_valid(b);
    const Eigen::ArrayXXd sigma_a = filter_valid(a * a) - mu_a * mu_a;
    const Eigen::ArrayXXd sigma_b = filter_valid(b * b) - mu_b * mu_b;
    const Eigen::ArrayXXd sigma_ab = filter_valid(a * b) - mu_a * mu_b;
    const Eigen::ArrayXXd num =
        (2.0 * mu_a * mu_b + kC1) * (2.0 * sigma_ab + kC2);
    const Eigen::ArrayXXd den =
        (mu_a.square() + mu_b.square() + kC1) * (sigma_a + sigma_b + kC2);
    channel_mean_sum += (num / den).mean();
  }
  return channel_mean_sum / 3.0;
}

}  // namespace relit
