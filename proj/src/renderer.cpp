// SPDX-License-Identifier: Apache-2.0
#include "relit/renderer.hpp"

#include <cmath>

#include "relit/rng.hpp"

namespace relit {

Eigen::Matrix<double, 9, 1> sh_basis9(const Vec3& n) {
  const double x = n.x(), y = n.y(), z = n.z();
  Eigen::Matrix<double, 9, 1> sh;
  sh[0] = 0.282095;                       // Y00
  sh[1] = 0.488603 * y;                   // Y1-1
  sh[2] = 0.488603 * z;                   // Y10
  sh[3] = 0.488603 * x;                   // Y11
  sh[4] = 1.092548 * x * y;               // Y2-2
  sh[5] = 1.092548 * y * z;               // Y2-1
  sh[6] = 0.315392 * (3.0 * z * z - 1.0); // Y20
  sh[7] = 1.092548 * x * z;               // Y21
  sh[8] = 0.546274 * (x * x - y * y);     // Y22
  return sh;
}

Rgb shade_sh(const Vec3& n, const Eigen::Matrix<double, 9, 3>& coeffs,
             bool clamp_negative) {
  // Clamped-cosine convolution weights per band (Ramamoorthi-Hanrahan).
  Eigen::Matrix<double, 9, 1> w = sh_basis9(n);
  w[0] *= EIGEN_PI;
  w.segment<3>(1) *= 2.0 * EIGEN_PI / 3.0;
  w.segment<5>(4) *= EIGEN_PI / 4.0;
  Rgb e = (coeffs.transpose() * w).array();
  if (clamp_negative) e = e.max(0.0);
  return e;
}

Rgb shade_point(const BrdfParams& params, const Vec3& n_stored, const Vec3& surface,
                double depth, const Light& light, const RenderConfig& config,
                RenderStats* stats) {
  const Vec3 n = -n_stored;  // maps store z <= 0; shading wants camera-facing
  if (const auto* env = std::get_if<EnvLight>(&light)) {
    return params.albedo / EIGEN_PI * shade_sh(n, env->coefficients, config.clamp_negative);
  }

  const auto& pt = std::get<PointLight>(light);
  const Vec3 to_light = pt.position - surface;
  double d = to_light.norm();
  if (d < 1e-6) {
    if (stats) ++stats->coincident_light_pixels;
    d = 1e-6;
  }
  const Vec3 l = to_light / d;
  const Vec3 v = -surface.normalized();

  const double n_dot_l = n.dot(l);
  if (n_dot_l <= 0.0 || n.dot(v) <= 0.0) return Rgb::Zero();

  const double fall_d = config.falloff == Falloff::kInverseSquareDepthMap ? depth : d;
  const double falloff = 1.0 / (fall_d * fall_d);
  const double cosine = config.cosine_term ? n_dot_l : 1.0;
  const Rgb f = eval_brdf(params, ShadingGeometry{n, l, v, (l + v).normalized()});
  Rgb out = pt.intensity * (falloff * cosine * f);
  if (config.clamp_negative) out = out.max(0.0);
  return out;
}

namespace {

ColorMap render_impl(const SceneBundle& bundle, const std::vector<Light>& lights,
                     const RenderConfig& config, RenderStats* stats) {
  const int w = bundle.mask.width();
  const int h = bundle.mask.height();
  ColorMap out(w, h);
  std::int64_t coincident = 0;

#pragma omp parallel for schedule(dynamic, 8) reduction(+ : coincident)
  for (int y = 0; y < h; ++y) {
    RenderStats local;
    for (int x = 0; x < w; ++x) {
      if (bundle.mask.at(x, y) != 1.0) continue;
      const double depth = bundle.depth.at(x, y);
      const Vec3 surface = bundle.camera.unproject(x, y, depth);
      const Vec3 n_stored = bundle.normal.row(x, y).matrix().transpose();
      BrdfParams params;
      params.albedo = bundle.albedo.row(x, y).transpose();
      params.roughness = bundle.roughness.at(x, y);
      params.fresnel_f0 = config.fresnel_f0;
      params.nh_exponent = config.nh_exponent;
      params.fresnel_variant = config.fresnel_variant;

      Rgb acc = Rgb::Zero();
      for (const Light& light : lights)
        acc += shade_point(params, n_stored, surface, depth, light, config, &local);
      out.row(x, y) = acc.transpose();
    }
    coincident += local.coincident_light_pixels;
  }
  if (stats) stats->coincident_light_pixels += coincident;
  return out;
}

}  // namespace

ColorMap render_direct(const SceneBundle& bundle, const Light& light,
                       const RenderConfig& config, RenderStats* stats) {
  return render_impl(bundle, {light}, config, stats);
}

ColorMap render_lights(const SceneBundle& bundle, const std::vector<Light>& lights,
                       const RenderConfig& config, RenderStats* stats) {
  return render_impl(bundle, lights, config, stats);
}

std::vector<ColorMap> relight_stack(const SceneBundle& bundle,
                                    const std::vector<Light>& lights,
                                    const RenderConfig& config, RenderStats* stats) {
  if (lights.empty())
    throw std::invalid_argument("relight_stack: light list must not be empty");
  std::vector<ColorMap> images;
  images.reserve(lights.size());
  for (const Light& light : lights)
    images.push_back(render_direct(bundle, light, config, stats));
  return images;
}

ColorMap compose_global(const ColorMap& direct, const ColorMap& residual,
                        bool clamp_negative) {
  if (!direct.same_size(residual))
    throw std::invalid_argument("compose_global: dimension mismatch");
  ColorMap out(direct.width(), direct.height());
  out.values() = direct.values() + residual.values();
  if (clamp_negative) out.values() = out.values().max(0.0);
  return out;
}

ColorMap decompose_global(const ColorMap& full, const ColorMap& direct) {
  if (!full.same_size(direct))
    throw std::invalid_argument("decompose_global: dimension mismatch");
  ColorMap out(full.width(), full.height());
  out.values() = full.values() - direct.values();
  return out;
}

std::vector<Vec3> sample_frontal_hemisphere(int count, double radius,
                                            std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("sample_frontal_hemisphere: count >= 1");
  if (!(radius > 0.0))
    throw std::invalid_argument("sample_frontal_hemisphere: radius must be positive");
  const Vec3 center(0.0, 0.0, -1.0);
  std::vector<Vec3> positions;
  positions.reserve(count);
  for (int i = 0; i < count; ++i) {
    // Area-uniform on the z >= 0 hemisphere: z ~ U[0,1), phi ~ U[0,2pi).
    const double z = uniform01(seed, 2 * static_cast<std::uint64_t>(i));
    const double phi = 2.0 * EIGEN_PI * uniform01(seed, 2 * static_cast<std::uint64_t>(i) + 1);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    positions.push_back(center + radius * Vec3(r * std::cos(phi), r * std::sin(phi), z));
  }
  return positions;
}

}  // namespace relit
