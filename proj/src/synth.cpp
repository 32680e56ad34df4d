// SPDX-License-Identifier: Apache-2.0
#include "relit/synth.hpp"

#include <cmath>

#include "relit/rng.hpp"

namespace relit {

Camera default_camera(int resolution) {
  Camera cam;
  cam.focal_px = resolution;
  cam.cx = resolution / 2;
  cam.cy = resolution / 2;
  cam.width = resolution;
  cam.height = resolution;
  return cam;
}

namespace {

// Smooth seeded field in [0, 1]: two low-frequency sine products.
struct SmoothField {
  double kx1, ky1, p1, kx2, ky2, p2;

  SmoothField(std::uint64_t seed, std::uint64_t salt) {
    const auto u = [&](std::uint64_t i) { return uniform01(seed, salt * 131 + i); };
    const double two_pi = 2.0 * EIGEN_PI;
    kx1 = two_pi * (0.5 + 1.5 * u(0));
    ky1 = two_pi * (0.5 + 1.5 * u(1));
    p1 = two_pi * u(2);
    kx2 = two_pi * (1.0 + 2.0 * u(3));
    ky2 = two_pi * (1.0 + 2.0 * u(4));
    p2 = two_pi * u(5);
  }

  // s, t in [0, 1] across the image.
  double operator()(double s, double t) const {
    const double a = std::sin(kx1 * s + p1) * std::sin(ky1 * t + p1);
    const double b = std::sin(kx2 * s + ky2 * t + p2);
    return 0.5 + 0.3 * a + 0.2 * b;
  }
};

struct Bump {
  double cu, cv;     // center, pixels
  double sigma;      // radius, pixels
  double amplitude;  // radial-depth offset, scene units
};

std::vector<Bump> make_bumps(std::uint64_t seed, int res, double center_depth) {
  std::vector<Bump> bumps;
  for (int k = 0; k < 5; ++k) {
    const auto u = [&](std::uint64_t i) {
      return uniform01(seed, 1000 + 10 * static_cast<std::uint64_t>(k) + i);
    };
    Bump b;
    b.cu = res * (0.2 + 0.6 * u(0));
    b.cv = res * (0.2 + 0.6 * u(1));
    b.sigma = res * (0.08 + 0.08 * u(2));
    b.amplitude = center_depth * (0.02 + 0.03 * u(3)) * (k % 2 == 0 ? 1.0 : -1.0);
    bumps.push_back(b);
  }
  return bumps;
}

// Radial depth t(u, v) of the bump surface and its pixel-space partials.
void bump_depth(const std::vector<Bump>& bumps, double center_depth, double u,
                double v, double& t, double& t_u, double& t_v) {
  t = center_depth;
  t_u = 0.0;
  t_v = 0.0;
  for (const Bump& b : bumps) {
    const double du = u - b.cu;
    const double dv = v - b.cv;
    const double g = b.amplitude * std::exp(-(du * du + dv * dv) / (2.0 * b.sigma * b.sigma));
    t -= g;
    t_u += g * du / (b.sigma * b.sigma);
    t_v += g * dv / (b.sigma * b.sigma);
  }
}

// Exact normal of the surface P(u,v) = t(u,v) * dir(u,v), returned in the
// stored convention (negated camera-facing normal, z <= 0 in practice).
Vec3 parametric_normal(const Camera& cam, double u, double v, double t, double t_u,
                       double t_v) {
  const Vec3 g(u - cam.cx, v - cam.cy, -cam.focal_px);
  const double len = g.norm();
  const Vec3 omega = g / len;
  const Vec3 omega_u = Vec3::UnitX() / len - g * (g.x() / (len * len * len));
  const Vec3 omega_v = Vec3::UnitY() / len - g * (g.y() / (len * len * len));
  const Vec3 p_u = t_u * omega + t * omega_u;
  const Vec3 p_v = t_v * omega + t * omega_v;
  Vec3 n = p_u.cross(p_v).normalized();
  if (n.dot(omega) < 0.0) n = -n;  // stored convention points along the ray
  return n;
}

}  // namespace

SceneBundle generate(const PresetSpec& spec, const Camera& camera) {
  if (spec.resolution < 16)
    throw std::invalid_argument("generate: resolution must be >= 16");
  if (spec.roughness_min < kMinRoughness || spec.roughness_max > 1.0 ||
      spec.roughness_min > spec.roughness_max)
    throw std::invalid_argument("generate: roughness range outside [r_min, 1]");
  if (spec.albedo_mode == AlbedoMode::kConstant &&
      ((spec.albedo < 0.0).any() || (spec.albedo > 1.0).any()))
    throw std::invalid_argument("generate: constant albedo outside [0, 1]");

  const int w = camera.width;
  const int h = camera.height;
  SceneBundle b;
  b.camera = camera;
  b.albedo = ColorMap(w, h);
  b.normal = NormalMap::constant(w, h, NormalMap::Pixel(0.0, 0.0, -1.0));
  b.depth = ScalarMap::constant(w, h, spec.center_depth);
  b.roughness = ScalarMap::constant(w, h, spec.roughness_min);
  b.mask = ScalarMap(w, h);
  b.lights = {PointLight{Vec3::Zero(), Rgb::Ones()}};

  const SmoothField rough_field(spec.seed, 7);
  const SmoothField albedo_field_r(spec.seed, 11);
  const SmoothField albedo_field_g(spec.seed, 13);
  const SmoothField albedo_field_b(spec.seed, 17);
  const auto albedo_at = [&](double s, double t) -> Rgb {
    if (spec.albedo_mode == AlbedoMode::kConstant) return spec.albedo;
    return Rgb(0.15 + 0.75 * clamp01(albedo_field_r(s, t)),
               0.15 + 0.75 * clamp01(albedo_field_g(s, t)),
               0.15 + 0.75 * clamp01(albedo_field_b(s, t)));
  };
  const auto roughness_at = [&](double s, double t) {
    if (spec.roughness_min == spec.roughness_max) return spec.roughness_min;
    return spec.roughness_min +
           (spec.roughness_max - spec.roughness_min) * clamp01(rough_field(s, t));
  };

  const Vec3 center(0.0, 0.0, -spec.center_depth);
  const double radius = 0.32 * spec.center_depth;
  const std::vector<Bump> bumps = make_bumps(spec.seed, spec.resolution, spec.center_depth);

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double s = static_cast<double>(x) / (w - 1);
      const double t01 = static_cast<double>(y) / (h - 1);
      switch (spec.preset) {
        case Preset::kSphere: {
          const Vec3 omega = camera.ray_dir(x, y);
          const double oc = omega.dot(center);
          const double disc = oc * oc - (center.squaredNorm() - radius * radius);
          if (disc < 0.0) continue;  // ray misses: background pixel
          const double t = oc - std::sqrt(disc);
          const Vec3 p = t * omega;
          b.depth.at(x, y) = t;
          b.normal.row(x, y) = (-(p - center) / radius).transpose().array();
          break;
        }
        case Preset::kBumpField: {
          double t, t_u, t_v;
          bump_depth(bumps, spec.center_depth, x, y, t, t_u, t_v);
          b.depth.at(x, y) = t;
          b.normal.row(x, y) =
              parametric_normal(camera, x, y, t, t_u, t_v).transpose().array();
          break;
        }
        case Preset::kTexturedPlane: {
          // Plane z = -center_depth; radial distance along the pixel ray.
          const Vec3 omega = camera.ray_dir(x, y);
          b.depth.at(x, y) = spec.center_depth / -omega.z();
          break;
        }
      }
      b.mask.at(x, y) = 1.0;
      b.albedo.row(x, y) = albedo_at(s, t01).transpose();
      b.roughness.at(x, y) = roughness_at(s, t01);
    }
  }
  return b;
}

SceneBundle generate(const PresetSpec& spec) {
  return generate(spec, default_camera(spec.resolution));
}

std::vector<ColorMap> perturb_images(const std::vector<ColorMap>& images,
                                     double sigma_fraction, std::uint64_t seed) {
  if (sigma_fraction < 0.0)
    throw std::invalid_argument("perturb_images: sigma_fraction must be >= 0");
  double global_max = 0.0;
  for (const ColorMap& img : images)
    if (img.pixel_count() > 0) global_max = std::max(global_max, img.values().maxCoeff());
  const double sigma = sigma_fraction * global_max;

  std::vector<ColorMap> out;
  out.reserve(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) {
    ColorMap noisy = images[i];
    if (sigma > 0.0) {
      auto& vals = noisy.values();
      const std::uint64_t base = i * static_cast<std::uint64_t>(vals.size());
      for (Eigen::Index p = 0; p < vals.rows(); ++p)
        for (int c = 0; c < 3; ++c)
          vals(p, c) = std::max(
              0.0, vals(p, c) + sigma * gaussian(seed, base + 3 * p + c));
    }
    out.push_back(std::move(noisy));
  }
  return out;
}

}  // namespace relit
