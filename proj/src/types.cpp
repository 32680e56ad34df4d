// SPDX-License-Identifier: Apache-2.0
#include "relit/types.hpp"

#include <cmath>

namespace relit {

Vec3 Camera::unproject(double u, double v, double depth) const {
  if (!(depth > 0.0))
    throw std::domain_error("Camera::unproject: depth must be positive");
  if (u < -0.5 || u > width - 0.5 || v < -0.5 || v > height - 0.5)
    throw std::invalid_argument("Camera::unproject: pixel outside image");
  return depth * ray_dir(u, v);
}

namespace {

void check_finite(const char* name, const Eigen::Ref<const Eigen::ArrayXXd>& values,
                  int width, std::vector<Violation>& out) {
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    if (!values.row(i).isFinite().all()) {
      out.push_back({name, static_cast<int>(i % width), static_cast<int>(i / width),
                     "non-finite value"});
    }
  }
}

}  // namespace

std::vector<Violation> validate_bundle(const SceneBundle& b) {
  std::vector<Violation> out;
  const int w = b.camera.width;
  const int h = b.camera.height;

  if (!(b.camera.focal_px > 0.0))
    out.push_back({"camera", -1, -1, "focal length must be positive"});
  if (b.camera.cx < 0 || b.camera.cx > w || b.camera.cy < 0 || b.camera.cy > h)
    out.push_back({"camera", -1, -1, "principal point outside image bounds"});

  const bool dims_ok = b.albedo.same_size(w, h) && b.normal.same_size(w, h) &&
                       b.depth.same_size(w, h) && b.roughness.same_size(w, h) &&
                       b.mask.same_size(w, h);
  if (!dims_ok) {
    out.push_back({"bundle", -1, -1, "map dimensions do not all match the camera"});
    return out;  // per-pixel checks would be meaningless
  }

  check_finite("albedo", b.albedo.values(), w, out);
  check_finite("normal", b.normal.values(), w, out);
  check_finite("depth", b.depth.values(), w, out);
  check_finite("roughness", b.roughness.values(), w, out);
  check_finite("mask", b.mask.values(), w, out);
  if (!out.empty()) return out;  // range checks below assume finite data

  const Eigen::Index n = b.mask.pixel_count();
  for (Eigen::Index i = 0; i < n; ++i) {
    const int x = static_cast<int>(i % w);
    const int y = static_cast<int>(i / w);

    const double m = b.mask.values()(i, 0);
    if (m != 0.0 && m != 1.0)
      out.push_back({"mask", x, y, "mask value not in {0, 1}"});

    const auto a = b.albedo.values().row(i);
    if ((a < 0.0).any() || (a > 1.0).any())
      out.push_back({"albedo", x, y, "albedo channel outside [0, 1]"});

    const double r = b.roughness.values()(i, 0);
    if (r < kMinRoughness || r > 1.0)
      out.push_back({"roughness", x, y, "roughness outside [r_min, 1]"});

    const double d = b.depth.values()(i, 0);
    if (!(d > 0.0)) out.push_back({"depth", x, y, "depth not strictly positive"});

    if (m == 1.0) {
      const Vec3 nrm = b.normal.row(i).matrix().transpose();
      if (std::abs(nrm.norm() - 1.0) > 1e-6)
        out.push_back({"normal", x, y, "masked-in normal not unit length"});
      if (nrm.z() > 0.0)
        out.push_back({"normal", x, y, "masked-in normal has positive z"});
    }
  }

  for (std::size_t li = 0; li < b.lights.size(); ++li) {
    if (const auto* pt = std::get_if<PointLight>(&b.lights[li])) {
      if (!pt->position.allFinite())
        out.push_back({"light", static_cast<int>(li), -1, "point position not finite"});
      if (!pt->intensity.isFinite().all() || (pt->intensity < 0.0).any())
        out.push_back({"light", static_cast<int>(li), -1,
                       "point intensity channel negative or not finite"});
    } else {
      const auto& env = std::get<EnvLight>(b.lights[li]);
      if (!env.coefficients.allFinite())
        out.push_back({"light", static_cast<int>(li), -1, "env coefficients not finite"});
    }
  }
  return out;
}

}  // namespace relit
