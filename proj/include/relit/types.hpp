// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace relit {

using Vec3 = Eigen::Vector3d;
using Rgb = Eigen::Array3d;

// Roughness floor: alpha = R^2 enters a squared denominator, so R = 0 turns
// the facet distribution into a delta and ill-conditions the refinement.
inline constexpr double kMinRoughness = 0.01;

// Floor on shading dots n.l, n.v in specular denominators.
inline constexpr double kMinShadingDot = 1e-4;

/// Dense per-pixel map. Row-major, top-left origin, y down. Pixel (x, y)
/// occupies row y * width + x of the value array; channels are contiguous
/// per pixel. Values are immutable by convention once a map is built and
/// handed off; producers fill, consumers read.
template <typename Scalar, int Channels>
class Image {
 public:
  static_assert(Channels >= 1);
  using Storage = Eigen::Array<Scalar, Eigen::Dynamic, Channels,
                               Channels == 1 ? Eigen::ColMajor : Eigen::RowMajor>;
  using Pixel = Eigen::Array<Scalar, Channels, 1>;

  Image() = default;
  Image(int width, int height) : width_(width), height_(height) {
    if (width <= 0 || height <= 0)
      throw std::invalid_argument("Image: dimensions must be positive");
    values_.setZero(static_cast<Eigen::Index>(width) * height, Channels);
  }

  static Image constant(int width, int height, const Pixel& fill) {
    Image img(width, height);
    img.values_.rowwise() = fill.transpose();
    return img;
  }
  static Image constant(int width, int height, Scalar fill) {
    Image img(width, height);
    img.values_.setConstant(fill);
    return img;
  }

  int width() const { return width_; }
  int height() const { return height_; }
  Eigen::Index pixel_count() const { return values_.rows(); }
  bool empty() const { return values_.size() == 0; }

  Eigen::Index index(int x, int y) const {
    return static_cast<Eigen::Index>(y) * width_ + x;
  }

  auto row(int x, int y) { return values_.row(index(x, y)); }
  auto row(int x, int y) const { return values_.row(index(x, y)); }
  auto row(Eigen::Index i) { return values_.row(i); }
  auto row(Eigen::Index i) const { return values_.row(i); }

  Pixel pixel(int x, int y) const { return values_.row(index(x, y)).transpose(); }

  // Single-channel accessors.
  Scalar& at(int x, int y)
    requires(Channels == 1)
  { return values_(index(x, y), 0); }
  Scalar at(int x, int y) const
    requires(Channels == 1)
  { return values_(index(x, y), 0); }

  Storage& values() { return values_; }
  const Storage& values() const { return values_; }

  bool same_size(int w, int h) const { return width_ == w && height_ == h; }
  template <typename S2, int C2>
  bool same_size(const Image<S2, C2>& other) const {
    return same_size(other.width(), other.height());
  }

  friend bool operator==(const Image& a, const Image& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ &&
           (a.values_ == b.values_).all();
  }

 private:
  int width_ = 0;
  int height_ = 0;
  Storage values_;
};

/// RGB map in linear radiometric units. Houses albedo (each channel in
/// [0, 1]) and images (unbounded nonnegative).
using ColorMap = Image<double, 3>;

/// Single-channel map. Houses roughness, depth (radial distance from the
/// camera center, strictly positive), and the {0, 1} object mask.
using ScalarMap = Image<double, 1>;

/// Unit 3-vectors in the camera frame, stored with z <= 0 for
/// camera-facing surfaces (dataset storage convention; shading negates).
using NormalMap = Image<double, 3>;

/// Perspective pinhole in the camera-centric frame: camera at the origin,
/// +x right, +y down, scene at negative z. Pixel (u, v) casts the ray
/// along (u - cx, v - cy, -focal).
struct Camera {
  double focal_px = 0.0;  // focal length in pixels
  double cx = 0.0;        // principal point, pixels
  double cy = 0.0;
  int width = 0;
  int height = 0;

  /// Unit direction of the ray through pixel (u, v); z component < 0.
  Vec3 ray_dir(double u, double v) const {
    return Vec3(u - cx, v - cy, -focal_px).normalized();
  }

  /// Surface point at radial distance `depth` along the pixel ray, so that
  /// |result| == depth. Throws std::domain_error for nonpositive depth and
  /// std::invalid_argument for a pixel outside the image.
  Vec3 unproject(double u, double v, double depth) const;

  /// Pixel coordinates of a camera-frame point with z < 0.
  Eigen::Vector2d project(const Vec3& p) const {
    if (!(p.z() < 0.0))
      throw std::domain_error("Camera::project: point must have z < 0");
    const double inv = focal_px / -p.z();
    return {cx + p.x() * inv, cy + p.y() * inv};
  }
};

/// Point light: position in the camera frame, nonnegative RGB intensity.
struct PointLight {
  Vec3 position = Vec3::Zero();
  Rgb intensity = Rgb::Ones();
};

/// Environment light: 9 real spherical-harmonic coefficients per color
/// channel, band order (l,m) = (0,0),(1,-1),(1,0),(1,1),(2,-2),(2,-1),
/// (2,0),(2,1),(2,2). Row = SH index, column = RGB channel.
struct EnvLight {
  Eigen::Matrix<double, 9, 3> coefficients = Eigen::Matrix<double, 9, 3>::Zero();
};

using Light = std::variant<PointLight, EnvLight>;

/// Albedo + normal + depth + roughness + mask plus the camera and lights:
/// the unit of scene I/O. All maps share dimensions.
struct SceneBundle {
  ColorMap albedo;
  NormalMap normal;
  ScalarMap depth;
  ScalarMap roughness;
  ScalarMap mask;
  Camera camera;
  std::vector<Light> lights;
};

/// One broken invariant: which map, which pixel (-1,-1 when not pixel
/// bound), and the rule that failed.
struct Violation {
  std::string map;
  int x = -1;
  int y = -1;
  std::string rule;
};

/// Diagnostic sweep over every type invariant. Returns an empty list iff
/// the bundle is valid; never throws, never mutates.
std::vector<Violation> validate_bundle(const SceneBundle& bundle);

}  // namespace relit
