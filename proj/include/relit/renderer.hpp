// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "relit/brdf.hpp"
#include "relit/types.hpp"

namespace relit {

enum class Falloff {
  kInverseSquareDistance,  // 1/d^2 with d the true point-to-light distance
  kInverseSquareDepthMap,  // 1/D(p)^2, the literal depth-map reading
};

struct RenderConfig {
  bool cosine_term = true;
  Falloff falloff = Falloff::kInverseSquareDistance;
  bool clamp_negative = true;
  // BRDF options shared by every pixel; albedo/roughness come from the maps.
  double fresnel_f0 = 0.05;
  double nh_exponent = 2.0;
  FresnelVariant fresnel_variant = FresnelVariant::kPaperVerbatim;
};

struct RenderStats {
  // Pixels whose point light coincided with the surface (d < 1e-6).
  std::int64_t coincident_light_pixels = 0;
};

/// First nine real spherical harmonics at unit direction n, band order
/// (0,0),(1,-1),(1,0),(1,1),(2,-2),(2,-1),(2,0),(2,1),(2,2).
Eigen::Matrix<double, 9, 1> sh_basis9(const Vec3& n);

/// Diffuse irradiance of an SH9 environment at unit normal n:
/// E(n) = sum_lm A_l c_lm Y_lm(n) with A_0 = pi, A_1 = 2pi/3, A_2 = pi/4.
/// Negative lobes are clamped at zero only when clamp_negative is set.
Rgb shade_sh(const Vec3& n, const Eigen::Matrix<double, 9, 3>& coefficients,
             bool clamp_negative = false);

/// Shades a single surface point under one light. `n_stored` follows the
/// map convention (z <= 0 toward camera); shading flips it. Returns zero
/// for backfacing or masked-geometry-invalid configurations.
/// `depth` is the pixel's depth-map value (used by kInverseSquareDepthMap).
Rgb shade_point(const BrdfParams& params, const Vec3& n_stored, const Vec3& surface,
                double depth, const Light& light, const RenderConfig& config,
                RenderStats* stats = nullptr);

/// Direct-illumination render of a bundle under one light. Masked-out
/// pixels are exactly zero.
ColorMap render_direct(const SceneBundle& bundle, const Light& light,
                       const RenderConfig& config = {}, RenderStats* stats = nullptr);

/// Render under several lights at once; per-pixel contributions are summed
/// in list order (superposition).
ColorMap render_lights(const SceneBundle& bundle, const std::vector<Light>& lights,
                       const RenderConfig& config = {}, RenderStats* stats = nullptr);

/// One render_direct image per light, in input order.
std::vector<ColorMap> relight_stack(const SceneBundle& bundle,
                                    const std::vector<Light>& lights,
                                    const RenderConfig& config = {},
                                    RenderStats* stats = nullptr);

/// Pixelwise direct + residual composition; clamped at zero when requested.
ColorMap compose_global(const ColorMap& direct, const ColorMap& residual,
                        bool clamp_negative = true);

/// Pixelwise full - direct. Never clamped: the result is a residual.
ColorMap decompose_global(const ColorMap& full, const ColorMap& direct);

/// `count` light positions uniform (area measure) over the camera-side
/// hemisphere of the given radius centered at the object center (0,0,-1).
/// Deterministic in seed.
std::vector<Vec3> sample_frontal_hemisphere(int count, double radius,
                                            std::uint64_t seed);

}  // namespace relit
