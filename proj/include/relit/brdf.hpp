// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>

#include "relit/types.hpp"

namespace relit {

// The printed Fresnel approximation omits the usual additive F0 base term.
// kPaperVerbatim evaluates exactly what is printed; kWithBaseReflectance
// restores "F0 +" for physical-sanity experiments.
enum class FresnelVariant { kPaperVerbatim, kWithBaseReflectance };

struct BrdfParams {
  Rgb albedo = Rgb::Constant(0.5);
  double roughness = 0.5;
  double fresnel_f0 = 0.05;
  double nh_exponent = 2.0;  // exponent s on (n.h) inside the distribution
  FresnelVariant fresnel_variant = FresnelVariant::kPaperVerbatim;
};

/// Unit shading frame: surface normal n, direction to light l, direction
/// to camera v, and the half vector h = normalize(l + v). All oriented so
/// a lit, visible point has n.l > 0 and n.v > 0.
struct ShadingGeometry {
  Vec3 n;
  Vec3 l;
  Vec3 v;
  Vec3 h;
};

/// Builds a ShadingGeometry, checking unit norms (1e-6) and l + v != 0.
ShadingGeometry make_shading_geometry(const Vec3& n, const Vec3& l, const Vec3& v);

template <typename S>
S clamp01(S x) {
  return x < S(0) ? S(0) : (x > S(1) ? S(1) : x);
}

/// Facet distribution  alpha^2 / (pi * [(n.h)^s (alpha^2 - 1) + 1]^2),
/// alpha = roughness^2. n.h is clamped to [0, 1] before use.
template <typename S>
S microfacet_distribution(S n_dot_h, S roughness, S nh_exponent = S(2)) {
  const S x = clamp01(n_dot_h);
  const S alpha = roughness * roughness;
  const S a2 = alpha * alpha;
  const S bracket = std::pow(x, nh_exponent) * (a2 - S(1)) + S(1);
  return a2 / (S(EIGEN_PI) * bracket * bracket);
}

/// Schlick-style view-angle reflectance  (1 - f0) * 2^(-(5.55473 x + 6.8316) x)
/// with x = v.h clamped to [0, 1]; kWithBaseReflectance adds f0.
template <typename S>
S fresnel(S v_dot_h, S f0, FresnelVariant variant = FresnelVariant::kPaperVerbatim) {
  const S x = clamp01(v_dot_h);
  const S tail = (S(1) - f0) * std::exp2(-(S(5.55473) * x + S(6.8316)) * x);
  return variant == FresnelVariant::kWithBaseReflectance ? f0 + tail : tail;
}

/// Masking-shadowing product G1(n.v) * G1(n.l) with G1(x) = x / (x(1-k) + k)
/// and k = (roughness + 1)^2 / 8. Dots are clamped to [kMinShadingDot, 1].
template <typename S>
S geometry_term(S n_dot_l, S n_dot_v, S roughness) {
  const S k = (roughness + S(1)) * (roughness + S(1)) / S(8);
  const auto g1 = [k](S x) {
    x = x < S(kMinShadingDot) ? S(kMinShadingDot) : (x > S(1) ? S(1) : x);
    return x / (x * (S(1) - k) + k);
  };
  return g1(n_dot_v) * g1(n_dot_l);
}

/// Full microfacet BRDF per channel:
///   albedo/pi + D * F * G / (4 (n.l)(n.v))
/// The specular term is achromatic (dielectric, scalar f0) and is added to
/// every channel; denominator dots are clamped at kMinShadingDot.
/// Requires n.l > 0 and n.v > 0 (throws std::domain_error otherwise; the
/// renderer zeroes such pixels instead of calling).
Rgb eval_brdf(const BrdfParams& params, const ShadingGeometry& geom);

/// Rows: RGB channel. Columns: albedo r,g,b | roughness | normal x,y,z.
/// Normal partials are taken on the embedded 3-vector; the solver projects
/// them onto its 2-DOF tangent chart.
using BrdfJacobian = Eigen::Matrix<double, 3, 7>;

/// eval_brdf value plus analytic partials. Same preconditions as eval_brdf.
Rgb eval_brdf_jacobian(const BrdfParams& params, const ShadingGeometry& geom,
                       BrdfJacobian& jacobian);

}  // namespace relit
