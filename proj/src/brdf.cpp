// SPDX-License-Identifier: Apache-2.0
#include "relit/brdf.hpp"

namespace relit {

ShadingGeometry make_shading_geometry(const Vec3& n, const Vec3& l, const Vec3& v) {
  if (std::abs(n.norm() - 1.0) > 1e-6 || std::abs(l.norm() - 1.0) > 1e-6 ||
      std::abs(v.norm() - 1.0) > 1e-6)
    throw std::invalid_argument("make_shading_geometry: directions must be unit length");
  const Vec3 sum = l + v;
  const double len = sum.norm();
  if (len < 1e-12)
    throw std::invalid_argument("make_shading_geometry: l + v vanishes, h undefined");
  return {n, l, v, sum / len};
}

namespace {

// v.h computed as (1 + l.v) / |l + v|, which is algebraically equal for
// unit l, v and bitwise symmetric under swapping them (reciprocity).
double half_angle_cos(const Vec3& l, const Vec3& v) {
  return clamp01((1.0 + l.dot(v)) / (l + v).norm());
}

struct SpecularTerms {
  double x_h;      // clamped n.h
  double x_l;      // clamped n.l
  double x_v;      // clamped n.v
  double x_vh;     // symmetric v.h
  double dist;     // facet distribution at x_h
  double fres;     // fresnel at x_vh
  double geom_l;   // G1(x_l)
  double geom_v;   // G1(x_v)
  double k;        // (R+1)^2 / 8
  double value;    // D * F * G / (4 x_l x_v)
};

SpecularTerms specular_eval(const BrdfParams& p, const ShadingGeometry& g) {
  SpecularTerms t;
  t.x_h = clamp01(g.n.dot(g.h));
  const double clamp_lo = kMinShadingDot;
  t.x_l = std::clamp(g.n.dot(g.l), clamp_lo, 1.0);
  t.x_v = std::clamp(g.n.dot(g.v), clamp_lo, 1.0);
  t.x_vh = half_angle_cos(g.l, g.v);
  t.dist = microfacet_distribution(t.x_h, p.roughness, p.nh_exponent);
  t.fres = fresnel(t.x_vh, p.fresnel_f0, p.fresnel_variant);
  t.k = (p.roughness + 1.0) * (p.roughness + 1.0) / 8.0;
  const auto g1 = [&t](double x) { return x / (x * (1.0 - t.k) + t.k); };
  t.geom_l = g1(t.x_l);
  t.geom_v = g1(t.x_v);
  t.value = t.dist * t.fres * (t.geom_v * t.geom_l) / (4.0 * t.x_l * t.x_v);
  return t;
}

void check_facing(const ShadingGeometry& g) {
  if (!(g.n.dot(g.l) > 0.0) || !(g.n.dot(g.v) > 0.0))
    throw std::domain_error("eval_brdf: requires n.l > 0 and n.v > 0");
}

}  // namespace

Rgb eval_brdf(const BrdfParams& p, const ShadingGeometry& g) {
  check_facing(g);
  const SpecularTerms t = specular_eval(p, g);
  return p.albedo / EIGEN_PI + t.value;
}

Rgb eval_brdf_jacobian(const BrdfParams& p, const ShadingGeometry& g,
                       BrdfJacobian& jac) {
  check_facing(g);
  const SpecularTerms t = specular_eval(p, g);
  jac.setZero();

  // Diffuse term: linear in albedo, channel by channel.
  jac(0, 0) = jac(1, 1) = jac(2, 2) = 1.0 / EIGEN_PI;

  const double alpha = p.roughness * p.roughness;
  const double a2 = alpha * alpha;
  const double s = p.nh_exponent;
  const double xhs = std::pow(t.x_h, s);
  const double bracket = xhs * (a2 - 1.0) + 1.0;
  const double denom = 4.0 * t.x_l * t.x_v;

  // d dist / d roughness, via alpha = R^2.
  const double ddist_dalpha =
      (2.0 * alpha * bracket - 4.0 * alpha * a2 * xhs) / (EIGEN_PI * bracket * bracket * bracket);
  const double ddist_dr = ddist_dalpha * 2.0 * p.roughness;

  // d G1 / d k at fixed x, and dk/dR = (R+1)/4.
  const auto dg1_dk = [&t](double x) {
    const double d = x * (1.0 - t.k) + t.k;
    return -x * (1.0 - x) / (d * d);
  };
  const double dk_dr = (p.roughness + 1.0) / 4.0;
  const double dgeom_dr = (dg1_dk(t.x_v) * t.geom_l + t.geom_v * dg1_dk(t.x_l)) * dk_dr;

  const double geom = t.geom_v * t.geom_l;
  const double dspec_dr = (ddist_dr * t.fres * geom + t.dist * t.fres * dgeom_dr) / denom;
  jac.col(3).setConstant(dspec_dr);

  // Normal partials through the three clamped dots; each gate is open only
  // strictly inside its clamp interval.
  Vec3 dspec_dn = Vec3::Zero();
  const double raw_xh = g.n.dot(g.h);
  if (raw_xh > 0.0 && raw_xh < 1.0) {
    const double dbracket_dxh = s * std::pow(t.x_h, s - 1.0) * (a2 - 1.0);
    const double ddist_dxh = -2.0 * a2 * dbracket_dxh / (EIGEN_PI * bracket * bracket * bracket);
    dspec_dn += (ddist_dxh * t.fres * geom / denom) * g.h;
  }
  const auto dg1_dx = [&t](double x) {
    const double d = x * (1.0 - t.k) + t.k;
    return t.k / (d * d);
  };
  const double raw_xl = g.n.dot(g.l);
  if (raw_xl > kMinShadingDot && raw_xl < 1.0) {
    const double dspec_dxl =
        t.dist * t.fres * dg1_dx(t.x_l) * t.geom_v / denom - t.value / t.x_l;
    dspec_dn += dspec_dxl * g.l;
  }
  const double raw_xv = g.n.dot(g.v);
  if (raw_xv > kMinShadingDot && raw_xv < 1.0) {
    const double dspec_dxv =
        t.dist * t.fres * dg1_dx(t.x_v) * t.geom_l / denom - t.value / t.x_v;
    dspec_dn += dspec_dxv * g.v;
  }
  jac.col(4).setConstant(dspec_dn.x());
  jac.col(5).setConstant(dspec_dn.y());
  jac.col(6).setConstant(dspec_dn.z());

  return p.albedo / EIGEN_PI + t.value;
}

}  // namespace relit
