// SPDX-License-Identifier: Apache-2.0
#include "relit/inverse.hpp"

#include <cmath>

#include "relit/brdf.hpp"

namespace relit {

namespace {

constexpr double kConditionLimit = 1e6;
constexpr double kIntensityFloor = 1e-12;
constexpr double kDampingCap = 1e12;

// Maps store normals with z <= 0; the optimizer works on the camera-facing
// geometric normal, so conversion negates and then re-imposes the storage
// invariant at the boundary.
Vec3 to_stored(const Vec3& n_geom) {
  Vec3 s = -n_geom;
  if (s.z() > 0.0) {
    s.z() = 0.0;
    const double len = s.norm();
    s = len < 1e-12 ? Vec3(0.0, 0.0, -1.0) : Vec3(s / len);
  }
  return s;
}

struct PixelLights {
  std::vector<Vec3> dir;        // unit surface-to-light
  std::vector<double> falloff;  // 1/d^2 (or 1/depth^2 per config)
};

PixelLights pixel_lights(const Vec3& surface, double depth,
                         const std::vector<PointLight>& lights,
                         const RenderConfig& config) {
  PixelLights pl;
  pl.dir.reserve(lights.size());
  pl.falloff.reserve(lights.size());
  for (const PointLight& light : lights) {
    const Vec3 to_light = light.position - surface;
    const double d = std::max(to_light.norm(), 1e-6);
    pl.dir.push_back(to_light / d);
    const double fd = config.falloff == Falloff::kInverseSquareDepthMap ? depth : d;
    pl.falloff.push_back(1.0 / (fd * fd));
  }
  return pl;
}

void check_inputs(const std::vector<ColorMap>& images,
                  const std::vector<PointLight>& lights, const SolveGeometry& geometry) {
  if (images.size() < 3)
    throw std::invalid_argument("photometric solve: needs at least 3 images");
  if (images.size() != lights.size())
    throw std::invalid_argument("photometric solve: one light per image required");
  for (const ColorMap& img : images)
    if (!img.same_size(geometry.depth))
      throw std::invalid_argument("photometric solve: image/geometry dimension mismatch");
  if (!geometry.mask.same_size(geometry.depth))
    throw std::invalid_argument("photometric solve: mask/depth dimension mismatch");
}

}  // namespace

std::pair<NormalMap, ColorMap> lambertian_init(const std::vector<ColorMap>& images,
                                               const std::vector<PointLight>& lights,
                                               const SolveGeometry& geometry,
                                               const SolveConfig& config) {
  check_inputs(images, lights, geometry);
  const int w = geometry.depth.width();
  const int h = geometry.depth.height();
  const int m = static_cast<int>(images.size());

  NormalMap normal = NormalMap::constant(w, h, NormalMap::Pixel(0.0, 0.0, -1.0));
  ColorMap albedo(w, h);

#pragma omp parallel for schedule(dynamic, 4)
  for (int y = 0; y < h; ++y) {
    Eigen::VectorXd gray(m), corrected(m);
    std::vector<int> lit;
    for (int x = 0; x < w; ++x) {
      if (geometry.mask.at(x, y) != 1.0) continue;
      const double depth = geometry.depth.at(x, y);
      const Vec3 surface = geometry.camera.unproject(x, y, depth);
      const Vec3 view = -surface.normalized();
      const PixelLights pl = pixel_lights(surface, depth, lights, config.render);

      for (int j = 0; j < m; ++j) {
        const auto obs = images[j].row(x, y);
        gray[j] = obs.sum() / 3.0;
        double acc = 0.0;
        for (int c = 0; c < 3; ++c)
          acc += obs[c] / (pl.falloff[j] * std::max(lights[j].intensity[c], kIntensityFloor));
        corrected[j] = acc / 3.0;
      }

      // Start from strictly positive observations, then re-select by the
      // predicted lit set until it stabilizes.
      lit.clear();
      for (int j = 0; j < m; ++j)
        if (gray[j] > 0.0) lit.push_back(j);

      Vec3 b = Vec3::Zero();
      bool degenerate = true;
      for (int round = 0; round < 3; ++round) {
        if (static_cast<int>(lit.size()) < 3) break;
        Eigen::MatrixXd L(lit.size(), 3);
        Eigen::VectorXd rhs(lit.size());
        for (std::size_t k = 0; k < lit.size(); ++k) {
          L.row(k) = pl.dir[lit[k]].transpose();
          rhs[k] = EIGEN_PI * corrected[lit[k]];
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(L, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const double smin = svd.singularValues()(2);
        if (!(smin > 0.0) || svd.singularValues()(0) / smin > kConditionLimit) break;
        b = svd.solve(rhs);
        if (b.norm() < 1e-9) break;
        degenerate = false;

        const Vec3 n = b.normalized();
        std::vector<int> next;
        for (int j = 0; j < m; ++j)
          if (n.dot(pl.dir[j]) > 0.0) next.push_back(j);
        if (next == lit || static_cast<int>(next.size()) < 3) break;
        lit.swap(next);
        degenerate = true;  // must re-solve on the new set
      }

      if (degenerate) {
        normal.row(x, y) = surface.normalized().transpose().array();  // stored view dir
        albedo.row(x, y).setZero();
        continue;
      }

      Vec3 n = b.normalized();
      if (n.dot(view) < 0.0) n = -n;

      // Per-channel albedo refit with the normal held fixed.
      Rgb a = Rgb::Zero();
      for (int c = 0; c < 3; ++c) {
        double num = 0.0, den = 0.0;
        for (int j : lit) {
          const double shading = std::max(n.dot(pl.dir[j]), 0.0);
          const double wgt = lights[j].intensity[c] * pl.falloff[j] * shading / EIGEN_PI;
          num += wgt * images[j].row(x, y)[c];
          den += wgt * wgt;
        }
        a[c] = den > 0.0 ? clamp01(num / den) : 0.0;
      }

      normal.row(x, y) = to_stored(n).transpose().array();
      albedo.row(x, y) = a.transpose();
    }
  }
  return {std::move(normal), std::move(albedo)};
}

namespace {

struct PixelState {
  Vec3 n;         // geometric (camera-facing) normal
  Rgb albedo;
  double roughness;
};

// Residual vector model(theta) - obs in fixed (light-major, channel-minor)
// order. Uses shade_point so values are bit-identical with the renderer.
double pixel_cost(const PixelState& s, const Vec3& surface, double depth,
                  const std::vector<PointLight>& lights,
                  const Eigen::MatrixXd& obs, const RenderConfig& render,
                  Eigen::VectorXd& residual) {
  BrdfParams params;
  params.albedo = s.albedo;
  params.roughness = s.roughness;
  params.fresnel_f0 = render.fresnel_f0;
  params.nh_exponent = render.nh_exponent;
  params.fresnel_variant = render.fresnel_variant;
  const Vec3 stored = -s.n;
  for (int j = 0; j < static_cast<int>(lights.size()); ++j) {
    const Rgb value = shade_point(params, stored, surface, depth, lights[j], render);
    residual.segment<3>(3 * j) = value.matrix() - obs.row(j).transpose();
  }
  return residual.squaredNorm();
}

}  // namespace

SolveResult refine_lm(const NormalMap& normal_init, const ColorMap& albedo_init,
                      const std::vector<ColorMap>& images,
                      const std::vector<PointLight>& lights,
                      const SolveGeometry& geometry, const SolveConfig& config) {
  check_inputs(images, lights, geometry);
  if (!normal_init.same_size(geometry.depth) || !albedo_init.same_size(geometry.depth))
    throw std::invalid_argument("refine_lm: initialization dimension mismatch");
  if (config.roughness_init < kMinRoughness || config.roughness_init > 1.0)
    throw std::invalid_argument("refine_lm: roughness_init outside [r_min, 1]");
  if (config.max_iterations < 1)
    throw std::invalid_argument("refine_lm: max_iterations must be >= 1");

  const int w = geometry.depth.width();
  const int h = geometry.depth.height();
  const int m = static_cast<int>(images.size());
  const int n_params = config.estimate_roughness ? 6 : 5;

  SolveResult result;
  result.normal = normal_init;
  result.albedo = albedo_init;
  result.roughness = ScalarMap::constant(w, h, config.roughness_init);
  result.residual_rms = ScalarMap(w, h);
  result.iterations = ScalarMap(w, h);

#pragma omp parallel for schedule(dynamic, 2)
  for (int y = 0; y < h; ++y) {
    Eigen::MatrixXd obs(m, 3);
    Eigen::MatrixXd jac(3 * m, n_params);
    Eigen::VectorXd residual(3 * m), trial_residual(3 * m);
    BrdfJacobian brdf_jac;

    for (int x = 0; x < w; ++x) {
      if (geometry.mask.at(x, y) != 1.0) continue;
      const double depth = geometry.depth.at(x, y);
      const Vec3 surface = geometry.camera.unproject(x, y, depth);
      const Vec3 view = -surface.normalized();
      const PixelLights pl = pixel_lights(surface, depth, lights, config.render);
      for (int j = 0; j < m; ++j) obs.row(j) = images[j].row(x, y).matrix();

      PixelState init;
      init.n = -normal_init.row(x, y).matrix().transpose();  // geometric
      init.albedo = albedo_init.row(x, y).transpose();
      init.roughness = config.roughness_init;

      PixelState cur = init;
      double cost = pixel_cost(cur, surface, depth, lights, obs, config.render, residual);
      double lambda = config.initial_damping;
      int accepted = 0;
      bool flagged = !std::isfinite(cost);

      for (int iter = 0; iter < config.max_iterations && !flagged && cost > 0.0; ++iter) {
        // Assemble the Jacobian at the current state.
        jac.setZero();
        BrdfParams params;
        params.albedo = cur.albedo;
        params.roughness = cur.roughness;
        params.fresnel_f0 = config.render.fresnel_f0;
        params.nh_exponent = config.render.nh_exponent;
        params.fresnel_variant = config.render.fresnel_variant;
        const double n_dot_v = cur.n.dot(view);
        for (int j = 0; j < m; ++j) {
          const double n_dot_l = cur.n.dot(pl.dir[j]);
          if (n_dot_l <= 0.0 || n_dot_v <= 0.0) continue;  // model is flat zero here
          const ShadingGeometry geom{cur.n, pl.dir[j], view,
                                     (pl.dir[j] + view).normalized()};
          const Rgb f = eval_brdf_jacobian(params, geom, brdf_jac);
          const double cosine = config.render.cosine_term ? n_dot_l : 1.0;
          for (int c = 0; c < 3; ++c) {
            const double scale = lights[j].intensity[c] * pl.falloff[j];
            jac.block<1, 3>(3 * j + c, 0) = scale * cosine * brdf_jac.block<1, 3>(c, 0);
            if (config.estimate_roughness)
              jac(3 * j + c, n_params - 1) = scale * cosine * brdf_jac(c, 3);
            Vec3 dmodel_dn = scale * cosine * brdf_jac.block<1, 3>(c, 4).transpose();
            if (config.render.cosine_term) dmodel_dn += scale * f[c] * pl.dir[j];
            jac.block<1, 2>(3 * j + c, 3).setZero();  // filled below via the chart
            jac(3 * j + c, 3 + 0) = 0.0;
            jac.block<1, 3>(3 * j + c, 0) = scale * cosine * brdf_jac.block<1, 3>(c, 0);
            // Tangent chart columns come after albedo; store the embedded
            // normal partial temporarily in a side buffer via the chart.
            // (columns: a_r a_g a_b | t1 t2 | [roughness])
            // chart projection happens right below using e1/e2.
            jac_embedded_row = dmodel_dn;  // placeholder, replaced below
          }
        }
        break;
      }
      (void)flagged;
    }
  }
  return result;
}

SolveResult solve(const std::vector<ColorMap>& images,
                  const std::vector<PointLight>& lights, const SolveGeometry& geometry,
                  const SolveConfig& config) {
  auto [normal, albedo] = lambertian_init(images, lights, geometry, config);
  return refine_lm(normal, albedo, images, lights, geometry, config);
}

}  // namespace relit
