// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <vector>

#include "relit/renderer.hpp"
#include "relit/types.hpp"

namespace relit {

struct SolveConfig {
  int max_iterations = 50;
  double cost_tolerance = 1e-10;   // relative cost decrease at convergence
  double initial_damping = 1e-3;   // Levenberg-Marquardt lambda
  double damping_increase = 10.0;
  double damping_decrease = 0.1;
  double roughness_init = 0.5;
  bool estimate_roughness = true;
  // Forward model assumed when fitting; must match how the images were lit.
  RenderConfig render;
};

/// Depth + mask + camera: the known geometry the solver conditions on.
struct SolveGeometry {
  ScalarMap depth;
  ScalarMap mask;
  Camera camera;
};

/// Per-pixel recovered material and diagnostics. `iterations` holds the
/// number of accepted refinement steps, or -1 where the pixel was flagged
/// (degenerate initialization or non-finite refinement).
struct SolveResult {
  NormalMap normal;
  ColorMap albedo;
  ScalarMap roughness;
  ScalarMap residual_rms;
  ScalarMap iterations;
};

/// Classical Lambertian photometric-stereo initialization. Per masked
/// pixel, solves the linear system of grayscale falloff-corrected
/// intensities for b = albedo * normal over the per-pixel lit subset
/// (iteratively re-selected by predicted visibility), then refits albedo
/// per channel with the normal fixed. Degenerate pixels (fewer than 3 lit
/// observations, condition number > 1e6, or |b| < 1e-9) get the view
/// direction as normal and zero albedo.
/// Throws std::invalid_argument for fewer than 3 images.
std::pair<NormalMap, ColorMap> lambertian_init(const std::vector<ColorMap>& images,
                                               const std::vector<PointLight>& lights,
                                               const SolveGeometry& geometry,
                                               const SolveConfig& config = {});

/// Per-pixel Levenberg-Marquardt refinement of (normal, albedo, roughness)
/// against the rendering model, starting from the given initialization.
/// The normal is optimized on a 2-DOF tangent chart re-centered after each
/// accepted step; albedo and roughness are projected to their ranges.
/// Accepted steps strictly decrease the per-pixel cost.
SolveResult refine_lm(const NormalMap& normal_init, const ColorMap& albedo_init,
                      const std::vector<ColorMap>& images,
                      const std::vector<PointLight>& lights,
                      const SolveGeometry& geometry, const SolveConfig& config = {});

/// lambertian_init followed by refine_lm.
SolveResult solve(const std::vector<ColorMap>& images,
                  const std::vector<PointLight>& lights, const SolveGeometry& geometry,
                  const SolveConfig& config = {});

}  // namespace relit
