// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "relit/types.hpp"

namespace relit {

enum class Preset { kSphere, kBumpField, kTexturedPlane };
enum class AlbedoMode { kConstant, kProcedural };

struct PresetSpec {
  Preset preset = Preset::kSphere;
  int resolution = 128;                       // square images, >= 16
  std::uint64_t seed = 0;
  double roughness_min = 0.3;                 // within [kMinRoughness, 1]
  double roughness_max = 0.3;
  AlbedoMode albedo_mode = AlbedoMode::kConstant;
  Rgb albedo = Rgb(0.70, 0.55, 0.40);         // used by kConstant
  double center_depth = 1.0;                  // object center sits at (0,0,-center_depth)
};

/// Camera used by the presets: focal = resolution px, principal point at
/// (res/2, res/2) so the optical axis passes through a pixel center.
Camera default_camera(int resolution);

/// Procedurally builds a geometrically consistent bundle: depth is the
/// radial distance of the analytic surface and normals are its exact
/// analytic surface normals. Includes one co-located point light.
/// Deterministic in (spec, camera).
SceneBundle generate(const PresetSpec& spec, const Camera& camera);
SceneBundle generate(const PresetSpec& spec);

/// Adds deterministic zero-mean Gaussian noise with sigma = sigma_fraction
/// times the global maximum over the stack, clamped at zero.
std::vector<ColorMap> perturb_images(const std::vector<ColorMap>& images,
                                     double sigma_fraction, std::uint64_t seed);

}  // namespace relit
