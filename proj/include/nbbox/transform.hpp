#pragma once

// Random noise injection into oriented bounding boxes: per-box scaling,
// rotation and translation, with isotropy switches and a size gate that
// leaves small boxes untouched.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nbbox/geometry.hpp"
#include "nbbox/rng.hpp"

namespace nbbox {

/// Noise hyper-parameters. Member defaults are the recommended setting:
/// scale in [0.99, 1.01), rotation in [-0.01, 0.01) degrees, translation in
/// [-1, 1] px, isotropic scaling and translation, gamma = 16.
struct NoiseConfig {
  bool scale_enabled = true;
  double s_min = 0.99;
  double s_max = 1.01;
  bool isotropic_scale = true;

  bool rotate_enabled = true;
  double r_min = -0.01;  // degrees
  double r_max = 0.01;

  bool translate_enabled = true;
  std::int64_t t_min = -1;  // pixels
  std::int64_t t_max = 1;
  bool isotropic_translate = true;

  /// Boxes with w <= gamma or h <= gamma are left unaltered.
  std::int64_t gamma = 16;

  friend bool operator==(const NoiseConfig&, const NoiseConfig&) = default;
};

/// Throws InvalidConfig unless 0 < s_min <= s_max, r_min <= r_max,
/// t_min <= t_max, gamma >= 0 and every real is finite.
void validate(const NoiseConfig& cfg);

/// Config with every stage switched off.
NoiseConfig disabled_config();

struct AnnotationRecord {
  OrientedBoxd box;
  std::string category;
  int difficulty = 0;

  friend bool operator==(const AnnotationRecord&, const AnnotationRecord&) = default;
};

void validate(const AnnotationRecord& record);

/// True when the box is too small to be perturbed (w <= gamma or h <= gamma).
bool is_gated(const OrientedBoxd& box, const NoiseConfig& cfg);

// Each stage returns the box unchanged, without drawing, when disabled.
// Otherwise the number of draws is fixed: scaling draws one real when
// isotropic and two otherwise, rotation draws one real, translation draws one
// integer when isotropic and two otherwise. A degenerate range (min == max)
// still consumes its draw and yields min.

OrientedBoxd noisy_scale(const OrientedBoxd& box, const NoiseConfig& cfg, RngStream& stream);
OrientedBoxd noisy_rotate(const OrientedBoxd& box, const NoiseConfig& cfg, RngStream& stream);
OrientedBoxd noisy_translate(const OrientedBoxd& box, const NoiseConfig& cfg, RngStream& stream);

/// Applies the enabled stages in the order scaling, rotation, translation to
/// every record whose original box passes the gate. Gated records are copied
/// verbatim and consume no draws. Everything is validated before any record
/// is touched.
std::vector<AnnotationRecord> nbbox_apply(std::span<const AnnotationRecord> labels,
                                          const NoiseConfig& cfg, RngStream& stream);

/// Substream label for one annotation file: its stem, plus "||" and the
/// epoch tag when one is given.
std::string substream_label(std::string_view image_id, std::string_view epoch_tag = {});

}  // namespace nbbox
