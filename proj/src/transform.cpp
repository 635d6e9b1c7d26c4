#include "nbbox/transform.hpp"

#include <cmath>

#include "nbbox/error.hpp"

namespace nbbox {

namespace {

double draw_real(RngStream& stream, double lo, double hi) {
  if (lo == hi) {
    stream.next_u64();
    return lo;
  }
  return stream.rand_float(lo, hi);
}

}  // namespace

void validate(const NoiseConfig& cfg) {
  if (!std::isfinite(cfg.s_min) || !std::isfinite(cfg.s_max) || !(cfg.s_min > 0.0) ||
      cfg.s_min > cfg.s_max) {
    throw InvalidConfig("scaling range must satisfy 0 < s_min <= s_max");
  }
  if (!std::isfinite(cfg.r_min) || !std::isfinite(cfg.r_max) || cfg.r_min > cfg.r_max) {
    throw InvalidConfig("rotation range must satisfy r_min <= r_max");
  }
  if (cfg.t_min > cfg.t_max) {
    throw InvalidConfig("translation range must satisfy t_min <= t_max");
  }
  if (cfg.gamma < 0) {
    throw InvalidConfig("gamma must be non-negative");
  }
}

NoiseConfig disabled_config() {
  NoiseConfig cfg;
  cfg.scale_enabled = false;
  cfg.rotate_enabled = false;
  cfg.translate_enabled = false;
  return cfg;
}

void validate(const AnnotationRecord& record) {
  validate(record.box);
  if (record.category.empty()) throw InvalidInput("annotation category must be non-empty");
}

bool is_gated(const OrientedBoxd& box, const NoiseConfig& cfg) {
  const auto gamma = static_cast<double>(cfg.gamma);
  return box.w <= gamma || box.h <= gamma;
}

OrientedBoxd noisy_scale(const OrientedBoxd& box, const NoiseConfig& cfg, RngStream& stream) {
  validate(cfg);
  if (!cfg.scale_enabled) return box;
  const double alpha = draw_real(stream, cfg.s_min, cfg.s_max);
  const double beta = cfg.isotropic_scale ? alpha : draw_real(stream, cfg.s_min, cfg.s_max);
  OrientedBoxd out = box;
  out.w = box.w * alpha;
  out.h = box.h * beta;
  return out;
}

OrientedBoxd noisy_rotate(const OrientedBoxd& box, const NoiseConfig& cfg, RngStream& stream) {
  validate(cfg);
  if (!cfg.rotate_enabled) return box;
  OrientedBoxd out = box;
  out.theta = box.theta + draw_real(stream, cfg.r_min, cfg.r_max);
  return out;
}

OrientedBoxd noisy_translate(const OrientedBoxd& box, const NoiseConfig& cfg, RngStream& stream) {
  validate(cfg);
  if (!cfg.translate_enabled) return box;
  const std::int64_t alpha = stream.rand_int(cfg.t_min, cfg.t_max);
  const std::int64_t beta = cfg.isotropic_translate ? alpha : stream.rand_int(cfg.t_min, cfg.t_max);
  OrientedBoxd out = box;
  out.center.x() = box.center.x() + static_cast<double>(alpha);
  out.center.y() = box.center.y() + static_cast<double>(beta);
  return out;
}

std::vector<AnnotationRecord> nbbox_apply(std::span<const AnnotationRecord> labels,
                                          const NoiseConfig& cfg, RngStream& stream) {
  validate(cfg);
  for (const auto& record : labels) validate(record);

  std::vector<AnnotationRecord> out(labels.begin(), labels.end());
  for (auto& record : out) {
    if (is_gated(record.box, cfg)) continue;
    record.box = noisy_scale(record.box, cfg, stream);
    record.box = noisy_rotate(record.box, cfg, stream);
    record.box = noisy_translate(record.box, cfg, stream);
  }
  return out;
}

std::string substream_label(std::string_view image_id, std::string_view epoch_tag) {
  std::string label(image_id);
  if (!epoch_tag.empty()) {
    label += "||";
    label += epoch_tag;
  }
  return label;
}

}  // namespace nbbox
