#pragma once

// Detector-free analyses: how far annotated quadrilaterals are from their
// minimum-area rectangles, and how much a noise setting degrades boxes
// (self-IoU between each box and its perturbed copy).

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "nbbox/annotations.hpp"
#include "nbbox/noise_config.hpp"

namespace nbbox {

inline constexpr std::size_t kHistogramBuckets = 20;  // width 0.05 over [0, 1]

struct DiscrepancyRecord {
  std::string image_id;
  std::string category;
  double iou_ann_vs_minrect = 0.0;
  /// area(min rect) / |area(quad)|, clamped to >= 1; +inf for degenerate quads.
  double area_ratio = 1.0;
  bool degenerate = false;
  /// Concave or self-intersecting quadrilateral.
  bool non_convex = false;
};

struct DiscrepancyStats {
  std::vector<DiscrepancyRecord> per_record;
  std::array<std::size_t, kHistogramBuckets> histogram{};
  double mean_iou = 0.0;
  std::vector<std::string> warnings;
};

/// Histogram bucket of an IoU value; 1.0 falls in the last bucket.
std::size_t histogram_bucket(double iou);

/// Throws InvalidInput when the files hold no records at all.
DiscrepancyStats discrepancy_report(std::span<const AnnotationFile> files);

struct SweepRow {
  std::string name;
  NoiseConfig config;
  double mean_self_iou = 1.0;
  double p05_self_iou = 1.0;
  double frac_gated = 0.0;
  std::size_t samples = 0;
};

struct SweepResult {
  std::vector<SweepRow> grid;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
};

/// For every config, runs `trials` seeded applications over all files and
/// collects the IoU between each eligible box and its noisy copy. Trial k of
/// a file uses the same substream label as `augment` with epoch tag
/// "trial-k", so configs are compared on a shared random schedule.
SweepResult noise_sweep(std::span<const AnnotationFile> files, std::span<const NamedConfig> grid,
                        std::uint64_t seed, std::size_t trials);

/// Linear-interpolated percentile (q in [0, 1]) of unsorted values.
double percentile(std::vector<double> values, double q);

nlohmann::json to_json(const DiscrepancyStats& stats);
std::string sweep_to_csv(const SweepResult& result);

}  // namespace nbbox
