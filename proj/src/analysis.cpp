#include "nbbox/analysis.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>

#include "nbbox/error.hpp"

namespace nbbox {

namespace {

bool is_convex_quad(const std::array<Point2d, 4>& corners) {
  try {
    ConvexPolygon<double>::from_vertices(Polyline<double>(corners.begin(), corners.end()));
    return true;
  } catch (const InvalidInput&) {
    return false;
  }
}

DiscrepancyRecord measure(const std::string& image_id, const AnnotationEntry& entry,
                          std::vector<std::string>& warnings) {
  DiscrepancyRecord rec;
  rec.image_id = image_id;
  rec.category = entry.source.category;

  const auto corners = entry.quad.corners();
  const double quad_area = signed_area<double>(corners);
  const auto rect = quad_to_box(entry.quad);
  if (rect.degenerate || std::abs(quad_area) <= kGeomEps<double>) {
    rec.degenerate = true;
    rec.iou_ann_vs_minrect = 0.0;
    rec.area_ratio = std::numeric_limits<double>::infinity();
    warnings.push_back(fmt::format("{}: degenerate {} quadrilateral", image_id, rec.category));
    return rec;
  }

  rec.non_convex = !is_convex_quad(corners);
  Polyline<double> subject(corners.begin(), corners.end());
  if (quad_area < 0.0) std::reverse(subject.begin(), subject.end());
  const double inter = std::abs(signed_area<double>(clip_polygon(subject, obb_to_polygon(rect.box))));
  const double rect_area = rect.box.area();
  const double uni = std::abs(quad_area) + rect_area - inter;
  rec.iou_ann_vs_minrect = std::clamp(inter / uni, 0.0, 1.0);
  rec.area_ratio = std::max(1.0, rect_area / std::abs(quad_area));
  if (rec.non_convex) {
    warnings.push_back(fmt::format("{}: non-convex or self-intersecting {} quadrilateral", image_id,
                                   rec.category));
  }
  return rec;
}

}  // namespace

std::size_t histogram_bucket(double iou) {
  const auto b = static_cast<std::size_t>(std::floor(std::clamp(iou, 0.0, 1.0) * kHistogramBuckets));
  return std::min(b, kHistogramBuckets - 1);
}

DiscrepancyStats discrepancy_report(std::span<const AnnotationFile> files) {
  DiscrepancyStats stats;
  double sum = 0.0;
  for (const auto& file : files) {
    for (const auto& entry : file.entries) {
      auto rec = measure(file.image_id, entry, stats.warnings);
      ++stats.histogram[histogram_bucket(rec.iou_ann_vs_minrect)];
      sum += rec.iou_ann_vs_minrect;
      stats.per_record.push_back(std::move(rec));
    }
  }
  if (stats.per_record.empty()) throw InvalidInput("discrepancy report needs at least one record");
  stats.mean_iou = sum / static_cast<double>(stats.per_record.size());
  return stats;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw InvalidInput("percentile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

SweepResult noise_sweep(std::span<const AnnotationFile> files, std::span<const NamedConfig> grid,
                        std::uint64_t seed, std::size_t trials) {
  if (trials == 0) throw InvalidInput("noise sweep needs at least one trial");
  SweepResult result;
  result.seed = seed;
  result.trials = trials;

  std::vector<std::vector<AnnotationRecord>> originals;
  std::size_t total = 0;
  for (const auto& file : files) {
    originals.push_back(file.records());
    total += originals.back().size();
  }
  const RngStream root(seed);

  for (const auto& [name, cfg] : grid) {
    validate(cfg);
    SweepRow row{name, cfg};
    std::size_t gated = 0;
    for (const auto& records : originals) {
      gated += static_cast<std::size_t>(
          std::count_if(records.begin(), records.end(), [&](const auto& r) { return is_gated(r.box, cfg); }));
    }
    std::vector<double> samples;
    for (std::size_t trial = 0; trial < trials; ++trial) {
      const std::string tag = "trial-" + std::to_string(trial);
      for (std::size_t f = 0; f < files.size(); ++f) {
        auto stream = root.substream(substream_label(files[f].image_id, tag));
        const auto noisy = nbbox_apply(originals[f], cfg, stream);
        for (std::size_t i = 0; i < noisy.size(); ++i) {
          if (is_gated(originals[f][i].box, cfg)) continue;
          samples.push_back(rotated_iou(noisy[i].box, originals[f][i].box));
        }
      }
    }
    row.samples = samples.size();
    row.frac_gated = total == 0 ? 0.0 : static_cast<double>(gated) / static_cast<double>(total);
    if (!samples.empty()) {
      double sum = 0.0;
      for (const double s : samples) sum += s;
      row.mean_self_iou = sum / static_cast<double>(samples.size());
      row.p05_self_iou = percentile(std::move(samples), 0.05);
    }
    result.grid.push_back(std::move(row));
  }
  return result;
}

nlohmann::json to_json(const DiscrepancyStats& stats) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : stats.per_record) {
    records.push_back({{"image_id", r.image_id},
                       {"category", r.category},
                       {"iou_ann_vs_minrect", r.iou_ann_vs_minrect},
                       {"area_ratio", std::isfinite(r.area_ratio) ? nlohmann::json(r.area_ratio)
                                                                  : nlohmann::json(nullptr)},
                       {"degenerate", r.degenerate},
                       {"non_convex", r.non_convex}});
  }
  return {{"num_records", stats.per_record.size()},
          {"mean_iou", stats.mean_iou},
          {"histogram", {{"bucket_width", 1.0 / kHistogramBuckets}, {"counts", stats.histogram}}},
          {"records", records},
          {"warnings", stats.warnings}};
}

std::string sweep_to_csv(const SweepResult& result) {
  std::string out =
      "name,scale_enabled,s_min,s_max,isotropic_scale,rotate_enabled,r_min,r_max,"
      "translate_enabled,t_min,t_max,isotropic_translate,gamma,mean_self_iou,p05_self_iou,"
      "frac_gated\n";
  for (const auto& row : result.grid) {
    const auto& c = row.config;
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", row.name, c.scale_enabled,
                       c.s_min, c.s_max, c.isotropic_scale, c.rotate_enabled, c.r_min, c.r_max,
                       c.translate_enabled, c.t_min, c.t_max, c.isotropic_translate, c.gamma,
                       row.mean_self_iou, row.p05_self_iou, row.frac_gated);
  }
  return out;
}

}  // namespace nbbox
