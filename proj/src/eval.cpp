#include "nbbox/eval.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <numeric>
#include <nlohmann/json.hpp>

#include "nbbox/error.hpp"

namespace nbbox {

namespace {

std::vector<std::size_t> score_order(std::size_t n, const auto& score_of) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return score_of(a) > score_of(b); });
  return order;
}

}  // namespace

ApMode parse_ap_mode(std::string_view name) {
  if (name == "11pt") return ApMode::eleven_point;
  if (name == "all") return ApMode::all_point;
  throw InvalidInput("unknown AP mode '" + std::string(name) + "' (expected 11pt or all)");
}

std::string to_string(ApMode mode) { return mode == ApMode::eleven_point ? "11pt" : "all"; }

std::vector<Match> match_detections(std::span<const Detection> dets, std::span<const GroundTruth> gts,
                                    double iou_threshold) {
  if (!(iou_threshold > 0.0 && iou_threshold < 1.0)) {
    throw InvalidInput("IoU threshold must lie in (0, 1)");
  }
  std::vector<bool> taken(gts.size(), false);
  std::vector<Match> out;
  out.reserve(dets.size());
  for (const std::size_t d : score_order(dets.size(), [&](std::size_t i) { return dets[i].score; })) {
    Match m;
    m.det_index = d;
    double best = -1.0;
    std::optional<std::size_t> best_gt;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (gts[g].difficulty == 0 && taken[g]) continue;
      const double iou = rotated_iou(dets[d].box, gts[g].box);
      if (iou > best) {
        best = iou;
        best_gt = g;
      }
    }
    if (best_gt) m.iou = best;
    if (best_gt && best >= iou_threshold) {
      m.gt_index = best_gt;
      if (gts[*best_gt].difficulty > 0) {
        m.ignored = true;
      } else {
        m.matched = true;
        taken[*best_gt] = true;
      }
    }
    out.push_back(m);
  }
  return out;
}

double average_precision(std::span<const ScoredOutcome> outcomes, std::size_t num_gt, ApMode mode) {
  if (num_gt == 0) return 0.0;
  std::vector<double> recall;
  std::vector<double> precision;
  std::vector<bool> is_tp;
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (const std::size_t i :
       score_order(outcomes.size(), [&](std::size_t k) { return outcomes[k].score; })) {
    if (outcomes[i].ignored) continue;
    (outcomes[i].matched ? tp : fp) += 1;
    recall.push_back(static_cast<double>(tp) / static_cast<double>(num_gt));
    precision.push_back(static_cast<double>(tp) / static_cast<double>(tp + fp));
    is_tp.push_back(outcomes[i].matched);
  }

  // Precision envelope: best precision at this rank or any later one.
  std::vector<double> envelope(precision);
  for (std::size_t k = envelope.size(); k-- > 1;) envelope[k - 1] = std::max(envelope[k - 1], envelope[k]);

  if (mode == ApMode::eleven_point) {
    double sum = 0.0;
    for (int step = 0; step <= 10; ++step) {
      const double threshold = step / 10.0;
      const auto it = std::find_if(recall.begin(), recall.end(), [&](double r) { return r >= threshold; });
      if (it != recall.end()) sum += envelope[static_cast<std::size_t>(it - recall.begin())];
    }
    return sum / 11.0;
  }
  // Each true positive raises recall by exactly 1 / num_gt.
  double sum = 0.0;
  for (std::size_t k = 0; k < envelope.size(); ++k) {
    if (is_tp[k]) sum += envelope[k];
  }
  return sum / static_cast<double>(num_gt);
}

EvalReport evaluate(std::span<const Detection> dets, std::span<const GroundTruth> gts,
                    double iou_threshold, ApMode mode) {
  EvalReport report;
  report.iou_threshold = iou_threshold;
  report.mode = mode;

  // category -> image -> indices
  std::map<std::string, std::map<std::string, std::vector<std::size_t>>> det_groups;
  std::map<std::string, std::map<std::string, std::vector<std::size_t>>> gt_groups;
  for (std::size_t i = 0; i < dets.size(); ++i) det_groups[dets[i].category][dets[i].image_id].push_back(i);
  for (std::size_t i = 0; i < gts.size(); ++i) gt_groups[gts[i].category][gts[i].image_id].push_back(i);
  for (const auto& [category, unused] : gt_groups) report.per_class[category];
  for (const auto& [category, unused] : det_groups) report.per_class[category];

  for (auto& [category, result] : report.per_class) {
    for (const auto& [image, indices] : gt_groups[category]) {
      for (const std::size_t g : indices) result.num_gt += gts[g].difficulty == 0 ? 1 : 0;
    }
    std::vector<ScoredOutcome> outcomes;
    std::vector<std::size_t> outcome_of_det(dets.size());
    for (const auto& [image, det_indices] : det_groups[category]) {
      std::vector<Detection> image_dets;
      for (const std::size_t d : det_indices) image_dets.push_back(dets[d]);
      std::vector<GroundTruth> image_gts;
      if (auto it = gt_groups[category].find(image); it != gt_groups[category].end()) {
        for (const std::size_t g : it->second) image_gts.push_back(gts[g]);
      }
      for (const Match& m : match_detections(image_dets, image_gts, iou_threshold)) {
        const std::size_t d = det_indices[m.det_index];
        outcome_of_det[d] = outcomes.size();
        outcomes.push_back({dets[d].score, m.matched, m.ignored});
      }
    }
    // Restore global input order so score ties resolve by input position.
    std::vector<ScoredOutcome> ordered;
    ordered.reserve(outcomes.size());
    for (std::size_t d = 0; d < dets.size(); ++d) {
      if (dets[d].category == category) ordered.push_back(outcomes[outcome_of_det[d]]);
    }
    result.num_det = ordered.size();
    for (const auto& o : ordered) {
      if (o.ignored) {
        ++result.ignored;
      } else if (o.matched) {
        ++result.true_positives;
      } else {
        ++result.false_positives;
      }
    }
    result.ap = average_precision(ordered, result.num_gt, mode);
  }

  double sum = 0.0;
  std::size_t scored = 0;
  for (const auto& [category, result] : report.per_class) {
    if (result.num_gt == 0) continue;
    sum += result.ap;
    ++scored;
  }
  report.map_score = scored == 0 ? 0.0 : sum / static_cast<double>(scored);
  return report;
}

std::vector<Detection> to_detections(std::span<const DetectionRecord> records) {
  std::vector<Detection> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back({r.image_id, r.category, r.score, quad_to_box(r.quad).box});
  return out;
}

std::vector<GroundTruth> to_ground_truth(std::span<const AnnotationFile> files) {
  std::vector<GroundTruth> out;
  for (const auto& file : files) {
    for (const auto& e : file.entries) {
      out.push_back({file.image_id, e.record.category, e.record.box, e.record.difficulty});
    }
  }
  return out;
}

nlohmann::json to_json(const EvalReport& report) {
  nlohmann::json classes = nlohmann::json::object();
  for (const auto& [category, r] : report.per_class) {
    classes[category] = {{"ap", r.ap},
                         {"num_gt", r.num_gt},
                         {"num_det", r.num_det},
                         {"true_positives", r.true_positives},
                         {"false_positives", r.false_positives},
                         {"ignored", r.ignored}};
  }
  return {{"map", report.map_score},
          {"iou_threshold", report.iou_threshold},
          {"mode", to_string(report.mode)},
          {"per_class", classes}};
}

std::string format_report_table(const EvalReport& report) {
  std::string out = fmt::format("{:<24} {:>8} {:>8} {:>8}\n", "class", "num_gt", "num_det", "AP");
  for (const auto& [category, r] : report.per_class) {
    out += fmt::format("{:<24} {:>8} {:>8} {:>8}\n", category, r.num_gt, r.num_det,
                       r.num_gt == 0 ? std::string("-") : fmt::format("{:.4f}", r.ap));
  }
  out += fmt::format("mAP {:.4f} (iou {:.2f}, {})\n", report.map_score, report.iou_threshold,
                     to_string(report.mode));
  return out;
}

}  // namespace nbbox
