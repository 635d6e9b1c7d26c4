#pragma once

// Detection evaluation: greedy rotated-IoU matching, per-class average
// precision and mAP (unweighted mean of AP over classes that have ground
// truth).

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "nbbox/annotations.hpp"
#include "nbbox/geometry.hpp"

namespace nbbox {

enum class ApMode { eleven_point, all_point };

/// "11pt" or "all"; throws InvalidInput otherwise.
ApMode parse_ap_mode(std::string_view name);
std::string to_string(ApMode mode);

struct Detection {
  std::string image_id;
  std::string category;
  double score = 0.0;
  OrientedBoxd box;
};

struct GroundTruth {
  std::string image_id;
  std::string category;
  OrientedBoxd box;
  /// > 0 marks an ignore region.
  int difficulty = 0;
};

struct Match {
  std::size_t det_index = 0;   // into the detections passed in
  bool matched = false;        // true positive
  bool ignored = false;        // hit a difficult object; neither TP nor FP
  std::optional<std::size_t> gt_index;
  double iou = 0.0;
};

/// Matches detections of one image and one class. Detections are visited by
/// descending score (ties keep input order); each takes the candidate with the
/// highest IoU among unmatched normal objects and all difficult objects (ties
/// go to the lower index). At or above the threshold, a normal object becomes
/// matched and a difficult one makes the detection ignored. Results are in
/// visiting order.
std::vector<Match> match_detections(std::span<const Detection> dets, std::span<const GroundTruth> gts,
                                    double iou_threshold);

struct ScoredOutcome {
  double score = 0.0;
  bool matched = false;
  bool ignored = false;
};

/// AP from the outcomes of every detection of one class, across images.
/// Outcomes are ranked by descending score, ties in the given order; ignored
/// ones are dropped. Returns 0 when num_gt == 0.
double average_precision(std::span<const ScoredOutcome> outcomes, std::size_t num_gt, ApMode mode);

struct ClassResult {
  double ap = 0.0;
  std::size_t num_gt = 0;  // non-difficult objects
  std::size_t num_det = 0;
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t ignored = 0;
};

struct EvalReport {
  std::map<std::string, ClassResult> per_class;
  double map_score = 0.0;
  double iou_threshold = 0.5;
  ApMode mode = ApMode::eleven_point;
};

EvalReport evaluate(std::span<const Detection> dets, std::span<const GroundTruth> gts,
                    double iou_threshold = 0.5, ApMode mode = ApMode::eleven_point);

std::vector<Detection> to_detections(std::span<const DetectionRecord> records);
std::vector<GroundTruth> to_ground_truth(std::span<const AnnotationFile> files);

nlohmann::json to_json(const EvalReport& report);
std::string format_report_table(const EvalReport& report);

}  // namespace nbbox
