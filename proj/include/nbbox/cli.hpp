#pragma once

// Orchestration behind the `nbbox` executable. Each run_* returns the process
// exit status: 0 when every file succeeded, 1 otherwise.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nbbox/eval.hpp"
#include "nbbox/transform.hpp"

namespace nbbox::cli {

/// Seed precedence: explicit flag, then $NBBOX_SEED, then 0. Throws
/// InvalidInput when the variable is not an unsigned 64-bit integer.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag);

struct ClipBounds {
  double width = 0.0;
  double height = 0.0;
};

/// Clamps the box center into [0, width] x [0, height].
OrientedBoxd clip_center(const OrientedBoxd& box, const ClipBounds& bounds);

struct AugmentOptions {
  std::filesystem::path ann_dir;
  std::filesystem::path out_dir;
  NoiseConfig config;
  std::uint64_t seed = 0;
  std::string epoch_tag;
  std::optional<ClipBounds> clip;
  unsigned jobs = 1;
};

struct AugmentSummary {
  std::size_t files = 0;
  std::size_t records = 0;
  std::size_t gated = 0;
  std::size_t failed = 0;
  std::vector<std::string> errors;
};

/// Reads every `.txt` below ann_dir, perturbs it with substream
/// substream_label(stem, epoch_tag) of the seed, and writes it to the same
/// relative path below out_dir (write to a temporary, then rename). A file
/// that fails is reported and skipped; the rest are still processed.
AugmentSummary augment_directory(const AugmentOptions& options);

int run_augment(const AugmentOptions& options, std::ostream& out, std::ostream& err);

struct EvalOptions {
  std::filesystem::path ann_dir;
  std::filesystem::path det_dir;
  double iou_threshold = 0.5;
  ApMode mode = ApMode::eleven_point;
  bool json = false;
};

int run_eval(const EvalOptions& options, std::ostream& out, std::ostream& err);

struct AnalyzeOptions {
  std::filesystem::path ann_dir;
  std::filesystem::path out;
};

int run_analyze(const AnalyzeOptions& options, std::ostream& out, std::ostream& err);

struct SweepOptions {
  std::filesystem::path ann_dir;
  std::filesystem::path grid;
  std::uint64_t seed = 0;
  std::size_t trials = 1;
  std::filesystem::path out;
};

int run_sweep(const SweepOptions& options, std::ostream& out, std::ostream& err);

}  // namespace nbbox::cli
