#include "nbbox/cli.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <thread>

#include "nbbox/analysis.hpp"
#include "nbbox/annotations.hpp"
#include "nbbox/error.hpp"
#include "nbbox/noise_config.hpp"

namespace nbbox::cli {

namespace fs = std::filesystem;

namespace {

struct FileOutcome {
  std::size_t records = 0;
  std::size_t gated = 0;
  std::optional<std::string> error;
  std::vector<std::string> warnings;
};

void require_directory(const fs::path& dir, const char* what) {
  if (!fs::is_directory(dir)) throw InvalidInput(fmt::format("{} '{}' is not a directory", what, dir.string()));
}

void write_file_atomically(const fs::path& path, const std::string& contents) {
  fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << contents;
    if (!out.flush()) throw Error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

FileOutcome augment_file(const AugmentOptions& options, const fs::path& path) {
  FileOutcome outcome;
  try {
    const fs::path rel = fs::relative(path, options.ann_dir);
    const std::string stem = path.stem().string();
    auto file = read_dota_annotations(read_text_file(path), stem, rel.generic_string());
    outcome.warnings = file.warnings;

    const auto records = file.records();
    auto stream = RngStream(options.seed).substream(substream_label(stem, options.epoch_tag));
    auto noisy = nbbox_apply(records, options.config, stream);
    for (std::size_t i = 0; i < noisy.size(); ++i) {
      if (is_gated(records[i].box, options.config)) {
        ++outcome.gated;
      } else if (options.clip) {
        noisy[i].box = clip_center(noisy[i].box, *options.clip);
      }
    }
    file.set_records(noisy);
    outcome.records = noisy.size();
    write_file_atomically(options.out_dir / rel, write_dota_annotations(file));
  } catch (const std::exception& e) {
    outcome.error = e.what();
  }
  return outcome;
}

/// Loads every annotation file below dir; failures are reported to err and
/// counted in `failed`.
std::vector<AnnotationFile> load_annotation_dir(const fs::path& dir, std::ostream& err, std::size_t& failed) {
  std::vector<AnnotationFile> files;
  for (const auto& path : list_txt_files(dir)) {
    try {
      files.push_back(read_dota_annotations(read_text_file(path), path.stem().string(),
                                            fs::relative(path, dir).generic_string()));
      for (const auto& w : files.back().warnings) err << "warning: " << w << '\n';
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      ++failed;
    }
  }
  return files;
}

}  // namespace

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag) {
  if (flag) return *flag;
  const char* env = std::getenv("NBBOX_SEED");
  if (env == nullptr || *env == '\0') return 0;
  const std::string_view text(env);
  std::uint64_t seed = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw InvalidInput("NBBOX_SEED must be an unsigned 64-bit integer, got '" + std::string(text) + "'");
  }
  return seed;
}

OrientedBoxd clip_center(const OrientedBoxd& box, const ClipBounds& bounds) {
  OrientedBoxd out = box;
  out.center.x() = std::clamp(box.center.x(), 0.0, bounds.width);
  out.center.y() = std::clamp(box.center.y(), 0.0, bounds.height);
  return out;
}

AugmentSummary augment_directory(const AugmentOptions& options) {
  validate(options.config);
  require_directory(options.ann_dir, "annotation directory");
  if (options.clip && !(options.clip->width > 0.0 && options.clip->height > 0.0)) {
    throw InvalidInput("--clip needs positive width and height");
  }
  fs::create_directories(options.out_dir);

  const auto paths = list_txt_files(options.ann_dir);
  std::vector<FileOutcome> outcomes(paths.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < paths.size(); i = next++) outcomes[i] = augment_file(options, paths[i]);
  };
  const unsigned threads = std::clamp<unsigned>(options.jobs, 1U, static_cast<unsigned>(std::max<std::size_t>(paths.size(), 1)));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }

  AugmentSummary summary;
  summary.files = paths.size();
  for (auto& outcome : outcomes) {
    summary.records += outcome.records;
    summary.gated += outcome.gated;
    for (auto& w : outcome.warnings) summary.errors.push_back("warning: " + std::move(w));
    if (outcome.error) {
      ++summary.failed;
      summary.errors.push_back("error: " + *outcome.error);
    }
  }
  return summary;
}

int run_augment(const AugmentOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const auto summary = augment_directory(options);
    for (const auto& line : summary.errors) err << line << '\n';
    out << fmt::format("{} files, {} records, {} gated, {} failed\n", summary.files, summary.records,
                       summary.gated, summary.failed);
    return summary.failed == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int run_eval(const EvalOptions& options, std::ostream& out, std::ostream& err) {
  try {
    require_directory(options.ann_dir, "annotation directory");
    require_directory(options.det_dir, "detection directory");
    std::size_t failed = 0;
    const auto gt_files = load_annotation_dir(options.ann_dir, err, failed);

    std::vector<DetectionRecord> records;
    for (const auto& path : list_txt_files(options.det_dir)) {
      try {
        auto dets = read_dota_detection_file(read_text_file(path), detection_file_category(path),
                                             fs::relative(path, options.det_dir).generic_string());
        records.insert(records.end(), std::make_move_iterator(dets.begin()), std::make_move_iterator(dets.end()));
      } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        ++failed;
      }
    }

    const auto report =
        evaluate(to_detections(records), to_ground_truth(gt_files), options.iou_threshold, options.mode);
    if (options.json) {
      out << to_json(report).dump(2) << '\n';
    } else {
      out << format_report_table(report);
    }
    return failed == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int run_analyze(const AnalyzeOptions& options, std::ostream& out, std::ostream& err) {
  try {
    require_directory(options.ann_dir, "annotation directory");
    std::size_t failed = 0;
    const auto files = load_annotation_dir(options.ann_dir, err, failed);
    const auto stats = discrepancy_report(files);
    for (const auto& w : stats.warnings) err << "warning: " << w << '\n';
    const std::string json = to_json(stats).dump(2) + "\n";
    if (options.out.empty()) {
      out << json;
    } else {
      write_file_atomically(options.out, json);
    }
    (options.out.empty() ? err : out)
        << fmt::format("mean_iou {:.4f} over {} records\n", stats.mean_iou, stats.per_record.size());
    return failed == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int run_sweep(const SweepOptions& options, std::ostream& out, std::ostream& err) {
  try {
    require_directory(options.ann_dir, "annotation directory");
    const auto grid = load_noise_grid(options.grid);
    std::size_t failed = 0;
    const auto files = load_annotation_dir(options.ann_dir, err, failed);
    const auto result = noise_sweep(files, grid, options.seed, options.trials);
    const std::string csv = sweep_to_csv(result);
    if (options.out.empty()) {
      out << csv;
    } else {
      write_file_atomically(options.out, csv);
    }
    (options.out.empty() ? err : out)
        << fmt::format("{} configs, {} trials, seed {}\n", result.grid.size(), result.trials, result.seed);
    return failed == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace nbbox::cli
