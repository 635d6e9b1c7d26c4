#include <gtest/gtest.h>

#include <cmath>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>

#include "nbbox/analysis.hpp"
#include "nbbox/error.hpp"
#include "support/oracles.hpp"

namespace nbbox {
namespace {

const std::filesystem::path kData = NBBOX_TEST_DATA_DIR;

std::vector<AnnotationFile> load_dir(const std::filesystem::path& dir) {
  std::vector<AnnotationFile> files;
  for (const auto& path : list_txt_files(dir)) {
    files.push_back(read_dota_annotations(read_text_file(path), path.stem().string()));
  }
  return files;
}

std::vector<AnnotationFile> synthetic_files(std::uint64_t seed, int boxes) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> pos(100, 900);
  std::uniform_real_distribution<double> size(20, 150);
  std::uniform_real_distribution<double> angle(-90, 90);
  std::vector<AnnotationRecord> records;
  for (int i = 0; i < boxes; ++i) records.push_back({{pos(gen), pos(gen), size(gen), size(gen), angle(gen)}, "ship", 0});
  return {make_annotation_file("synthetic", records)};
}

NoiseConfig translation_only(std::int64_t t) {
  NoiseConfig cfg = disabled_config();
  cfg.translate_enabled = true;
  cfg.t_min = -t;
  cfg.t_max = t;
  cfg.gamma = 0;
  return cfg;
}

TEST(Discrepancy, RectangleIsExact) {
  const std::vector files{read_dota_annotations("0 0 4 0 4 2 0 2 ship 0\n", "img")};
  const auto stats = discrepancy_report(files);
  ASSERT_EQ(stats.per_record.size(), 1u);
  EXPECT_NEAR(stats.per_record[0].iou_ann_vs_minrect, 1.0, 1e-12);
  EXPECT_NEAR(stats.per_record[0].area_ratio, 1.0, 1e-12);
  EXPECT_EQ(stats.histogram[kHistogramBuckets - 1], 1u);
}

TEST(Discrepancy, TrapezoidMatchesRaster) {
  const std::vector files{read_dota_annotations("0 0 4 0 4 2 1 2 ship 0\n", "img")};
  const auto stats = discrepancy_report(files);
  const auto& rec = stats.per_record[0];
  EXPECT_NEAR(rec.iou_ann_vs_minrect, 0.875, 1e-12);
  EXPECT_NEAR(rec.area_ratio, 8.0 / 7.0, 1e-12);
  EXPECT_FALSE(rec.non_convex);
  const oracle::Poly trap{{0, 0}, {4, 0}, {4, 2}, {1, 2}};
  const oracle::Poly rect{{0, 0}, {4, 0}, {4, 2}, {0, 2}};
  EXPECT_NEAR(rec.iou_ann_vs_minrect, oracle::raster_iou(trap, rect), 1e-3);
  EXPECT_EQ(stats.histogram[histogram_bucket(0.875)], 1u);
}

TEST(Discrepancy, DegenerateAndConcaveQuadsAreFlagged) {
  const std::vector files{read_dota_annotations("0 0 1 1 2 2 3 3 ship 0\n0 0 4 0 1 1 0 4 ship 0\n", "img")};
  const auto stats = discrepancy_report(files);
  ASSERT_EQ(stats.per_record.size(), 2u);
  EXPECT_TRUE(stats.per_record[0].degenerate);
  EXPECT_TRUE(std::isinf(stats.per_record[0].area_ratio));
  EXPECT_TRUE(stats.per_record[1].non_convex);
  EXPECT_FALSE(stats.warnings.empty());
  const auto json = to_json(stats);
  EXPECT_TRUE(json.at("records").at(0).at("area_ratio").is_null());
}

TEST(Discrepancy, JitteredSampleIsBelowOne) {
  const auto stats = discrepancy_report(load_dir(kData / "dota_sample"));
  EXPECT_EQ(stats.per_record.size(), 22u);
  EXPECT_LT(stats.mean_iou, 1.0);
  EXPECT_GT(stats.mean_iou, 0.8);
  std::size_t total = 0;
  for (auto n : stats.histogram) total += n;
  EXPECT_EQ(total, stats.per_record.size());
}

TEST(Discrepancy, EmptyInputThrows) {
  EXPECT_THROW(discrepancy_report({}), InvalidInput);
}

TEST(HistogramBucket, Edges) {
  EXPECT_EQ(histogram_bucket(0.0), 0u);
  EXPECT_EQ(histogram_bucket(0.049), 0u);
  EXPECT_EQ(histogram_bucket(0.05), 1u);
  EXPECT_EQ(histogram_bucket(1.0), kHistogramBuckets - 1);
}

TEST(Percentile, LinearInterpolation) {
  EXPECT_EQ(percentile({3, 1, 2}, 0.0), 1.0);
  EXPECT_EQ(percentile({3, 1, 2}, 1.0), 3.0);
  EXPECT_EQ(percentile({3, 1, 2}, 0.5), 2.0);
  EXPECT_NEAR(percentile({0, 10}, 0.05), 0.5, 1e-15);
  EXPECT_THROW(percentile({}, 0.5), InvalidInput);
}

TEST(NoiseSweep, IdentityConfigGivesOne) {
  const auto files = synthetic_files(1, 100);
  const std::vector<NamedConfig> grid{{"none", disabled_config()}};
  const auto result = noise_sweep(files, grid, 0, 2);
  ASSERT_EQ(result.grid.size(), 1u);
  EXPECT_EQ(result.grid[0].mean_self_iou, 1.0);
  EXPECT_EQ(result.grid[0].p05_self_iou, 1.0);
  EXPECT_EQ(result.grid[0].samples, 200u);
}

TEST(NoiseSweep, LargerTranslationsDegradeMore) {
  const auto files = synthetic_files(2, 300);
  std::vector<NamedConfig> grid;
  for (std::int64_t t : {1, 5, 10, 20}) grid.push_back({"t" + std::to_string(t), translation_only(t)});
  const auto result = noise_sweep(files, grid, 7, 3);
  for (std::size_t i = 1; i < result.grid.size(); ++i) {
    EXPECT_LT(result.grid[i].mean_self_iou, result.grid[i - 1].mean_self_iou);
  }
}

TEST(NoiseSweep, TinyRotationBarelyMatters) {
  const auto files = synthetic_files(3, 300);
  NoiseConfig cfg = disabled_config();
  cfg.rotate_enabled = true;
  cfg.gamma = 0;
  const std::vector<NamedConfig> grid{{"rot", cfg}};
  const auto result = noise_sweep(files, grid, 1, 1);
  EXPECT_GT(result.grid[0].p05_self_iou, 0.999);
  EXPECT_LT(result.grid[0].mean_self_iou, 1.0);
}

TEST(NoiseSweep, FractionGatedMatchesDirectCount) {
  const auto files = load_dir(kData / "augment_fixture");
  std::size_t total = 0;
  std::size_t small = 0;
  for (const auto& f : files) {
    for (const auto& e : f.entries) {
      ++total;
      small += (e.record.box.w <= 16 || e.record.box.h <= 16) ? 1 : 0;
    }
  }
  const std::vector<NamedConfig> grid{{"default", NoiseConfig{}}};
  const auto result = noise_sweep(files, grid, 5, 2);
  EXPECT_DOUBLE_EQ(result.grid[0].frac_gated, static_cast<double>(small) / static_cast<double>(total));
  EXPECT_EQ(result.grid[0].samples, 2 * (total - small));
  EXPECT_GT(small, 0u);
}

TEST(NoiseSweep, CsvHasHeaderAndOneRowPerConfig) {
  const auto files = synthetic_files(4, 20);
  const std::vector<NamedConfig> grid{{"a", disabled_config()}, {"b", translation_only(2)}};
  const auto csv = sweep_to_csv(noise_sweep(files, grid, 0, 1));
  std::istringstream in(csv);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_TRUE(lines[0].starts_with("name,"));
  EXPECT_TRUE(lines[0].ends_with("mean_self_iou,p05_self_iou,frac_gated"));
  EXPECT_TRUE(lines[1].starts_with("a,"));
  EXPECT_TRUE(lines[2].starts_with("b,"));
}

TEST(NoiseSweep, RejectsZeroTrials) {
  const auto files = synthetic_files(4, 2);
  const std::vector<NamedConfig> grid{{"a", NoiseConfig{}}};
  EXPECT_THROW(noise_sweep(files, grid, 0, 0), InvalidInput);
}

}  // namespace
}  // namespace nbbox
