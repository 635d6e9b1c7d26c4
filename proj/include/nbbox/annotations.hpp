#pragma once

// DOTA-style text formats.
//
// Ground truth, one file per image:
//   imagesource:GoogleEarth            (optional header)
//   gsd:0.146                          (optional header)
//   x1 y1 x2 y2 x3 y3 x4 y4 category difficulty
//
// Detections, one file per category (Task 1 submission layout):
//   image_id score x1 y1 x2 y2 x3 y3 x4 y4

#include <array>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nbbox/geometry.hpp"
#include "nbbox/transform.hpp"

namespace nbbox {

/// Four corners as written in the file: x1 y1 x2 y2 x3 y3 x4 y4.
struct Quad {
  std::array<double, 8> coords{};

  std::array<Point2d, 4> corners() const;
  static Quad from_corners(const std::array<Point2d, 4>& corners);

  friend bool operator==(const Quad&, const Quad&) = default;
};

/// Minimum-area rectangle of the quad's corners, canonicalized.
MinRectResult<double> quad_to_box(const Quad& quad);

struct AnnotationEntry {
  /// Current labels. Edit `record.box` to perturb the object.
  AnnotationRecord record;
  /// Labels exactly as parsed; an entry equal to them is written verbatim.
  AnnotationRecord source;
  Quad quad;
  /// Source line without its terminator.
  std::string source_text;
  bool degenerate = false;

  bool is_modified() const { return !(record == source); }
};

struct AnnotationFile {
  struct Line {
    enum class Kind { header, record, other };
    Kind kind = Kind::other;
    std::size_t index = 0;  // into header_lines or entries
    std::string text;       // verbatim, for Kind::other
    std::string eol;        // "\n", "\r\n" or "" for a final unterminated line
  };

  std::string image_id;
  std::vector<std::string> header_lines;
  std::vector<AnnotationEntry> entries;
  /// Non-fatal findings such as degenerate quadrilaterals.
  std::vector<std::string> warnings;
  /// Source line layout, used for byte-exact output. Empty for files built in
  /// memory.
  std::vector<Line> layout;

  std::vector<AnnotationRecord> records() const;
  /// Replaces every entry's current record; sizes must match.
  void set_records(std::span<const AnnotationRecord> records);
};

/// Builds an in-memory file whose quads are the boxes' corners.
AnnotationFile make_annotation_file(std::string image_id, std::span<const AnnotationRecord> records);

/// Throws ParseError naming `source` (defaults to image_id), line and field.
AnnotationFile read_dota_annotations(std::string_view text, std::string image_id,
                                     std::string source = {});

/// Headers, then records. Unmodified records are emitted verbatim; modified
/// ones as the corners of their box with one decimal, starting from the
/// corner nearest the source quad's first point.
std::string write_dota_annotations(const AnnotationFile& file);

struct DetectionRecord {
  std::string image_id;
  double score = 0.0;
  Quad quad;
  std::string category;
};

std::vector<DetectionRecord> read_dota_detection_file(std::string_view text,
                                                      const std::string& category,
                                                      const std::string& source = {});

/// `per_class` maps category to file contents.
std::vector<DetectionRecord> read_dota_detections(const std::map<std::string, std::string>& per_class);

std::string format_detection_line(const DetectionRecord& det);

/// Sorted list of regular `.txt` files below `dir`, recursively.
std::vector<std::filesystem::path> list_txt_files(const std::filesystem::path& dir);

/// Category named by a detection file: the stem, minus a "Task1_" prefix.
std::string detection_file_category(const std::filesystem::path& path);

}  // namespace nbbox
