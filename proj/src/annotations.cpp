#include "nbbox/annotations.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "nbbox/error.hpp"

namespace nbbox {

namespace {

constexpr std::array<const char*, 8> kCoordNames = {"x1", "y1", "x2", "y2", "x3", "y3", "x4", "y4"};

struct RawLine {
  std::string_view text;
  std::string_view eol;
};

std::vector<RawLine> split_lines(std::string_view text) {
  std::vector<RawLine> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      lines.push_back({text.substr(pos), {}});
      break;
    }
    std::size_t end = nl;
    std::size_t eol_start = nl;
    if (end > pos && text[end - 1] == '\r') eol_start = end - 1;
    lines.push_back({text.substr(pos, eol_start - pos), text.substr(eol_start, nl + 1 - eol_start)});
    pos = nl + 1;
  }
  return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    pos = line.find_first_not_of(" \t\r", pos);
    if (pos == std::string_view::npos) break;
    auto end = line.find_first_of(" \t\r", pos);
    if (end == std::string_view::npos) end = line.size();
    fields.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return fields;
}

bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

double parse_coordinate(std::string_view field, const std::string& source, std::size_t line,
                        const char* name) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ParseError(source, line, name, "not a number: '" + std::string(field) + "'");
  }
  if (!std::isfinite(v)) throw ParseError(source, line, name, "not finite");
  return v;
}

Quad parse_quad(std::span<const std::string_view> fields, const std::string& source, std::size_t line) {
  Quad quad;
  for (std::size_t i = 0; i < 8; ++i) {
    quad.coords[i] = parse_coordinate(fields[i], source, line, kCoordNames[i]);
  }
  return quad;
}

std::string format_coord(double v) {
  std::string s = fmt::format("{:.1f}", v);
  if (s == "-0.0") s = "0.0";
  return s;
}

/// Box corners, reordered to follow the source quad's winding and to start
/// at the corner closest to its first point.
std::array<Point2d, 4> aligned_corners(const OrientedBoxd& box, const Quad& source) {
  auto corners = box_corners(box);
  const auto src = source.corners();
  if (signed_area<double>(src) < 0.0) std::reverse(corners.begin(), corners.end());
  std::size_t best_shift = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t shift = 0; shift < 4; ++shift) {
    double cost = 0.0;
    for (std::size_t i = 0; i < 4; ++i) cost += (corners[(i + shift) % 4] - src[i]).squaredNorm();
    if (cost < best_cost) {
      best_cost = cost;
      best_shift = shift;
    }
  }
  std::rotate(corners.begin(), corners.begin() + static_cast<std::ptrdiff_t>(best_shift), corners.end());
  return corners;
}

std::string format_entry(const AnnotationEntry& entry) {
  if (!entry.is_modified()) return entry.source_text;
  const auto corners = aligned_corners(entry.record.box, entry.quad);
  std::string out;
  for (const auto& c : corners) {
    out += format_coord(c.x());
    out += ' ';
    out += format_coord(c.y());
    out += ' ';
  }
  out += entry.record.category;
  out += ' ';
  out += std::to_string(entry.record.difficulty);
  return out;
}

}  // namespace

std::array<Point2d, 4> Quad::corners() const {
  return {Point2d(coords[0], coords[1]), Point2d(coords[2], coords[3]), Point2d(coords[4], coords[5]),
          Point2d(coords[6], coords[7])};
}

Quad Quad::from_corners(const std::array<Point2d, 4>& corners) {
  Quad q;
  for (std::size_t i = 0; i < 4; ++i) {
    q.coords[2 * i] = corners[i].x();
    q.coords[2 * i + 1] = corners[i].y();
  }
  return q;
}

MinRectResult<double> quad_to_box(const Quad& quad) {
  const auto corners = quad.corners();
  return min_area_rect_checked<double>(corners);
}

std::vector<AnnotationRecord> AnnotationFile::records() const {
  std::vector<AnnotationRecord> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.record);
  return out;
}

void AnnotationFile::set_records(std::span<const AnnotationRecord> records) {
  if (records.size() != entries.size()) {
    throw InvalidInput("set_records: expected " + std::to_string(entries.size()) + " records, got " +
                       std::to_string(records.size()));
  }
  for (std::size_t i = 0; i < records.size(); ++i) entries[i].record = records[i];
}

AnnotationFile make_annotation_file(std::string image_id, std::span<const AnnotationRecord> records) {
  AnnotationFile file;
  file.image_id = std::move(image_id);
  for (const auto& r : records) {
    validate(r);
    AnnotationEntry e;
    e.record = r;
    e.source = r;
    e.quad = Quad::from_corners(box_corners(r.box));
    e.source_text = fmt::format("{} {} {} {} {} {} {} {} {} {}", e.quad.coords[0], e.quad.coords[1],
                                e.quad.coords[2], e.quad.coords[3], e.quad.coords[4],
                                e.quad.coords[5], e.quad.coords[6], e.quad.coords[7], r.category,
                                r.difficulty);
    file.entries.push_back(std::move(e));
  }
  return file;
}

AnnotationFile read_dota_annotations(std::string_view text, std::string image_id, std::string source) {
  if (image_id.empty()) throw InvalidInput("image_id must be non-empty");
  if (source.empty()) source = image_id;

  AnnotationFile file;
  file.image_id = std::move(image_id);
  std::size_t line_no = 0;
  for (const auto& raw : split_lines(text)) {
    ++line_no;
    AnnotationFile::Line slot;
    slot.eol = std::string(raw.eol);
    if (raw.text.starts_with("imagesource:") || raw.text.starts_with("gsd:")) {
      slot.kind = AnnotationFile::Line::Kind::header;
      slot.index = file.header_lines.size();
      file.header_lines.emplace_back(raw.text);
      file.layout.push_back(std::move(slot));
      continue;
    }
    if (is_blank(raw.text)) {
      slot.text = std::string(raw.text);
      file.layout.push_back(std::move(slot));
      continue;
    }

    const auto fields = split_fields(raw.text);
    if (fields.size() < 10) {
      throw ParseError(source, line_no, "", "expected 10 fields, found " + std::to_string(fields.size()));
    }
    if (fields.size() > 10) {
      throw ParseError(source, line_no, "", "malformed line: " + std::to_string(fields.size()) +
                                                " fields, expected 10");
    }
    AnnotationEntry entry;
    entry.quad = parse_quad(fields, source, line_no);
    const auto rect = quad_to_box(entry.quad);
    entry.degenerate = rect.degenerate;
    if (rect.degenerate) {
      file.warnings.push_back(fmt::format("{}:{}: degenerate quadrilateral", source, line_no));
    }
    entry.record.box = rect.box;
    entry.record.category = std::string(fields[8]);
    const auto diff = fields[9];
    const auto [ptr, ec] = std::from_chars(diff.data(), diff.data() + diff.size(), entry.record.difficulty);
    if (ec != std::errc{} || ptr != diff.data() + diff.size() || entry.record.difficulty < 0) {
      throw ParseError(source, line_no, "difficulty",
                       "expected a non-negative integer, got '" + std::string(diff) + "'");
    }
    entry.source = entry.record;
    entry.source_text = std::string(raw.text);

    slot.kind = AnnotationFile::Line::Kind::record;
    slot.index = file.entries.size();
    file.entries.push_back(std::move(entry));
    file.layout.push_back(std::move(slot));
  }
  return file;
}

std::string write_dota_annotations(const AnnotationFile& file) {
  std::string out;
  if (file.layout.empty()) {
    for (const auto& h : file.header_lines) out += h + "\n";
    for (const auto& e : file.entries) out += format_entry(e) + "\n";
    return out;
  }
  std::size_t records_written = 0;
  for (const auto& slot : file.layout) {
    switch (slot.kind) {
      case AnnotationFile::Line::Kind::header:
        out += file.header_lines.at(slot.index);
        break;
      case AnnotationFile::Line::Kind::record:
        out += format_entry(file.entries.at(slot.index));
        ++records_written;
        break;
      case AnnotationFile::Line::Kind::other:
        out += slot.text;
        break;
    }
    out += slot.eol;
  }
  for (std::size_t i = records_written; i < file.entries.size(); ++i) {
    if (!out.empty() && out.back() != '\n') out += '\n';
    out += format_entry(file.entries[i]) + "\n";
  }
  return out;
}

std::vector<DetectionRecord> read_dota_detection_file(std::string_view text, const std::string& category,
                                                      const std::string& source) {
  const std::string& name = source.empty() ? category : source;
  std::vector<DetectionRecord> out;
  std::size_t line_no = 0;
  for (const auto& raw : split_lines(text)) {
    ++line_no;
    if (is_blank(raw.text)) continue;
    const auto fields = split_fields(raw.text);
    if (fields.size() != 10) {
      throw ParseError(name, line_no, "",
                       "expected 10 fields (image_id score x1 y1 ... y4), found " +
                           std::to_string(fields.size()));
    }
    DetectionRecord det;
    det.image_id = std::string(fields[0]);
    det.score = parse_coordinate(fields[1], name, line_no, "score");
    if (det.score < 0.0 || det.score > 1.0) {
      throw ParseError(name, line_no, "score", "must lie in [0, 1]");
    }
    det.quad = parse_quad(std::span(fields).subspan(2), name, line_no);
    det.category = category;
    out.push_back(std::move(det));
  }
  return out;
}

std::vector<DetectionRecord> read_dota_detections(const std::map<std::string, std::string>& per_class) {
  std::vector<DetectionRecord> out;
  for (const auto& [category, text] : per_class) {
    auto dets = read_dota_detection_file(text, category);
    out.insert(out.end(), std::make_move_iterator(dets.begin()), std::make_move_iterator(dets.end()));
  }
  return out;
}

std::string format_detection_line(const DetectionRecord& det) {
  const auto& c = det.quad.coords;
  return fmt::format("{} {} {} {} {} {} {} {} {} {}", det.image_id, det.score, c[0], c[1], c[2], c[3],
                     c[4], c[5], c[6], c[7]);
}

std::vector<std::filesystem::path> list_txt_files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::string detection_file_category(const std::filesystem::path& path) {
  std::string stem = path.stem().string();
  constexpr std::string_view kPrefix = "Task1_";
  if (stem.starts_with(kPrefix) && stem.size() > kPrefix.size()) stem.erase(0, kPrefix.size());
  return stem;
}

}  // namespace nbbox
