#include "nbbox/noise_config.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "nbbox/error.hpp"

namespace nbbox {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct Location {
  const std::string& source;
  std::size_t line;
  std::string key;

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(source, line, key, what); }
};

bool parse_bool(std::string_view v, const Location& loc) {
  if (v == "true") return true;
  if (v == "false") return false;
  loc.fail("expected true or false, got '" + std::string(v) + "'");
}

double parse_real(std::string_view v, const Location& loc) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    loc.fail("expected a number, got '" + std::string(v) + "'");
  }
  return out;
}

std::int64_t parse_integer(std::string_view v, const Location& loc) {
  std::int64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    loc.fail("expected an integer, got '" + std::string(v) + "'");
  }
  return out;
}

using Setter = std::function<void(NoiseConfig&, std::string_view, const Location&)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"scale_enabled", [](auto& c, auto v, auto& l) { c.scale_enabled = parse_bool(v, l); }},
      {"s_min", [](auto& c, auto v, auto& l) { c.s_min = parse_real(v, l); }},
      {"s_max", [](auto& c, auto v, auto& l) { c.s_max = parse_real(v, l); }},
      {"isotropic_scale", [](auto& c, auto v, auto& l) { c.isotropic_scale = parse_bool(v, l); }},
      {"rotate_enabled", [](auto& c, auto v, auto& l) { c.rotate_enabled = parse_bool(v, l); }},
      {"r_min", [](auto& c, auto v, auto& l) { c.r_min = parse_real(v, l); }},
      {"r_max", [](auto& c, auto v, auto& l) { c.r_max = parse_real(v, l); }},
      {"translate_enabled", [](auto& c, auto v, auto& l) { c.translate_enabled = parse_bool(v, l); }},
      {"t_min", [](auto& c, auto v, auto& l) { c.t_min = parse_integer(v, l); }},
      {"t_max", [](auto& c, auto v, auto& l) { c.t_max = parse_integer(v, l); }},
      {"isotropic_translate",
       [](auto& c, auto v, auto& l) { c.isotropic_translate = parse_bool(v, l); }},
      {"gamma", [](auto& c, auto v, auto& l) { c.gamma = parse_integer(v, l); }},
  };
  return table;
}

struct Section {
  std::string name;
  std::size_t line = 0;
  NoiseConfig config;
  std::set<std::string, std::less<>> seen;
};

std::vector<Section> parse_sections(std::string_view text, const std::string& source) {
  std::vector<Section> sections(1);
  sections[0].name = "default";
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ParseError(source, line_no, "", "malformed section header");
      }
      Section next;
      next.name = std::string(trim(line.substr(1, line.size() - 2)));
      next.line = line_no;
      for (std::size_t i = 1; i < sections.size(); ++i) {
        if (sections[i].name == next.name) throw ParseError(source, line_no, "", "duplicate section '" + next.name + "'");
      }
      // Sections inherit everything set above the first header.
      next.config = sections.front().config;
      sections.push_back(std::move(next));
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(source, line_no, "", "expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    const Location loc{source, line_no, key};
    const auto it = setters().find(key);
    if (it == setters().end()) loc.fail("unknown key");
    auto& current = sections.back();
    if (!current.seen.insert(key).second) loc.fail("duplicate key");
    it->second(current.config, value, loc);
  }
  for (const auto& section : sections) {
    try {
      validate(section.config);
    } catch (const InvalidConfig& e) {
      throw ParseError(source, section.line, "", e.what());
    }
  }
  return sections;
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

NoiseConfig parse_noise_config(std::string_view text, const std::string& source) {
  auto sections = parse_sections(text, source);
  if (sections.size() > 1) {
    throw ParseError(source, sections[1].line, "", "sections are only allowed in grid files");
  }
  return sections.front().config;
}

NoiseConfig load_noise_config(const std::filesystem::path& path) {
  return parse_noise_config(read_text_file(path), path.string());
}

std::vector<NamedConfig> parse_noise_grid(std::string_view text, const std::string& source) {
  auto sections = parse_sections(text, source);
  std::vector<NamedConfig> out;
  const std::size_t first = sections.size() > 1 ? 1 : 0;
  for (std::size_t i = first; i < sections.size(); ++i) {
    out.push_back({sections[i].name, sections[i].config});
  }
  return out;
}

std::vector<NamedConfig> load_noise_grid(const std::filesystem::path& path) {
  return parse_noise_grid(read_text_file(path), path.string());
}

std::string format_noise_config(const NoiseConfig& cfg) {
  return fmt::format(
      "scale_enabled = {}\n"
      "s_min = {}\n"
      "s_max = {}\n"
      "isotropic_scale = {}\n"
      "rotate_enabled = {}\n"
      "r_min = {}\n"
      "r_max = {}\n"
      "translate_enabled = {}\n"
      "t_min = {}\n"
      "t_max = {}\n"
      "isotropic_translate = {}\n"
      "gamma = {}\n",
      cfg.scale_enabled, cfg.s_min, cfg.s_max, cfg.isotropic_scale, cfg.rotate_enabled, cfg.r_min,
      cfg.r_max, cfg.translate_enabled, cfg.t_min, cfg.t_max, cfg.isotropic_translate, cfg.gamma);
}

}  // namespace nbbox
