// Copyright 2026 The Unicycle Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "unicycle/app/io.hpp"

#include <unistd.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "unicycle/error.hpp"

namespace unicycle::app {

namespace fs = std::filesystem;
using nlohmann::json;

void WriteFileAtomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  std::error_code ec;
  if (target.has_parent_path()) {
    fs::create_directories(target.parent_path(), ec);
    if (ec) {
      throw Error(ErrorCode::kIo, "cannot create directory '" +
                                      target.parent_path().string() + "': " + ec.message());
    }
  }
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      fs::remove(tmp, ec);
      throw Error(ErrorCode::kIo, "write to '" + tmp.string() + "' failed");
    }
  }
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw Error(ErrorCode::kIo, "cannot rename into '" + path + "': " + ec.message());
  }
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIo, "error reading '" + path + "'");
  return buf.str();
}

std::string CsvEscape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string FormatNumber(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // no "-0"
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.12g", v);
  return buf.data();
}

CsvTable::CsvTable(std::vector<std::string> header) : width_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) text_ += ',';
    text_ += CsvEscape(header[i]);
  }
  text_ += "\r\n";
}

void CsvTable::AddRow(const std::vector<std::string>& fields) {
  if (fields.size() != width_) {
    throw Error(ErrorCode::kInternal, "csv row has " + std::to_string(fields.size()) +
                                          " fields, header has " + std::to_string(width_));
  }
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) text_ += ',';
    text_ += CsvEscape(fields[i]);
  }
  text_ += "\r\n";
  ++rows_;
}

std::vector<std::vector<std::string>> ParseCsv(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool after_quote = false;
  bool any = false;  // current record has content
  auto end_field = [&] {
    record.push_back(field);
    field.clear();
    after_quote = false;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
          after_quote = true;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == ',') {
      end_field();
      any = true;
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      end_field();
      records.push_back(std::move(record));
      record.clear();
      any = false;
    } else if (c == '"') {
      if (!field.empty() || after_quote) throw Error(ErrorCode::kConfig, "csv: stray quote");
      quoted = true;
      any = true;
    } else {
      if (after_quote) throw Error(ErrorCode::kConfig, "csv: text after closing quote");
      field += c;
      any = true;
    }
  }
  if (quoted) throw Error(ErrorCode::kConfig, "csv: unterminated quoted field");
  if (any || !field.empty() || after_quote) {
    end_field();
    records.push_back(std::move(record));
  }
  return records;
}

namespace {

std::string Xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string Fixed(double v) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.2f", v);
  return buf.data();
}

std::string Tick(double v) {
  if (std::abs(v) < 1e-12) v = 0.0;
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.4g", v);
  return buf.data();
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void Add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void Settle() {
    if (!std::isfinite(lo)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi - lo < 1e-12 * std::max(1.0, std::abs(hi))) {
      const double pad = std::max(1e-3, 0.1 * std::abs(hi));
      lo -= pad;
      hi += pad;
    }
  }
};

// 1-2-5 step giving roughly `target` intervals.
double NiceStep(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double f = raw / mag;
  const double nice = f < 1.5 ? 1.0 : f < 3.5 ? 2.0 : f < 7.5 ? 5.0 : 10.0;
  return nice * mag;
}

constexpr std::array<const char*, 8> kColors = {
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

constexpr double kPanelW = 520.0;
constexpr double kPanelH = 320.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 50.0;

void DrawPanel(std::ostringstream& out, const Panel& panel, double ox, double oy) {
  Range xr;
  Range yr;
  for (const auto& s : panel.series) {
    for (double v : s.x) xr.Add(v);
    for (double v : s.y) yr.Add(v);
  }
  xr.Settle();
  yr.Settle();
  const double pw = kPanelW - kLeft - kRight;
  const double ph = kPanelH - kTop - kBottom;
  if (panel.equal_aspect) {
    // Widen whichever range is too narrow for a common scale.
    const double sx = (xr.hi - xr.lo) / pw;
    const double sy = (yr.hi - yr.lo) / ph;
    if (sx > sy) {
      const double mid = 0.5 * (yr.lo + yr.hi);
      yr.lo = mid - 0.5 * sx * ph;
      yr.hi = mid + 0.5 * sx * ph;
    } else {
      const double mid = 0.5 * (xr.lo + xr.hi);
      xr.lo = mid - 0.5 * sy * pw;
      xr.hi = mid + 0.5 * sy * pw;
    }
  }
  const double x0 = ox + kLeft;
  const double y0 = oy + kTop;
  auto px = [&](double v) { return x0 + (v - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double v) { return y0 + ph - (v - yr.lo) / (yr.hi - yr.lo) * ph; };

  out << "<g>\n";
  out << "<text x=\"" << Fixed(ox + kPanelW / 2) << "\" y=\"" << Fixed(oy + 18)
      << "\" text-anchor=\"middle\" font-size=\"14\">" << Xml(panel.title) << "</text>\n";
  out << "<rect x=\"" << Fixed(x0) << "\" y=\"" << Fixed(y0) << "\" width=\"" << Fixed(pw)
      << "\" height=\"" << Fixed(ph) << "\" fill=\"none\" stroke=\"#000\"/>\n";

  const double xs = NiceStep(xr.hi - xr.lo, 6);
  for (double v = std::ceil(xr.lo / xs) * xs; v <= xr.hi + 1e-9 * xs; v += xs) {
    out << "<line x1=\"" << Fixed(px(v)) << "\" y1=\"" << Fixed(y0 + ph) << "\" x2=\""
        << Fixed(px(v)) << "\" y2=\"" << Fixed(y0 + ph + 5) << "\" stroke=\"#000\"/>\n";
    out << "<text x=\"" << Fixed(px(v)) << "\" y=\"" << Fixed(y0 + ph + 18)
        << "\" text-anchor=\"middle\" font-size=\"11\">" << Tick(v) << "</text>\n";
  }
  const double ys = NiceStep(yr.hi - yr.lo, 5);
  for (double v = std::ceil(yr.lo / ys) * ys; v <= yr.hi + 1e-9 * ys; v += ys) {
    out << "<line x1=\"" << Fixed(x0 - 5) << "\" y1=\"" << Fixed(py(v)) << "\" x2=\""
        << Fixed(x0) << "\" y2=\"" << Fixed(py(v)) << "\" stroke=\"#000\"/>\n";
    out << "<line x1=\"" << Fixed(x0) << "\" y1=\"" << Fixed(py(v)) << "\" x2=\""
        << Fixed(x0 + pw) << "\" y2=\"" << Fixed(py(v))
        << "\" stroke=\"#ddd\" stroke-width=\"0.5\"/>\n";
    out << "<text x=\"" << Fixed(x0 - 8) << "\" y=\"" << Fixed(py(v) + 4)
        << "\" text-anchor=\"end\" font-size=\"11\">" << Tick(v) << "</text>\n";
  }
  out << "<text x=\"" << Fixed(x0 + pw / 2) << "\" y=\"" << Fixed(oy + kPanelH - 10)
      << "\" text-anchor=\"middle\" font-size=\"12\">" << Xml(panel.x_label) << "</text>\n";
  out << "<text transform=\"translate(" << Fixed(ox + 16) << "," << Fixed(y0 + ph / 2)
      << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"12\">" << Xml(panel.y_label)
      << "</text>\n";

  for (std::size_t k = 0; k < panel.series.size(); ++k) {
    const Series& s = panel.series[k];
    const char* color = kColors[k % kColors.size()];
    const std::size_t n = std::min(s.x.size(), s.y.size());
    if (s.markers) {
      for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
        out << "<circle cx=\"" << Fixed(px(s.x[i])) << "\" cy=\"" << Fixed(py(s.y[i]))
            << "\" r=\"2\" fill=\"" << color << "\"/>\n";
      }
    } else {
      // Non-finite samples break the line.
      std::string pts;
      auto flush = [&] {
        if (!pts.empty()) {
          out << "<polyline fill=\"none\" stroke=\"" << color
              << "\" stroke-width=\"1.5\" points=\"" << pts << "\"/>\n";
        }
        pts.clear();
      };
      for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
          flush();
          continue;
        }
        if (!pts.empty()) pts += ' ';
        pts += Fixed(px(s.x[i])) + "," + Fixed(py(s.y[i]));
      }
      flush();
    }
    const double ly = y0 + 14 + 15 * static_cast<double>(k);
    out << "<line x1=\"" << Fixed(x0 + pw - 110) << "\" y1=\"" << Fixed(ly - 4) << "\" x2=\""
        << Fixed(x0 + pw - 90) << "\" y2=\"" << Fixed(ly - 4) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << Fixed(x0 + pw - 85) << "\" y=\"" << Fixed(ly)
        << "\" font-size=\"11\">" << Xml(s.name) << "</text>\n";
  }
  out << "</g>\n";
}

}  // namespace

std::string RenderSvg(const std::string& title, const std::vector<Panel>& panels,
                      int columns) {
  columns = std::max(1, columns);
  const int n = static_cast<int>(panels.size());
  const int rows = std::max(1, (n + columns - 1) / columns);
  const double head = 36.0;
  const double width = kPanelW * std::min(columns, std::max(1, n));
  const double height = head + kPanelH * rows;
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << Fixed(width)
      << "\" height=\"" << Fixed(height) << "\" viewBox=\"0 0 " << Fixed(width) << " "
      << Fixed(height) << "\" font-family=\"sans-serif\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
  out << "<text x=\"" << Fixed(width / 2) << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-size=\"16\" font-weight=\"bold\">" << Xml(title) << "</text>\n";
  for (int i = 0; i < n; ++i) {
    DrawPanel(out, panels[static_cast<std::size_t>(i)], kPanelW * (i % columns),
              head + kPanelH * (i / columns));
  }
  out << "</svg>\n";
  return out.str();
}

namespace {

json PoseJson(const planner::Pose& p) { return {{"x", p.x}, {"y", p.y}, {"psi", p.psi}}; }

[[noreturn]] void PlanFail(const std::string& source, const std::string& what) {
  throw Error(ErrorCode::kConfig, source + ": " + what);
}

double Field(const json& obj, const char* key, const std::string& source,
             const std::string& where) {
  if (!obj.is_object() || !obj.contains(key) || !obj.at(key).is_number()) {
    PlanFail(source, where + ": missing or non-numeric '" + key + "'");
  }
  return obj.at(key).get<double>();
}

}  // namespace

std::string PlanToJson(const planner::PathPlan& plan) {
  json segs = json::array();
  for (const auto& seg : plan.segments()) {
    if (seg.IsStraight()) {
      const auto& s = std::get<planner::StraightSegment>(seg.shape);
      segs.push_back({{"type", "straight"},
                      {"s_s", s.s_s},
                      {"delta_s", s.delta_s},
                      {"v_s", s.v_s},
                      {"v_f", s.v_f},
                      {"delta_t", s.delta_t}});
    } else {
      const auto& c = std::get<planner::ClothoidTriple>(seg.shape);
      segs.push_back({{"type", "clothoid"},
                      {"speed", seg.speed},
                      {"s_s", c.s_s},
                      {"s0", c.s0},
                      {"s1", c.s1},
                      {"s2", c.s2},
                      {"kappa_s", c.kappa_s},
                      {"kappa_m", c.kappa_m},
                      {"kappa_f", c.kappa_f},
                      {"kp0", c.kp0},
                      {"kp1", c.kp1},
                      {"kp2", c.kp2},
                      {"psi_m", c.psi_m},
                      {"x_m", c.x_m},
                      {"y_m", c.y_m},
                      {"ratio", c.ratio},
                      {"breakpoints",
                       {c.s_s + c.s0, c.s_s + c.s0 + c.s1, c.s_s + c.Length()}}});
    }
  }
  json doc = {{"format", "unicycle-plan"},
              {"version", 1},
              {"origin", PoseJson(plan.origin())},
              {"length", plan.Length()},
              {"duration", plan.Duration()},
              {"segments", segs}};
  // nlohmann prints doubles with the shortest round-trip representation.
  return doc.dump(2) + "\n";
}

planner::PathPlan PlanFromJson(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    PlanFail(source, std::string("syntax error: ") + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != "unicycle-plan") {
    PlanFail(source, "not a unicycle plan document");
  }
  if (!doc.contains("version") || doc.at("version") != 1) {
    PlanFail(source, "unsupported plan version");
  }
  planner::Pose origin;
  if (!doc.contains("origin")) PlanFail(source, "missing 'origin'");
  origin.x = Field(doc.at("origin"), "x", source, "origin");
  origin.y = Field(doc.at("origin"), "y", source, "origin");
  origin.psi = Field(doc.at("origin"), "psi", source, "origin");
  if (!doc.contains("segments") || !doc.at("segments").is_array()) {
    PlanFail(source, "missing 'segments' array");
  }
  std::vector<planner::Segment> segments;
  const json& arr = doc.at("segments");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const json& j = arr[i];
    const std::string where = "segment " + std::to_string(i);
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
      PlanFail(source, where + ": missing 'type'");
    }
    const std::string type = j.at("type").get<std::string>();
    planner::Segment seg;
    if (type == "straight") {
      planner::StraightSegment s;
      s.s_s = Field(j, "s_s", source, where);
      s.delta_s = Field(j, "delta_s", source, where);
      s.v_s = Field(j, "v_s", source, where);
      s.v_f = Field(j, "v_f", source, where);
      s.delta_t = Field(j, "delta_t", source, where);
      if (!(s.delta_s > 0.0) || !(s.delta_t > 0.0) || s.v_s < 0.0 || s.v_f < 0.0) {
        PlanFail(source, where + ": invalid straight section");
      }
      seg.shape = s;
    } else if (type == "clothoid") {
      planner::ClothoidTriple c;
      seg.speed = Field(j, "speed", source, where);
      c.s_s = Field(j, "s_s", source, where);
      c.s0 = Field(j, "s0", source, where);
      c.s1 = Field(j, "s1", source, where);
      c.s2 = Field(j, "s2", source, where);
      c.kappa_s = Field(j, "kappa_s", source, where);
      c.kappa_m = Field(j, "kappa_m", source, where);
      c.kappa_f = Field(j, "kappa_f", source, where);
      c.kp0 = Field(j, "kp0", source, where);
      c.kp1 = Field(j, "kp1", source, where);
      c.kp2 = Field(j, "kp2", source, where);
      c.psi_m = Field(j, "psi_m", source, where);
      c.x_m = Field(j, "x_m", source, where);
      c.y_m = Field(j, "y_m", source, where);
      c.ratio = Field(j, "ratio", source, where);
      if (!(c.s0 > 0.0) || !(c.s1 > 0.0) || !(c.s2 > 0.0) || !(seg.speed > 0.0)) {
        PlanFail(source, where + ": invalid clothoid section");
      }
      seg.shape = c;
    } else {
      PlanFail(source, where + ": unknown type '" + type + "'");
    }
    segments.push_back(seg);
  }
  return planner::PathPlan::FromSegments(origin, std::move(segments));
}

planner::PathPlan LoadPlan(const std::string& path) {
  return PlanFromJson(ReadFile(path), path);
}

}  // namespace unicycle::app
