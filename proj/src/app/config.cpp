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

#include "unicycle/app/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

#include "json.hpp"
#include "unicycle/error.hpp"

namespace unicycle::app {
namespace {

using nlohmann::json;

// Input iterator that records how many bytes the parser has pulled, so SAX
// events can be mapped back to source lines.
class CountingIterator {
 public:
  using iterator_category = std::input_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  CountingIterator(const char* p, const char* base, std::size_t* consumed)
      : p_(p), base_(base), consumed_(consumed) {}
  reference operator*() const { return *p_; }
  CountingIterator& operator++() {
    ++p_;
    *consumed_ = std::max(*consumed_, static_cast<std::size_t>(p_ - base_));
    return *this;
  }
  CountingIterator operator++(int) {
    CountingIterator old = *this;
    ++*this;
    return old;
  }
  bool operator==(const CountingIterator& o) const { return p_ == o.p_; }
  bool operator!=(const CountingIterator& o) const { return p_ != o.p_; }

 private:
  const char* p_;
  const char* base_;
  std::size_t* consumed_;
};

int LineOf(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + offset, '\n'));
}

// Maps the JSON pointer of every value to the line where it starts.
class LineIndexer : public nlohmann::json_sax<json> {
 public:
  LineIndexer(const std::string& text, const std::size_t* consumed)
      : text_(text), consumed_(consumed) {}

  std::map<std::string, int> lines;

  bool null() override { return Leaf(); }
  bool boolean(bool) override { return Leaf(); }
  bool number_integer(number_integer_t) override { return Leaf(); }
  bool number_unsigned(number_unsigned_t) override { return Leaf(); }
  bool number_float(number_float_t, const string_t&) override { return Leaf(); }
  bool string(string_t&) override { return Leaf(); }
  bool binary(binary_t&) override { return Leaf(); }
  bool start_object(std::size_t) override { return Open(false); }
  bool start_array(std::size_t) override { return Open(true); }
  bool end_object() override { return Close(); }
  bool end_array() override { return Close(); }
  bool key(string_t& k) override {
    stack_.back().key = k;
    lines[stack_.back().path + "/" + Escape(k)] = Line();
    return true;
  }
  bool parse_error(std::size_t, const std::string&,
                   const nlohmann::detail::exception&) override {
    return false;
  }

 private:
  struct Frame {
    bool array;
    std::string path;
    std::string key;
    int next = 0;
  };

  static std::string Escape(const std::string& k) {
    std::string out;
    for (char c : k) {
      if (c == '~') {
        out += "~0";
      } else if (c == '/') {
        out += "~1";
      } else {
        out += c;
      }
    }
    return out;
  }
  // The lexer may read one character past a token; the last byte pulled is
  // still on the token's line.
  int Line() const { return LineOf(text_, *consumed_ == 0 ? 0 : *consumed_ - 1); }

  // Pointer of the value now being entered; array elements are indexed here.
  std::string ChildPath() {
    if (stack_.empty()) return "";
    Frame& f = stack_.back();
    if (!f.array) return f.path + "/" + Escape(f.key);
    std::string path = f.path + "/" + std::to_string(f.next++);
    lines[path] = Line();
    return path;
  }
  bool Leaf() {
    ChildPath();
    return true;
  }
  bool Open(bool array) {
    std::string path = ChildPath();
    if (stack_.empty()) lines[""] = Line();
    stack_.push_back({array, path, "", 0});
    return true;
  }
  bool Close() {
    stack_.pop_back();
    return true;
  }

  const std::string& text_;
  const std::size_t* consumed_;
  std::vector<Frame> stack_;
};

[[noreturn]] void Fail(const std::string& message) {
  throw Error(ErrorCode::kConfig, message);
}

// Strict typed access to a parsed document with line-tagged errors.
class Reader {
 public:
  Reader(std::string source, std::map<std::string, int> lines)
      : source_(std::move(source)), lines_(std::move(lines)) {}

  [[noreturn]] void Error(const std::string& pointer, const std::string& what) const {
    Fail(source_ + ":" + std::to_string(LineFor(pointer)) + ": " +
         (pointer.empty() ? std::string("document") : pointer) + ": " + what);
  }

  void ExpectObject(const json& j, const std::string& ptr,
                    std::initializer_list<const char*> allowed) const {
    if (!j.is_object()) Error(ptr, "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || it.key() == a;
      if (!ok) Error(ptr + "/" + it.key(), "unknown key '" + it.key() + "'");
    }
  }

  double Number(const json& j, const std::string& ptr) const {
    if (!j.is_number()) Error(ptr, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) Error(ptr, "expected a finite number");
    return v;
  }
  void OptNumber(const json& obj, const std::string& ptr, const char* key,
                 double* out) const {
    if (obj.contains(key)) *out = Number(obj.at(key), ptr + "/" + key);
  }
  double Required(const json& obj, const std::string& ptr, const char* key) const {
    if (!obj.contains(key)) Error(ptr, std::string("missing required key '") + key + "'");
    return Number(obj.at(key), ptr + "/" + key);
  }
  int Integer(const json& j, const std::string& ptr) const {
    if (!j.is_number_integer()) Error(ptr, "expected an integer");
    const auto v = j.get<long long>();
    if (v < -(1LL << 31) || v >= (1LL << 31)) Error(ptr, "integer out of range");
    return static_cast<int>(v);
  }
  bool Bool(const json& j, const std::string& ptr) const {
    if (!j.is_boolean()) Error(ptr, "expected true or false");
    return j.get<bool>();
  }
  std::string String(const json& j, const std::string& ptr) const {
    if (!j.is_string()) Error(ptr, "expected a string");
    return j.get<std::string>();
  }
  // A grid is an array of numbers or a grid string ("a:b:step" / "a,b").
  std::vector<double> Grid(const json& j, const std::string& ptr) const {
    if (j.is_string()) {
      try {
        return ParseGrid(j.get<std::string>());
      } catch (const unicycle::Error& e) {
        Error(ptr, e.what());
      }
    }
    if (!j.is_array()) Error(ptr, "expected an array of numbers or a grid string");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
      out.push_back(Number(j[i], ptr + "/" + std::to_string(i)));
    }
    return out;
  }

  int LineFor(std::string pointer) const {
    // Fall back to the nearest enclosing value that was indexed.
    for (;;) {
      auto it = lines_.find(pointer);
      if (it != lines_.end()) return it->second;
      if (pointer.empty()) return 1;
      pointer.erase(pointer.rfind('/'));
    }
  }

 private:
  std::string source_;
  std::map<std::string, int> lines_;
};

void ReadParams(const Reader& r, const json& j, dynamics::UnicycleParams* p) {
  const std::string ptr = "/params";
  r.ExpectObject(j, ptr, {"m", "m1", "m2", "h", "R", "g"});
  r.OptNumber(j, ptr, "m", &p->m);
  r.OptNumber(j, ptr, "m1", &p->m1);
  r.OptNumber(j, ptr, "m2", &p->m2);
  r.OptNumber(j, ptr, "h", &p->h);
  r.OptNumber(j, ptr, "R", &p->R);
  r.OptNumber(j, ptr, "g", &p->g);
  try {
    p->Validate();
  } catch (const Error& e) {
    r.Error(ptr, e.what());
  }
}

void ReadSim(const Reader& r, const json& j, sim::SimConfig* c) {
  const std::string ptr = "/sim";
  r.ExpectObject(j, ptr,
                 {"dt", "phidot_min", "target_pole", "fall_threshold", "sample_stride"});
  r.OptNumber(j, ptr, "dt", &c->dt);
  r.OptNumber(j, ptr, "phidot_min", &c->phidot_min);
  r.OptNumber(j, ptr, "target_pole", &c->target_pole);
  r.OptNumber(j, ptr, "fall_threshold", &c->fall_threshold);
  if (j.contains("sample_stride")) {
    c->sample_stride = r.Integer(j.at("sample_stride"), ptr + "/sample_stride");
  }
  try {
    c->Validate();
  } catch (const Error& e) {
    r.Error(ptr, e.what());
  }
}

ManeuverSegment ReadSegment(const Reader& r, const json& j, const std::string& ptr) {
  if (!j.is_object()) r.Error(ptr, "expected an object");
  if (!j.contains("type")) r.Error(ptr, "missing required key 'type'");
  const std::string type = r.String(j.at("type"), ptr + "/type");
  ManeuverSegment seg;
  if (type == "straight") {
    r.ExpectObject(j, ptr, {"type", "delta_s", "v_s", "v_f"});
    seg.kind = ManeuverSegment::Kind::kStraight;
    seg.delta_s = r.Required(j, ptr, "delta_s");
    seg.v_s = r.Required(j, ptr, "v_s");
    seg.v_f = r.Required(j, ptr, "v_f");
    if (seg.delta_s <= 0.0) r.Error(ptr + "/delta_s", "must be positive");
    if (seg.v_s < 0.0) r.Error(ptr + "/v_s", "must be non-negative");
    if (seg.v_f < 0.0) r.Error(ptr + "/v_f", "must be non-negative");
    if (seg.v_s == 0.0 && seg.v_f == 0.0) r.Error(ptr, "v_s and v_f are both zero");
  } else if (type == "lane_change") {
    r.ExpectObject(j, ptr, {"type", "dx", "dy", "dpsi", "kappa_f", "ratio", "speed"});
    seg.kind = ManeuverSegment::Kind::kLaneChange;
    seg.dx = r.Required(j, ptr, "dx");
    seg.dy = r.Required(j, ptr, "dy");
    r.OptNumber(j, ptr, "dpsi", &seg.dpsi);
    r.OptNumber(j, ptr, "kappa_f", &seg.kappa_f);
    r.OptNumber(j, ptr, "ratio", &seg.ratio);
    if (j.contains("speed")) {
      seg.speed = r.Number(j.at("speed"), ptr + "/speed");
      if (*seg.speed <= 0.0) r.Error(ptr + "/speed", "must be positive");
    }
    if (seg.ratio <= 0.0) r.Error(ptr + "/ratio", "must be positive");
    if (seg.dx == 0.0 && seg.dy == 0.0) r.Error(ptr, "dx and dy are both zero");
  } else {
    r.Error(ptr + "/type", "unknown segment type '" + type +
                               "' (expected straight or lane_change)");
  }
  return seg;
}

void ReadManeuver(const Reader& r, const json& j, RunConfig* c) {
  const std::string ptr = "/maneuver";
  r.ExpectObject(j, ptr, {"origin", "segments"});
  if (j.contains("origin")) {
    const json& o = j.at("origin");
    r.ExpectObject(o, ptr + "/origin", {"x", "y", "psi"});
    r.OptNumber(o, ptr + "/origin", "x", &c->origin.x);
    r.OptNumber(o, ptr + "/origin", "y", &c->origin.y);
    r.OptNumber(o, ptr + "/origin", "psi", &c->origin.psi);
  }
  if (j.contains("segments")) {
    const json& s = j.at("segments");
    if (!s.is_array()) r.Error(ptr + "/segments", "expected an array");
    if (s.empty()) r.Error(ptr + "/segments", "at least one segment is required");
    c->segments.clear();
    for (std::size_t i = 0; i < s.size(); ++i) {
      c->segments.push_back(ReadSegment(r, s[i], ptr + "/segments/" + std::to_string(i)));
    }
  }
}

void ReadAnalyze(const Reader& r, const json& j, AnalyzeGrid* g) {
  const std::string ptr = "/analyze";
  r.ExpectObject(j, ptr, {"speed_min", "speed_max", "speed_step"});
  r.OptNumber(j, ptr, "speed_min", &g->speed_min);
  r.OptNumber(j, ptr, "speed_max", &g->speed_max);
  r.OptNumber(j, ptr, "speed_step", &g->speed_step);
  if (g->speed_min < 0.0) r.Error(ptr + "/speed_min", "must be non-negative");
  if (g->speed_max < g->speed_min) r.Error(ptr + "/speed_max", "must not be below speed_min");
  if (g->speed_step <= 0.0) r.Error(ptr + "/speed_step", "must be positive");
}

void CheckPositive(const Reader& r, const std::vector<double>& v,
                   const std::string& ptr, bool allow_empty) {
  if (v.empty() && !allow_empty) r.Error(ptr, "must not be empty");
  for (double x : v) {
    if (!(x > 0.0)) r.Error(ptr, "entries must be positive");
  }
}

}  // namespace

void RunConfig::Validate() const {
  try {
    params.Validate();
    sim.Validate();
  } catch (const Error& e) {
    Fail(e.what());
  }
  if (segments.empty()) Fail("maneuver: at least one segment is required");
  if (ratios.empty()) Fail("sweep: ratio list is empty");
  if (speeds.empty()) Fail("sweep: speed list is empty");
  for (double r : ratios) {
    if (!(r > 0.0)) Fail("sweep: ratios must be positive");
  }
  for (double v : speeds) {
    if (!(v > 0.0)) Fail("sweep: speeds must be positive");
  }
  for (double r : plan_ratios) {
    if (!(r > 0.0)) Fail("plan: ratios must be positive");
  }
  if (!(sample_ds > 0.0)) Fail("plan: ds must be positive");
  if (threads < 1) Fail("sweep: threads must be at least 1");
  if (out_dir.empty()) Fail("output: dir must not be empty");
}

std::vector<ManeuverSegment> NominalManeuver() {
  ManeuverSegment accel;
  accel.kind = ManeuverSegment::Kind::kStraight;
  accel.delta_s = 5.0;
  accel.v_s = 0.0;
  accel.v_f = 1.5;
  ManeuverSegment lane;
  lane.kind = ManeuverSegment::Kind::kLaneChange;
  lane.dx = 10.0;
  lane.dy = 3.0;
  lane.ratio = 0.5;
  ManeuverSegment hold;
  hold.kind = ManeuverSegment::Kind::kStraight;
  hold.delta_s = 5.0;
  hold.v_s = 1.5;
  hold.v_f = 1.5;
  return {accel, lane, hold};
}

RunConfig DefaultConfig() {
  RunConfig c;
  c.segments = NominalManeuver();
  return c;
}

RunConfig ParseConfig(const std::string& text, const std::string& source) {
  std::size_t consumed = 0;
  LineIndexer indexer(text, &consumed);
  const char* base = text.data();
  const bool ok = json::sax_parse(CountingIterator(base, base, &consumed),
                                  CountingIterator(base + text.size(), base, &consumed),
                                  &indexer);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    Fail(source + ":" + std::to_string(LineOf(text, e.byte == 0 ? 0 : e.byte - 1)) +
         ": syntax error: " + e.what());
  }
  if (!ok) Fail(source + ":1: syntax error");

  const Reader r(source, indexer.lines);
  r.ExpectObject(doc, "", {"params", "sim", "maneuver", "analyze", "plan", "sweep",
                           "output", "plan_file"});
  RunConfig c = DefaultConfig();
  if (doc.contains("params")) ReadParams(r, doc.at("params"), &c.params);
  if (doc.contains("sim")) ReadSim(r, doc.at("sim"), &c.sim);
  if (doc.contains("maneuver")) ReadManeuver(r, doc.at("maneuver"), &c);
  if (doc.contains("analyze")) ReadAnalyze(r, doc.at("analyze"), &c.analyze);
  if (doc.contains("plan")) {
    const json& j = doc.at("plan");
    r.ExpectObject(j, "/plan", {"ratios", "ds"});
    if (j.contains("ratios")) {
      c.plan_ratios = r.Grid(j.at("ratios"), "/plan/ratios");
      CheckPositive(r, c.plan_ratios, "/plan/ratios", true);
    }
    r.OptNumber(j, "/plan", "ds", &c.sample_ds);
    if (!(c.sample_ds > 0.0)) r.Error("/plan/ds", "must be positive");
  }
  if (doc.contains("sweep")) {
    const json& j = doc.at("sweep");
    r.ExpectObject(j, "/sweep", {"ratios", "speeds", "threads"});
    if (j.contains("ratios")) {
      c.ratios = r.Grid(j.at("ratios"), "/sweep/ratios");
      CheckPositive(r, c.ratios, "/sweep/ratios", false);
    }
    if (j.contains("speeds")) {
      c.speeds = r.Grid(j.at("speeds"), "/sweep/speeds");
      CheckPositive(r, c.speeds, "/sweep/speeds", false);
    }
    if (j.contains("threads")) {
      c.threads = r.Integer(j.at("threads"), "/sweep/threads");
      if (c.threads < 1) r.Error("/sweep/threads", "must be at least 1");
    }
  }
  if (doc.contains("output")) {
    const json& j = doc.at("output");
    r.ExpectObject(j, "/output", {"dir", "svg"});
    if (j.contains("dir")) {
      c.out_dir = r.String(j.at("dir"), "/output/dir");
      if (c.out_dir.empty()) r.Error("/output/dir", "must not be empty");
    }
    if (j.contains("svg")) c.svg = r.Bool(j.at("svg"), "/output/svg");
  }
  if (doc.contains("plan_file")) c.plan_file = r.String(doc.at("plan_file"), "/plan_file");
  c.Validate();
  return c;
}

RunConfig LoadConfig(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIo, "error reading config file '" + path + "'");
  return ParseConfig(buf.str(), path);
}

std::vector<double> ParseGrid(const std::string& spec) {
  auto number = [&](const std::string& tok) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      Fail("grid '" + spec + "': '" + tok + "' is not a number");
    }
    while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used]))) ++used;
    if (used != tok.size() || !std::isfinite(v)) {
      Fail("grid '" + spec + "': '" + tok + "' is not a number");
    }
    return v;
  };
  auto split = [](const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
      if (ch == sep) {
        out.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    out.push_back(cur);
    return out;
  };

  if (spec.find_first_not_of(" \t") == std::string::npos) return {};
  if (spec.find(':') != std::string::npos) {
    const auto parts = split(spec, ':');
    if (parts.size() != 3) Fail("grid '" + spec + "': expected a:b:step");
    const double a = number(parts[0]);
    const double b = number(parts[1]);
    const double step = number(parts[2]);
    if (!(step > 0.0)) Fail("grid '" + spec + "': step must be positive");
    if (b < a) Fail("grid '" + spec + "': end is below start");
    // Multiplying rather than accumulating keeps 0.05:0.8:0.05 on the
    // decimal points; the end is included when within rounding.
    const double span = (b - a) / step;
    const auto n = static_cast<long long>(std::floor(span + 1e-9));
    if (n > 1000000) Fail("grid '" + spec + "': too many points");
    std::vector<double> out;
    for (long long i = 0; i <= n; ++i) out.push_back(a + static_cast<double>(i) * step);
    return out;
  }
  std::vector<double> out;
  for (const auto& tok : split(spec, ',')) out.push_back(number(tok));
  return out;
}

std::vector<planner::SegmentSpec> ToSpecs(const std::vector<ManeuverSegment>& segments) {
  std::vector<planner::SegmentSpec> specs;
  for (const auto& seg : segments) {
    if (seg.kind == ManeuverSegment::Kind::kStraight) {
      planner::StraightSpec s;
      s.delta_s = seg.delta_s;
      s.v_s = seg.v_s;
      s.v_f = seg.v_f;
      specs.emplace_back(s);
    } else {
      planner::ClothoidSpec s;
      s.dx = seg.dx;
      s.dy = seg.dy;
      s.dpsi = seg.dpsi;
      s.kappa_f = seg.kappa_f;
      s.ratio = seg.ratio;
      s.speed = seg.speed;
      specs.emplace_back(s);
    }
  }
  return specs;
}

planner::PathPlan BuildPlan(const RunConfig& config, std::optional<double> ratio) {
  std::vector<ManeuverSegment> segments = config.segments;
  if (ratio) {
    for (auto& seg : segments) {
      if (seg.kind == ManeuverSegment::Kind::kLaneChange) seg.ratio = *ratio;
    }
  }
  return planner::ComposeManeuver(config.origin, ToSpecs(segments));
}

}  // namespace unicycle::app
