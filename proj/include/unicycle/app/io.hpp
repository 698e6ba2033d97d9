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

#ifndef UNICYCLE_APP_IO_HPP_
#define UNICYCLE_APP_IO_HPP_

#include <string>
#include <vector>

#include "unicycle/planner/path_plan.hpp"

namespace unicycle::app {

// Writes through a temporary sibling and renames it into place, creating
// parent directories. Throws kIo.
void WriteFileAtomic(const std::string& path, const std::string& content);
// Throws kIo.
std::string ReadFile(const std::string& path);

// RFC 4180 field quoting: fields containing a comma, quote, CR or LF are
// quoted with embedded quotes doubled.
std::string CsvEscape(const std::string& field);
// "%.12g"; non-finite values print as nan, inf, -inf.
std::string FormatNumber(double v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  // Throws kInternal when the width differs from the header.
  void AddRow(const std::vector<std::string>& fields);
  std::size_t rows() const { return rows_; }
  // Lines end in CRLF as RFC 4180 prescribes.
  const std::string& str() const { return text_; }

 private:
  std::size_t width_;
  std::size_t rows_ = 0;
  std::string text_;
};

// Splits RFC 4180 text into records. Throws kConfig on malformed quoting.
std::vector<std::vector<std::string>> ParseCsv(const std::string& text);

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  bool markers = false;  // draw points instead of a polyline
};

struct Panel {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  bool equal_aspect = false;  // same scale on both axes, for paths
};

// Static line chart with one panel per cell of a `columns`-wide grid.
std::string RenderSvg(const std::string& title, const std::vector<Panel>& panels,
                      int columns = 1);

// Every field of every segment at round-trip precision, plus derived
// breakpoints for readability. Reloading yields a bitwise equal plan.
std::string PlanToJson(const planner::PathPlan& plan);
// Throws kConfig on schema errors and kDiscontinuousChain on a broken chain.
planner::PathPlan PlanFromJson(const std::string& text,
                               const std::string& source = "<plan>");
// Throws kIo when the file is missing.
planner::PathPlan LoadPlan(const std::string& path);

}  // namespace unicycle::app

#endif  // UNICYCLE_APP_IO_HPP_
