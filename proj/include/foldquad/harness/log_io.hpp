// Copyright 2026 The foldquad Authors
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

// CSV persistence for simulation logs and displacement traces.

#pragma once

#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "foldquad/arm_spring.hpp"
#include "foldquad/harness/config.hpp"
#include "foldquad/harness/simulation.hpp"

namespace foldquad {

inline constexpr std::array<const char*, 23> kLogColumns = {
    "t",  "x1", "x2", "x3", "v1", "v2",   "v3",   "qw",   "qx",      "qy",  "qz",  "w1",
    "w2", "w3", "l",  "f",  "tau1", "tau2", "tau3", "contact", "xd1", "xd2", "xd3"};

inline std::string log_header() {
  std::string h;
  for (std::size_t i = 0; i < kLogColumns.size(); ++i) {
    if (i) h += ',';
    h += kLogColumns[i];
  }
  return h;
}

// Shortest text that reads back to the same double.
inline std::string format_number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline void write_log_csv(const SimLog& log, std::ostream& out) {
  out << log_header() << '\n';
  auto put = [&](double v, bool last = false) {
    out << format_number(v) << (last ? '\n' : ',');
  };
  for (const LogRow& r : log.rows) {
    put(r.t);
    for (int k = 0; k < 3; ++k) put(r.x(k));
    for (int k = 0; k < 3; ++k) put(r.v(k));
    for (int k = 0; k < 4; ++k) put(r.q(k));
    for (int k = 0; k < 3; ++k) put(r.omega(k));
    put(r.l);
    put(r.thrust);
    for (int k = 0; k < 3; ++k) put(r.moment(k));
    out << (r.contact ? 1 : 0) << ',';
    put(r.x_d(0));
    put(r.x_d(1));
    put(r.x_d(2), true);
  }
}

inline std::string log_to_csv(const SimLog& log) {
  std::ostringstream ss;
  write_log_csv(log, ss);
  return ss.str();
}

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace detail

/// Reads a log written by write_log_csv. Rejects a wrong header, ragged rows,
/// non-numeric cells and non-increasing time.
inline SimLog read_log_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("log csv: empty input");
  if (detail::trim(line) != log_header()) {
    throw std::invalid_argument("log csv: unexpected header (expected '" + log_header() + "')");
  }
  SimLog log;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split_csv(line);
    if (cells.size() != kLogColumns.size()) {
      throw std::invalid_argument("log csv: line " + std::to_string(line_no) + " has " +
                                  std::to_string(cells.size()) + " columns");
    }
    std::array<double, 23> v{};
    try {
      for (std::size_t k = 0; k < cells.size(); ++k) {
        v[k] = detail::parse_double(kLogColumns[k], cells[k]);
      }
    } catch (const ConfigError& e) {
      throw std::invalid_argument("log csv: line " + std::to_string(line_no) + ": " + e.what());
    }
    LogRow r;
    r.t = v[0];
    r.x = Vec3(v[1], v[2], v[3]);
    r.v = Vec3(v[4], v[5], v[6]);
    r.q = Eigen::Vector4d(v[7], v[8], v[9], v[10]);
    r.omega = Vec3(v[11], v[12], v[13]);
    r.l = v[14];
    r.thrust = v[15];
    r.moment = Vec3(v[16], v[17], v[18]);
    if (v[19] != 0.0 && v[19] != 1.0) {
      throw std::invalid_argument("log csv: line " + std::to_string(line_no) +
                                  ": contact flag must be 0 or 1");
    }
    r.contact = v[19] == 1.0;
    r.x_d = Vec3(v[20], v[21], v[22]);
    if (!log.rows.empty() && !(r.t > log.rows.back().t)) {
      throw std::invalid_argument("log csv: line " + std::to_string(line_no) +
                                  ": time not strictly increasing");
    }
    log.rows.push_back(r);
  }
  if (log.rows.empty()) throw std::invalid_argument("log csv: no data rows");
  return log;
}

/// Two-column `t,l` trace in SI units; the header line is optional.
inline DisplacementTrace read_trace_csv(std::istream& in) {
  DisplacementTrace trace;
  std::string line;
  int line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split_csv(line);
    if (cells.size() != 2) {
      throw std::invalid_argument("trace csv: line " + std::to_string(line_no) +
                                  " must have two columns t,l");
    }
    try {
      const double t = detail::parse_double("t", cells[0]);
      const double l = detail::parse_double("l", cells[1]);
      trace.push_back(t, l);
    } catch (const ConfigError&) {
      if (!first) {
        throw std::invalid_argument("trace csv: line " + std::to_string(line_no) +
                                    " is not numeric");
      }
    }
    first = false;
  }
  trace.validate();
  return trace;
}

inline void write_trace_csv(const DisplacementTrace& trace, std::ostream& out) {
  out << "t,l\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out << format_number(trace.t[i]) << ',' << format_number(trace.l[i]) << '\n';
  }
}

}  // namespace foldquad
