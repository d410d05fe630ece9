// Copyright 2026 The symwit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "symwit/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace symwit {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw std::invalid_argument("config: bad value '" + std::string(value) + "' for " + std::string(key));
  }
  return out;
}

double positive(std::string_view key, double v) {
  if (!(v > 0.0)) throw std::invalid_argument("config: " + std::string(key) + " must be positive");
  return v;
}

}  // namespace

SolverConfig SolverConfig::parse(std::string_view text) {
  SolverConfig c;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key == "barrier_tol") {
      c.barrier_tol = positive(key, parse_number<double>(key, value));
    } else if (key == "cut_tol") {
      c.cut_tol = positive(key, parse_number<double>(key, value));
    } else if (key == "seesaw_restarts") {
      c.seesaw_restarts = parse_number<int>(key, value);
      if (c.seesaw_restarts < 1) throw std::invalid_argument("config: seesaw_restarts must be at least 1");
    } else if (key == "seesaw_tol") {
      c.seesaw_tol = positive(key, parse_number<double>(key, value));
    } else if (key == "seesaw_max_iterations") {
      c.seesaw_max_iterations = parse_number<int>(key, value);
      if (c.seesaw_max_iterations < 1) throw std::invalid_argument("config: seesaw_max_iterations must be at least 1");
    } else if (key == "seed") {
      c.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "sign_map") {
      if (value.find_first_not_of("+-") != std::string_view::npos) {
        throw std::invalid_argument("config: sign_map must consist of '+' and '-'");
      }
      c.sign_map = std::string(value);
    } else {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
    }
  }
  return c;
}

SolverConfig SolverConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string SolverConfig::to_text() const {
  std::ostringstream out;
  out.precision(17);
  out << "barrier_tol = " << barrier_tol << "\n"
      << "cut_tol = " << cut_tol << "\n"
      << "seesaw_restarts = " << seesaw_restarts << "\n"
      << "seesaw_tol = " << seesaw_tol << "\n"
      << "seesaw_max_iterations = " << seesaw_max_iterations << "\n"
      << "seed = " << seed << "\n";
  if (!sign_map.empty()) out << "sign_map = " << sign_map << "\n";
  return out.str();
}

}  // namespace symwit
