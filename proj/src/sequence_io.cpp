// Copyright 2026 The bangbang Authors
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

#include "bangbang/sequence_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace bb {

namespace {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw std::invalid_argument("sequence line " + std::to_string(line) + ": " + what);
}

template <typename T>
T parse_number(std::string_view s, int line) {
  T v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    fail(line, "bad number '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace

std::string format_sequence(const BBSequence& seq) {
  std::ostringstream out;
  out << "# bangbang sequence\n";
  out << "dt " << fmt_double(seq.dt()) << '\n';
  out << "segments " << seq.n_segments() << '\n';
  out << "species";
  for (const auto& label : seq.labels()) out << ' ' << label;
  out << '\n';
  for (int k = 0; k < seq.n_segments(); ++k) {
    const auto events = seq.segment(k);
    for (std::size_t j = 0; j < events.size(); ++j) {
      if (j) out << ' ';
      if (events[j].pulsed) {
        out << "P:" << fmt_double(phase_to_degrees(events[j].phase));
      } else {
        out << 'D';
      }
    }
    out << '\n';
  }
  out << "twirls";
  for (int b : seq.twirl_boundaries()) out << ' ' << b;
  out << '\n';
  return out.str();
}

BBSequence parse_sequence(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  auto next_line = [&]() -> std::vector<std::string> {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty() || line[0] == '#') continue;
      auto toks = split(line);
      if (!toks.empty()) return toks;
    }
    fail(line_no + 1, "unexpected end of file");
  };
  auto keyed = [&](const char* key) {
    auto toks = next_line();
    if (toks.front() != key) fail(line_no, std::string("expected '") + key + "'");
    return toks;
  };

  auto dt_line = keyed("dt");
  if (dt_line.size() != 2) fail(line_no, "dt takes one value");
  const double dt = parse_number<double>(dt_line[1], line_no);
  if (!(dt > 0.0)) fail(line_no, "dt must be positive");

  auto seg_line = keyed("segments");
  if (seg_line.size() != 2) fail(line_no, "segments takes one value");
  const int k_total = parse_number<int>(seg_line[1], line_no);
  if (k_total < 0) fail(line_no, "segments must be nonnegative");

  auto species_line = keyed("species");
  std::vector<std::string> labels(species_line.begin() + 1, species_line.end());
  if (labels.empty()) fail(line_no, "at least one species label is required");

  BBSequence seq(dt, k_total, static_cast<int>(labels.size()), labels);
  for (int k = 0; k < k_total; ++k) {
    auto toks = next_line();
    if (toks.size() != labels.size()) {
      fail(line_no, "expected " + std::to_string(labels.size()) + " events, got " +
                        std::to_string(toks.size()));
    }
    for (std::size_t j = 0; j < toks.size(); ++j) {
      const std::string& t = toks[j];
      if (t == "D") continue;
      if (t.rfind("P:", 0) != 0) fail(line_no, "bad event '" + t + "'");
      const double deg = parse_number<double>(std::string_view(t).substr(2), line_no);
      if (!(deg >= 0.0 && deg < 360.0)) fail(line_no, "phase must be in [0, 360)");
      seq.set_pulse(k, static_cast<int>(j), degrees_to_phase(deg));
    }
  }

  auto twirl_line = keyed("twirls");
  std::vector<int> twirls;
  for (std::size_t i = 1; i < twirl_line.size(); ++i) {
    twirls.push_back(parse_number<int>(twirl_line[i], line_no));
  }
  try {
    seq.set_twirl_boundaries(std::move(twirls));
  } catch (const std::invalid_argument& e) {
    fail(line_no, e.what());
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line[0] != '#' && !split(line).empty()) fail(line_no, "trailing content");
  }
  return seq;
}

BBSequence load_sequence(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open sequence file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_sequence(buf.str());
}

void save_sequence(const std::string& path, const BBSequence& seq) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << format_sequence(seq);
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace bb
