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

#include "bangbang/matrix_io.hpp"

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

double parse_double(std::string_view s, int line) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("matrix line " + std::to_string(line) + ": bad number '" +
                                std::string(s) + "'");
  }
  return v;
}

}  // namespace

void write_matrix(std::ostream& out, const CMatrix& m, std::string_view comment) {
  if (!comment.empty()) out << "# " << comment << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ' ';
      out << fmt_double(m(r, c).real()) << ',' << fmt_double(m(r, c).imag());
    }
    out << '\n';
  }
}

std::string format_matrix(const CMatrix& m, std::string_view comment) {
  std::ostringstream out;
  write_matrix(out, m, comment);
  return out.str();
}

CMatrix parse_matrix(std::string_view text) {
  std::vector<std::vector<Complex>> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream tokens(line);
    std::string tok;
    std::vector<Complex> row;
    while (tokens >> tok) {
      const auto comma = tok.find(',');
      if (comma == std::string::npos) {
        throw std::invalid_argument("matrix line " + std::to_string(line_no) +
                                    ": expected re,im but got '" + tok + "'");
      }
      const std::string_view sv(tok);
      row.emplace_back(parse_double(sv.substr(0, comma), line_no),
                       parse_double(sv.substr(comma + 1), line_no));
    }
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::invalid_argument("matrix line " + std::to_string(line_no) + ": ragged row");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("matrix: no rows");
  CMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
  return m;
}

CMatrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open matrix file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_matrix(buf.str());
}

std::string matrix_comment(std::string_view text) {
  if (text.empty() || text[0] != '#') return {};
  auto end = text.find('\n');
  std::string_view first = text.substr(1, end == std::string_view::npos ? text.npos : end - 1);
  while (!first.empty() && first.front() == ' ') first.remove_prefix(1);
  return std::string(first);
}

}  // namespace bb
