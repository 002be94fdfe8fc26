// Copyright 2026 The fracsed Authors
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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <span>
#include <string>

#include "fracsed/error.hpp"
#include "fracsed/harness.hpp"

namespace fracsed {

std::vector<double> running_min(const std::vector<double>& series) {
  std::vector<double> out(series.size());
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < series.size(); ++i) {
    m = std::min(m, series[i]);
    out[i] = m;
  }
  return out;
}

RateFit rate_fit(const std::vector<double>& series) {
  const std::size_t n = series.size();
  if (n < 50) {
    throw DomainError("rate_fit: need at least 50 points, got " + std::to_string(n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(series[i] > 0.0) || !std::isfinite(series[i])) {
      throw DomainError("rate_fit: entry " + std::to_string(i) + " is not positive and finite");
    }
  }
  const std::size_t t_lo = std::max<std::size_t>(1, (n + 9) / 10);
  const auto window = std::span(series).subspan(t_lo - 1);
  if (std::all_of(window.begin(), window.end(), [&](double v) { return v == window.front(); })) {
    return {0.0, std::log(window.front()), 1.0};
  }
  double sx = 0.0, sy = 0.0;
  std::size_t m = 0;
  for (std::size_t t = t_lo; t <= n; ++t, ++m) {
    sx += std::log(static_cast<double>(t));
    sy += std::log(series[t - 1]);
  }
  const double mx = sx / static_cast<double>(m), my = sy / static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t t = t_lo; t <= n; ++t) {
    const double dx = std::log(static_cast<double>(t)) - mx;
    const double dy = std::log(series[t - 1]) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  return fit;
}

std::vector<double> read_csv_column(const std::filesystem::path& path, std::string_view name) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path.string() + ": empty file");
  auto split = [](const std::string& s) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
      const auto comma = s.find(',', start);
      out.emplace_back(s.data() + start,
                       (comma == std::string::npos ? s.size() : comma) - start);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return out;
  };
  const std::string header = line;
  const auto names = split(header);
  std::size_t col = names.size();
  for (std::size_t c = 0; c < names.size(); ++c) {
    if (names[c] == name) col = c;
  }
  if (col == names.size()) {
    throw FormatError(path.string() + ": no column named '" + std::string(name) + "'");
  }
  std::vector<double> out;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != names.size()) {
      throw FormatError(path.string() + ": row " + std::to_string(row) + " has " +
                        std::to_string(fields.size()) + " fields, header has " +
                        std::to_string(names.size()));
    }
    double v = 0.0;
    const auto f = fields[col];
    const auto [end, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (ec != std::errc() || end != f.data() + f.size()) {
      throw FormatError(path.string() + ": row " + std::to_string(row) + ": bad number '" +
                        std::string(f) + "'");
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace fracsed
