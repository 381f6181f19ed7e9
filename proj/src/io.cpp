// Copyright 2026 The safin Authors
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

#include "safin/io.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>

namespace safin {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

double field_double(std::string_view s, std::size_t line, std::string_view name) {
  double v = 0.0;
  if (!parse_double(s, v)) {
    throw FormatError(fmt::format("line {}: field '{}': not a finite number: '{}'",
                                  line, name, s));
  }
  return v;
}

std::string join_columns(const std::vector<std::string>& columns) {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out += ',';
    out += columns[i];
  }
  return out;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void write_table(std::ostream& os, const std::vector<std::string>& columns,
                 const Eigen::MatrixXd& data) {
  if (Eigen::Index(columns.size()) != data.rows()) {
    throw std::invalid_argument("write_table: column count mismatch");
  }
  os << join_columns(columns) << '\n';
  std::string line;
  for (Eigen::Index j = 0; j < data.cols(); ++j) {
    line.clear();
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
      if (i) line += ',';
      line += fmt::format("{}", data(i, j));
    }
    line += '\n';
    os << line;
  }
}

Eigen::MatrixXd read_table(std::istream& is,
                           const std::vector<std::string>& columns) {
  std::string line;
  if (!std::getline(is, line)) throw FormatError("line 1: missing header");
  if (trim(line) != join_columns(columns)) {
    throw FormatError(fmt::format("line 1: expected header '{}', got '{}'",
                                  join_columns(columns), trim(line)));
  }
  std::vector<double> values;
  std::size_t line_no = 1;
  std::size_t records = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != columns.size()) {
      throw FormatError(fmt::format("line {}: expected {} fields, got {}",
                                    line_no, columns.size(), fields.size()));
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
      values.push_back(field_double(fields[i], line_no, columns[i]));
    }
    ++records;
  }
  return Eigen::Map<Eigen::MatrixXd>(values.data(), Eigen::Index(columns.size()),
                                     Eigen::Index(records));
}

void write_planner_dataset(std::ostream& os, const PlannerDataset& d) {
  Eigen::MatrixXd all(d.x.rows() + d.y.rows(), d.x.cols());
  all << d.x, d.y;
  write_table(os, kPlannerColumns, all);
}

PlannerDataset read_planner_dataset(std::istream& is) {
  const Eigen::MatrixXd all = read_table(is, kPlannerColumns);
  return {all.topRows(PlannerInput::kSize), all.bottomRows(2)};
}

void write_assessor_dataset(std::ostream& os, const AssessorDataset& d) {
  Eigen::MatrixXd all(d.x.rows() + d.y.rows(), d.x.cols());
  all << d.x, d.y;
  write_table(os, kAssessorColumns, all);
}

AssessorDataset read_assessor_dataset(std::istream& is) {
  const Eigen::MatrixXd all = read_table(is, kAssessorColumns);
  return {all.topRows(AssessorInput::kSize), all.bottomRows(2)};
}

namespace {

void append_vector(std::string& out, std::string_view tag,
                   const Eigen::VectorXd& v) {
  out += tag;
  for (Eigen::Index i = 0; i < v.size(); ++i) out += fmt::format(" {}", v[i]);
  out += '\n';
}

class LineReader {
 public:
  explicit LineReader(std::string_view text) : lines_(split(text, '\n')) {}

  std::vector<std::string_view> next(std::string_view expect_tag) {
    while (pos_ < lines_.size() && trim(lines_[pos_]).empty()) ++pos_;
    if (pos_ >= lines_.size()) {
      throw FormatError(fmt::format("model: unexpected end of file, expected '{}'",
                                    expect_tag));
    }
    line_no_ = pos_ + 1;
    std::vector<std::string_view> tokens;
    for (auto tok : split(trim(lines_[pos_++]), ' ')) {
      if (!tok.empty()) tokens.push_back(tok);
    }
    if (!expect_tag.empty() && (tokens.empty() || tokens[0] != expect_tag)) {
      throw FormatError(fmt::format("model line {}: expected '{}'", line_no_,
                                    expect_tag));
    }
    return tokens;
  }

  Eigen::VectorXd numbers(const std::vector<std::string_view>& tokens,
                          std::size_t first, Eigen::Index count) const {
    if (tokens.size() != first + std::size_t(count)) {
      throw FormatError(fmt::format("model line {}: expected {} values, got {}",
                                    line_no_, count, tokens.size() - first));
    }
    Eigen::VectorXd v(count);
    for (Eigen::Index i = 0; i < count; ++i) {
      v[i] = field_double(tokens[first + i], line_no_, "value");
    }
    return v;
  }

  int integer(std::string_view tok) const {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      throw FormatError(fmt::format("model line {}: bad integer '{}'", line_no_, tok));
    }
    return v;
  }

 private:
  std::vector<std::string_view> lines_;
  std::size_t pos_ = 0;
  std::size_t line_no_ = 0;
};

}  // namespace

void save_model(std::ostream& os, const Model& m) {
  std::string body = "safin-mlp 1\nsizes";
  for (int s : m.sizes()) body += fmt::format(" {}", s);
  body += "\nactivation tanh linear\n";
  append_vector(body, "input_mean", m.input_mean());
  append_vector(body, "input_scale", m.input_scale());
  append_vector(body, "output_mean", m.output_mean());
  append_vector(body, "output_scale", m.output_scale());
  for (std::size_t l = 0; l < m.layers(); ++l) {
    const Eigen::MatrixXd& w = m.weight(l);
    body += fmt::format("weight {} {} {}\n", l, w.rows(), w.cols());
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) {
        if (c) body += ' ';
        body += fmt::format("{}", w(r, c));
      }
      body += '\n';
    }
    body += fmt::format("bias {} {}\n", l, m.bias(l).size());
    append_vector(body, "values", m.bias(l));
  }
  os << body << fmt::format("checksum {:016x}\n", fnv1a64(body));
}

Model load_model(std::istream& is) {
  const std::string text((std::istreambuf_iterator<char>(is)),
                         std::istreambuf_iterator<char>());
  const std::size_t pos = text.rfind("checksum ");
  if (pos == std::string::npos || (pos > 0 && text[pos - 1] != '\n')) {
    throw FormatError("model: missing checksum line");
  }
  const std::string_view body(text.data(), pos);
  const std::string_view stored = trim(split(std::string_view(text).substr(pos + 9), '\n')[0]);
  if (stored != fmt::format("{:016x}", fnv1a64(body))) {
    throw FormatError("model: checksum mismatch");
  }

  LineReader r(body);
  auto header = r.next("safin-mlp");
  if (header.size() != 2 || header[1] != "1") {
    throw FormatError("model line 1: unsupported version");
  }
  auto size_tokens = r.next("sizes");
  std::vector<int> sizes;
  for (std::size_t i = 1; i < size_tokens.size(); ++i) {
    sizes.push_back(r.integer(size_tokens[i]));
    if (sizes.back() <= 0) throw FormatError("model: layer size must be > 0");
  }
  if (sizes.size() < 2) throw FormatError("model: need at least two layer sizes");
  auto act = r.next("activation");
  if (act.size() != 3 || act[1] != "tanh" || act[2] != "linear") {
    throw FormatError("model: unsupported activation");
  }
  Model m(sizes);
  m.input_mean() = r.numbers(r.next("input_mean"), 1, sizes.front());
  m.input_scale() = r.numbers(r.next("input_scale"), 1, sizes.front());
  m.output_mean() = r.numbers(r.next("output_mean"), 1, sizes.back());
  m.output_scale() = r.numbers(r.next("output_scale"), 1, sizes.back());
  if ((m.input_scale().array() <= 0.0).any() ||
      (m.output_scale().array() <= 0.0).any()) {
    throw FormatError("model: normalization scales must be > 0");
  }
  for (std::size_t l = 0; l < m.layers(); ++l) {
    auto wt = r.next("weight");
    Eigen::MatrixXd& w = m.weight(l);
    if (wt.size() != 4 || r.integer(wt[1]) != int(l) ||
        r.integer(wt[2]) != w.rows() || r.integer(wt[3]) != w.cols()) {
      throw FormatError(fmt::format("model: weight {} header does not match sizes", l));
    }
    for (Eigen::Index row = 0; row < w.rows(); ++row) {
      w.row(row) = r.numbers(r.next(""), 0, w.cols()).transpose();
    }
    auto bt = r.next("bias");
    if (bt.size() != 3 || r.integer(bt[1]) != int(l) ||
        r.integer(bt[2]) != m.bias(l).size()) {
      throw FormatError(fmt::format("model: bias {} header does not match sizes", l));
    }
    m.bias(l) = r.numbers(r.next("values"), 1, m.bias(l).size());
  }
  return m;
}

Model load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  try {
    return load_model(in);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

void save_model_file(const std::string& path, const Model& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  save_model(out, m);
}

void write_trajectory(std::ostream& os, const std::vector<StepRecord>& log) {
  os << "t,ego_px,ego_py,ego_vx,ego_vy,leader_px,leader_py,leader_vx,"
        "leader_vy,follower_px,follower_py,follower_vx,follower_vy,ax,ay,"
        "strategy,assessed_mode,true_mode\n";
  for (const StepRecord& r : log) {
    os << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                      r.t, r.ego.px, r.ego.py, r.ego.vx, r.ego.vy, r.leader.px,
                      r.leader.py, r.leader.vx, r.leader.vy, r.follower.px,
                      r.follower.py, r.follower.vx, r.follower.vy, r.action.ax,
                      r.action.ay,
                      r.strategy ? to_string(*r.strategy) : "",
                      r.assessed ? to_string(*r.assessed) : "",
                      to_string(r.true_mode));
  }
}

namespace {

std::string opt_fixed(const std::optional<double>& v, int digits) {
  return v ? fmt::format("{:.{}f}", *v, digits) : std::string();
}

}  // namespace

void write_metrics_csv(std::ostream& os, const std::vector<MetricsRow>& rows) {
  os << "class,planner,assess,episodes,lane_change_time_s,"
        "final_lateral_position_m,success_rate,collision_rate,timeout_rate\n";
  for (const MetricsRow& r : rows) {
    const Metrics& m = r.metrics;
    os << fmt::format("{},{},{},{},{},{},{:.6f},{:.6f},{:.6f}\n", r.cls,
                      to_string(r.planner), to_string(r.assess), m.count,
                      opt_fixed(m.mean_crossing_time, 4),
                      opt_fixed(m.mean_final_py, 4), m.success_rate,
                      m.collision_rate, m.timeout_rate);
  }
}

void write_metrics_table(std::ostream& os, const std::vector<MetricsRow>& rows) {
  os << fmt::format("{:<7} {:<7} {:<18} {:>8} {:>10} {:>10} {:>9} {:>9} {:>9}\n",
                    "class", "planner", "assess", "episodes", "time [s]",
                    "final y", "success", "collision", "timeout");
  for (const MetricsRow& r : rows) {
    const Metrics& m = r.metrics;
    os << fmt::format(
        "{:<7} {:<7} {:<18} {:>8} {:>10} {:>10} {:>8.2f}% {:>8.2f}% {:>8.2f}%\n",
        r.cls, to_string(r.planner), to_string(r.assess), m.count,
        m.mean_crossing_time ? fmt::format("{:.2f}", *m.mean_crossing_time) : "-",
        m.mean_final_py ? fmt::format("{:.2f}", *m.mean_final_py) : "-",
        100.0 * m.success_rate, 100.0 * m.collision_rate,
        100.0 * m.timeout_rate);
  }
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "difficulty,a_th,count,uncertain_rate,error_rate\n";
  for (const SweepRow& r : rows) {
    os << fmt::format("{},{},{},{:.6f},{:.6f}\n", to_string(r.difficulty),
                      r.a_th, r.count, r.uncertain_rate, r.error_rate);
  }
}

void write_sweep_table(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << fmt::format("{:<8} {:>6} {:>8} {:>10} {:>8}\n", "level", "a_th",
                    "count", "uncertain", "error");
  for (const SweepRow& r : rows) {
    os << fmt::format("{:<8} {:>6.2f} {:>8} {:>9.2f}% {:>7.2f}%\n",
                      to_string(r.difficulty), r.a_th, r.count,
                      100.0 * r.uncertain_rate, 100.0 * r.error_rate);
  }
}

}  // namespace safin
