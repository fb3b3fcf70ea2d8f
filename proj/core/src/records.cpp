// Copyright 2026 The Cheaptalk Authors
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

#include "cheaptalk/records.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cheaptalk {
namespace {

// The JSONL writer is handwritten so the on-disk double format is pinned to
// 17 significant digits: that is enough for exact round-trips, which the
// analyze command depends on.

void append_matrix(std::string& out, const Matrix& m) {
  out += '[';
  for (int r = 0; r < m.rows(); ++r) {
    if (r > 0) out += ',';
    out += '[';
    for (int c = 0; c < m.cols(); ++c) {
      if (c > 0) out += ',';
      out += format_double(m(r, c));
    }
    out += ']';
  }
  out += ']';
}

Matrix matrix_from_json(const nlohmann::json& rows) {
  const int n_rows = static_cast<int>(rows.size());
  const int n_cols = n_rows > 0 ? static_cast<int>(rows[0].size()) : 0;
  Matrix m(n_rows, n_cols);
  for (int r = 0; r < n_rows; ++r) {
    for (int c = 0; c < n_cols; ++c) {
      m(r, c) = rows[r][c].get<double>();
    }
  }
  return m;
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

std::ifstream open_for_read(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return in;
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ';';
    if constexpr (std::is_same_v<T, double>) {
      out += format_double(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    const std::size_t end = text.find(sep, begin);
    if (end == std::string::npos) {
      out.push_back(text.substr(begin));
      break;
    }
    out.push_back(text.substr(begin, end - begin));
    begin = end + 1;
  }
  return out;
}

const char* kSummaryFields[] = {"mean", "median",  "q05",     "q25",
                                "q75",  "q95",     "min",     "max",
                                "hist_lo", "hist_hi", "hist"};

void append_summary_header(std::string& header, const std::string& prefix) {
  for (const char* field : kSummaryFields) {
    header += ',';
    header += prefix;
    header += '_';
    header += field;
  }
}

void append_summary_row(std::string& row, const DistSummary& s) {
  row += ',' + format_double(s.mean);
  row += ',' + format_double(s.median);
  row += ',' + format_double(s.q05);
  row += ',' + format_double(s.q25);
  row += ',' + format_double(s.q75);
  row += ',' + format_double(s.q95);
  row += ',' + format_double(s.min);
  row += ',' + format_double(s.max);
  row += ',' + format_double(s.hist_lo);
  row += ',' + format_double(s.hist_hi);
  row += ',' + join(s.hist);
}

class CsvRow {
 public:
  CsvRow(const std::vector<std::string>& header,
         const std::vector<std::string>& cells, const std::string& path)
      : header_(header), cells_(cells), path_(path) {}

  const std::string& raw(const std::string& column) const {
    for (std::size_t i = 0; i < header_.size(); ++i) {
      if (header_[i] == column) {
        if (i >= cells_.size()) break;
        return cells_[i];
      }
    }
    throw std::runtime_error(path_ + ": missing column '" + column + "'");
  }
  double number(const std::string& column) const {
    return std::strtod(raw(column).c_str(), nullptr);
  }
  long long integer(const std::string& column) const {
    return std::strtoll(raw(column).c_str(), nullptr, 10);
  }

 private:
  const std::vector<std::string>& header_;
  const std::vector<std::string>& cells_;
  const std::string& path_;
};

DistSummary summary_from_row(const CsvRow& row, const std::string& prefix) {
  DistSummary s;
  s.mean = row.number(prefix + "_mean");
  s.median = row.number(prefix + "_median");
  s.q05 = row.number(prefix + "_q05");
  s.q25 = row.number(prefix + "_q25");
  s.q75 = row.number(prefix + "_q75");
  s.q95 = row.number(prefix + "_q95");
  s.min = row.number(prefix + "_min");
  s.max = row.number(prefix + "_max");
  s.hist_lo = row.number(prefix + "_hist_lo");
  s.hist_hi = row.number(prefix + "_hist_hi");
  s.hist.clear();
  const std::string& hist = row.raw(prefix + "_hist");
  if (!hist.empty()) {
    for (const std::string& cell : split(hist, ';')) {
      s.hist.push_back(std::strtoll(cell.c_str(), nullptr, 10));
    }
  }
  return s;
}

}  // namespace

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string fingerprint_hex(std::uint64_t fingerprint) {
  char buffer[24];
  std::snprintf(buffer, sizeof(buffer), "%016llx",
                static_cast<unsigned long long>(fingerprint));
  return buffer;
}

void write_records_jsonl(const std::vector<RunRecord>& records,
                         const std::string& path) {
  std::ofstream out = open_for_write(path);
  std::string line;
  for (const RunRecord& rec : records) {
    line.clear();
    line += "{\"seed\":" + std::to_string(rec.seed);
    line += ",\"game_fingerprint\":\"" + fingerprint_hex(rec.game_fingerprint);
    line += "\",\"bias\":" + format_double(rec.bias);
    line += ",\"alpha\":" + format_double(rec.alpha);
    line += ",\"lambda\":" + format_double(rec.lambda);
    line += ",\"converged\":";
    line += rec.converged ? "true" : "false";
    line += ",\"periods_elapsed\":" + std::to_string(rec.periods_elapsed);
    line += ",\"u_sender\":" + format_double(rec.u_sender);
    line += ",\"u_receiver\":" + format_double(rec.u_receiver);
    line += ",\"mutual_info\":" + format_double(rec.mutual_info);
    line += ",\"max_subopt_sender\":" + format_double(rec.max_subopt_sender);
    line +=
        ",\"max_subopt_receiver\":" + format_double(rec.max_subopt_receiver);
    line += ",\"gain_sender\":" + format_double(rec.gain_sender);
    line += ",\"gain_receiver\":" + format_double(rec.gain_receiver);
    line += ",\"is_eps_nash\":";
    line += rec.is_eps_nash ? "true" : "false";
    if (rec.has_policies) {
      line += ",\"policy_sender\":";
      append_matrix(line, rec.policy_sender);
      line += ",\"policy_receiver\":";
      append_matrix(line, rec.policy_receiver);
    }
    line += "}\n";
    out << line;
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<RunRecord> read_records_jsonl(const std::string& path) {
  std::ifstream in = open_for_read(path);
  std::vector<RunRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " +
                               e.what());
    }
    RunRecord rec;
    rec.seed = j.at("seed").get<std::uint64_t>();
    rec.game_fingerprint = std::strtoull(
        j.at("game_fingerprint").get<std::string>().c_str(), nullptr, 16);
    rec.bias = j.at("bias").get<double>();
    rec.alpha = j.at("alpha").get<double>();
    rec.lambda = j.at("lambda").get<double>();
    rec.converged = j.at("converged").get<bool>();
    rec.periods_elapsed = j.at("periods_elapsed").get<std::int64_t>();
    rec.u_sender = j.at("u_sender").get<double>();
    rec.u_receiver = j.at("u_receiver").get<double>();
    rec.mutual_info = j.at("mutual_info").get<double>();
    rec.max_subopt_sender = j.at("max_subopt_sender").get<double>();
    rec.max_subopt_receiver = j.at("max_subopt_receiver").get<double>();
    rec.gain_sender = j.at("gain_sender").get<double>();
    rec.gain_receiver = j.at("gain_receiver").get<double>();
    rec.is_eps_nash = j.at("is_eps_nash").get<bool>();
    if (j.contains("policy_sender")) {
      rec.has_policies = true;
      rec.policy_sender = matrix_from_json(j.at("policy_sender"));
      rec.policy_receiver = matrix_from_json(j.at("policy_receiver"));
    }
    out.push_back(std::move(rec));
  }
  return out;
}

void write_aggregates_csv(const std::vector<AggregateRecord>& aggregates,
                          const std::string& path) {
  std::ofstream out = open_for_write(path);
  std::string header =
      "bias,alpha,lambda,n_runs,n_missing,n_converged,n_eps_nash,"
      "convergence_freq,eps_nash_freq";
  for (const char* prefix :
       {"u_sender", "u_receiver", "mutual_info", "max_subopt_sender",
        "max_subopt_receiver", "gain_sender", "gain_receiver"}) {
    append_summary_header(header, prefix);
  }
  header +=
      ",modal_sender_actions,modal_sender_freqs,modal_receiver_actions,"
      "modal_receiver_freqs,modal_sender_mi,babbling_u_sender,"
      "babbling_u_receiver,optimal_u_sender,optimal_u_receiver,optimal_mi,"
      "n_equilibria";
  out << header << '\n';
  for (const AggregateRecord& agg : aggregates) {
    std::string row = format_double(agg.bias);
    row += ',' + format_double(agg.alpha);
    row += ',' + format_double(agg.lambda);
    row += ',' + std::to_string(agg.n_runs);
    row += ',' + std::to_string(agg.n_missing);
    row += ',' + std::to_string(agg.n_converged);
    row += ',' + std::to_string(agg.n_eps_nash);
    row += ',' + format_double(agg.convergence_freq);
    row += ',' + format_double(agg.eps_nash_freq);
    append_summary_row(row, agg.u_sender);
    append_summary_row(row, agg.u_receiver);
    append_summary_row(row, agg.mutual_info);
    append_summary_row(row, agg.max_subopt_sender);
    append_summary_row(row, agg.max_subopt_receiver);
    append_summary_row(row, agg.gain_sender);
    append_summary_row(row, agg.gain_receiver);
    row += ',' + join(agg.modal_sender_actions);
    row += ',' + join(agg.modal_sender_freqs);
    row += ',' + join(agg.modal_receiver_actions);
    row += ',' + join(agg.modal_receiver_freqs);
    row += ',' + format_double(agg.modal_sender_mi);
    row += ',' + format_double(agg.babbling_u_sender);
    row += ',' + format_double(agg.babbling_u_receiver);
    row += ',' + format_double(agg.optimal_u_sender);
    row += ',' + format_double(agg.optimal_u_receiver);
    row += ',' + format_double(agg.optimal_mi);
    row += ',' + std::to_string(agg.n_equilibria);
    out << row << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<AggregateRecord> read_aggregates_csv(const std::string& path) {
  std::ifstream in = open_for_read(path);
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error(path + ": empty aggregates file");
  }
  const std::vector<std::string> header = split(line, ',');
  std::vector<AggregateRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> cells = split(line, ',');
    CsvRow row(header, cells, path);
    AggregateRecord agg;
    agg.bias = row.number("bias");
    agg.alpha = row.number("alpha");
    agg.lambda = row.number("lambda");
    agg.n_runs = static_cast<int>(row.integer("n_runs"));
    agg.n_missing = static_cast<int>(row.integer("n_missing"));
    agg.n_converged = static_cast<int>(row.integer("n_converged"));
    agg.n_eps_nash = static_cast<int>(row.integer("n_eps_nash"));
    agg.convergence_freq = row.number("convergence_freq");
    agg.eps_nash_freq = row.number("eps_nash_freq");
    agg.u_sender = summary_from_row(row, "u_sender");
    agg.u_receiver = summary_from_row(row, "u_receiver");
    agg.mutual_info = summary_from_row(row, "mutual_info");
    agg.max_subopt_sender = summary_from_row(row, "max_subopt_sender");
    agg.max_subopt_receiver = summary_from_row(row, "max_subopt_receiver");
    agg.gain_sender = summary_from_row(row, "gain_sender");
    agg.gain_receiver = summary_from_row(row, "gain_receiver");
    auto int_list = [&](const std::string& column) {
      std::vector<int> values;
      const std::string& cell = row.raw(column);
      if (!cell.empty()) {
        for (const std::string& item : split(cell, ';')) {
          values.push_back(static_cast<int>(std::strtol(item.c_str(),
                                                        nullptr, 10)));
        }
      }
      return values;
    };
    auto double_list = [&](const std::string& column) {
      std::vector<double> values;
      const std::string& cell = row.raw(column);
      if (!cell.empty()) {
        for (const std::string& item : split(cell, ';')) {
          values.push_back(std::strtod(item.c_str(), nullptr));
        }
      }
      return values;
    };
    agg.modal_sender_actions = int_list("modal_sender_actions");
    agg.modal_sender_freqs = double_list("modal_sender_freqs");
    agg.modal_receiver_actions = int_list("modal_receiver_actions");
    agg.modal_receiver_freqs = double_list("modal_receiver_freqs");
    agg.modal_sender_mi = row.number("modal_sender_mi");
    agg.babbling_u_sender = row.number("babbling_u_sender");
    agg.babbling_u_receiver = row.number("babbling_u_receiver");
    agg.optimal_u_sender = row.number("optimal_u_sender");
    agg.optimal_u_receiver = row.number("optimal_u_receiver");
    agg.optimal_mi = row.number("optimal_mi");
    agg.n_equilibria = static_cast<int>(row.integer("n_equilibria"));
    out.push_back(std::move(agg));
  }
  return out;
}

}  // namespace cheaptalk
