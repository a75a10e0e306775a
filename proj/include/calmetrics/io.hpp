#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "calmetrics/core_metrics.hpp"
#include "calmetrics/evaluate.hpp"
#include "calmetrics/format.hpp"
#include "calmetrics/mc_oracle.hpp"
#include "calmetrics/rank_analysis.hpp"

namespace calmetrics {

struct InputRecord {
  std::uint8_t label = 0;
  double score = 0.0;
  std::optional<std::string> group;
};

namespace detail {

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline std::uint8_t parse_label(std::string_view field, std::size_t line) {
  if (field == "0") return 0;
  if (field == "1") return 1;
  throw ParseError(line, "label must be 0 or 1, got '" + std::string(field) +
                             "'");
}

inline double parse_real(std::string_view field, std::size_t line,
                         std::string_view what) {
  double v = 0.0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (field.empty() || ec != std::errc{} || ptr != last || !std::isfinite(v)) {
    throw ParseError(line, std::string(what) + " must be a finite number, got '" +
                               std::string(field) + "'");
  }
  return v;
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return in;
}

}  // namespace detail

// Reads "label,score[,group]" CSV. Line 1 must be the header; blank lines
// are ignored; any malformed row is a ParseError naming its line.
inline std::vector<InputRecord> read_records(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool has_group = false;
  std::vector<InputRecord> out;

  if (!std::getline(in, line)) throw ParseError(1, "missing header");
  ++line_no;
  {
    std::vector<std::string> cols;
    for (auto f : detail::split_commas(line)) {
      cols.emplace_back(detail::trim(f));
    }
    if (!cols.empty() && cols[0].starts_with("\xEF\xBB\xBF")) {
      cols[0].erase(0, 3);
    }
    if (cols.size() == 3 && cols[0] == "label" && cols[1] == "score" &&
        cols[2] == "group") {
      has_group = true;
    } else if (!(cols.size() == 2 && cols[0] == "label" && cols[1] == "score")) {
      throw ParseError(1, "header must be 'label,score' or 'label,score,group'");
    }
  }

  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split_commas(line);
    const std::size_t expected = has_group ? 3 : 2;
    if (fields.size() != expected) {
      throw ParseError(line_no, "expected " + std::to_string(expected) +
                                    " fields, got " +
                                    std::to_string(fields.size()));
    }
    InputRecord rec;
    rec.label = detail::parse_label(detail::trim(fields[0]), line_no);
    rec.score = detail::parse_real(detail::trim(fields[1]), line_no, "score");
    if (has_group) rec.group = std::string(detail::trim(fields[2]));
    out.push_back(std::move(rec));
  }
  if (out.empty()) throw ParseError(line_no, "no data rows");
  return out;
}

inline std::vector<InputRecord> read_records(const std::string& path) {
  auto in = detail::open_input(path);
  return read_records(in);
}

inline LabeledScores to_labeled_scores(const std::vector<InputRecord>& recs) {
  std::vector<std::uint8_t> labels;
  std::vector<double> scores;
  labels.reserve(recs.size());
  scores.reserve(recs.size());
  for (const auto& r : recs) {
    labels.push_back(r.label);
    scores.push_back(r.score);
  }
  return LabeledScores(std::move(labels), std::move(scores));
}

// Records split by group id, in sorted group order. Records without a group
// land under the empty id.
inline std::map<std::string, LabeledScores> group_records(
    const std::vector<InputRecord>& recs) {
  std::map<std::string, std::vector<InputRecord>> buckets;
  for (const auto& r : recs) buckets[r.group.value_or("")].push_back(r);
  std::map<std::string, LabeledScores> out;
  for (const auto& [g, rs] : buckets) out.emplace(g, to_labeled_scores(rs));
  return out;
}

// Stable key order: group, n, n_pos, pi, pi0, threshold, values,
// argmax_thresholds, clamped.
inline std::string to_json(const MetricReport& r) {
  std::string s = "{\"group\":";
  s += r.group ? json_string(*r.group) : "null";
  s += ",\"n\":" + std::to_string(r.n);
  s += ",\"n_pos\":" + std::to_string(r.n_pos);
  s += ",\"pi\":" + json_number(r.pi);
  s += ",\"pi0\":" + (r.pi0 ? json_number(*r.pi0) : std::string("null"));
  s += ",\"threshold\":" + json_number(r.threshold);
  s += ",\"values\":{";
  for (std::size_t i = 0; i < r.values.size(); ++i) {
    if (i) s += ',';
    s += json_string(r.values[i].first) + ':' +
         (r.values[i].second ? json_number(*r.values[i].second) : "null");
  }
  s += "},\"argmax_thresholds\":{";
  bool first = true;
  for (const auto& [k, v] : r.argmax_thresholds) {
    if (!first) s += ',';
    first = false;
    s += json_string(k) + ':' + json_number(v);
  }
  s += "},\"clamped\":[";
  for (std::size_t i = 0; i < r.clamped.size(); ++i) {
    if (i) s += ',';
    s += json_string(r.clamped[i]);
  }
  s += "]}";
  return s;
}

// CSV form for multi-group output; all reports must list the same metrics.
inline void write_reports_csv(std::ostream& os,
                              const std::vector<MetricReport>& reports) {
  if (reports.empty()) return;
  os << "group,n,n_pos,pi,pi0";
  for (const auto& [name, v] : reports.front().values) os << ',' << name;
  os << '\n';
  for (const auto& r : reports) {
    os << r.group.value_or("") << ',' << r.n << ',' << r.n_pos << ','
       << format_double(r.pi) << ',' << (r.pi0 ? format_double(*r.pi0) : "");
    for (const auto& [name, v] : r.values) {
      os << ',' << (v ? format_double(*v) : "");
    }
    os << '\n';
  }
}

inline std::string to_json(const OracleResult& r,
                           std::optional<double> closed_form = std::nullopt) {
  std::string s = "{\"metric\":" + json_string(r.metric);
  s += ",\"mean\":" + json_number(r.mean);
  s += ",\"std\":" + json_number(r.std);
  s += ",\"runs\":" + std::to_string(r.runs);
  s += ",\"pi0_target\":" + json_number(r.pi0_target);
  s += ",\"achieved_pi\":" + json_number(r.achieved_pi);
  if (closed_form) s += ",\"closed_form\":" + json_number(*closed_form);
  s += '}';
  return s;
}

// Pool CSV: header "label,<model>,<model>,...", then one row per instance.
inline ModelPool read_pool(std::istream& in, std::string dataset_id) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "missing header");
  ModelPool pool;
  pool.dataset_id = std::move(dataset_id);
  const auto header = detail::split_commas(line);
  if (header.size() < 3 || detail::trim(header[0]) != "label") {
    throw ParseError(1, "pool header must be 'label' followed by >= 2 models");
  }
  for (std::size_t j = 1; j < header.size(); ++j) {
    pool.model_names.emplace_back(detail::trim(header[j]));
  }
  pool.scores.resize(pool.model_names.size());
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split_commas(line);
    if (fields.size() != header.size()) {
      throw ParseError(line_no, "expected " + std::to_string(header.size()) +
                                    " fields, got " +
                                    std::to_string(fields.size()));
    }
    pool.labels.push_back(detail::parse_label(detail::trim(fields[0]), line_no));
    for (std::size_t j = 1; j < fields.size(); ++j) {
      pool.scores[j - 1].push_back(
          detail::parse_real(detail::trim(fields[j]), line_no, "score"));
    }
  }
  if (pool.labels.empty()) throw ParseError(line_no, "no data rows");
  pool.validate();
  return pool;
}

inline ModelPool read_pool(const std::string& path) {
  auto in = detail::open_input(path);
  return read_pool(in, path);
}

}  // namespace calmetrics
