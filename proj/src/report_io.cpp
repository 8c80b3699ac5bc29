// Copyright 2026 The mlmbias Authors
// SPDX-License-Identifier: Apache-2.0

#include "mlmbias/report_io.hpp"

#include <fmt/format.h>

#include <istream>
#include <ostream>

#include "json.hpp"
#include "mlmbias/error.hpp"

namespace mlmbias {

using nlohmann::ordered_json;

std::string format_real(double v) { return fmt::format("{}", v); }

ScoreIndex read_scores(std::istream& source) {
  ScoreIndex out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(source, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    SentenceScore s = parse_score_line(line, line_no);
    const std::string id = s.sentence_id;
    if (!out.emplace(id, std::move(s)).second) {
      throw ValidationError("sentence_id", "line " + std::to_string(line_no) +
                                               ": duplicate score for " + id);
    }
  }
  return out;
}

namespace {

bool has_significance(const BiasReport& report, MeasureKind kind) {
  for (const auto& [row, cells] : report.rows) {
    auto it = cells.find(kind);
    if (it != cells.end() && it->second.significance) return true;
  }
  return false;
}

ordered_json stat_json(const StatResult& r) {
  ordered_json j;
  j["test"] = r.test_name;
  j["statistic"] = r.statistic;
  j["df"] = r.df ? ordered_json(*r.df) : ordered_json(nullptr);
  j["p_value"] = r.p_value;
  j["significant"] = r.significant;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

}  // namespace

void write_report_csv(const BiasReport& report, std::ostream& sink) {
  std::vector<std::string> header{"bias_type"};
  for (MeasureKind k : report.measures) {
    const std::string m(to_string(k));
    header.push_back(m);
    header.push_back(m + "_n");
    if (has_significance(report, k)) header.push_back(m + "_p");
  }
  sink << fmt::format("{}\n", fmt::join(header, ","));
  for (const auto& row : report.row_order) {
    const auto& cells = report.rows.at(row);
    std::vector<std::string> fields{row};
    for (MeasureKind k : report.measures) {
      auto it = cells.find(k);
      const bool sig = has_significance(report, k);
      if (it == cells.end()) {
        fields.insert(fields.end(), sig ? 3 : 2, "");
        continue;
      }
      fields.push_back(format_real(it->second.score));
      fields.push_back(std::to_string(it->second.n));
      if (sig) {
        fields.push_back(it->second.significance
                             ? format_real(it->second.significance->p_value)
                             : "");
      }
    }
    sink << fmt::format("{}\n", fmt::join(fields, ","));
  }
  if (!sink) throw IoError("failed writing bias report CSV");
}

void write_welch_csv(const BiasReport& report, std::ostream& sink) {
  sink << "bias_type,measure,mean_difference,t,df,p,significant\n";
  for (const auto& row : report.row_order) {
    for (const auto& [kind, cell] : report.rows.at(row)) {
      if (!cell.mean_difference) continue;
      sink << row << ',' << to_string(kind) << ','
           << format_real(*cell.mean_difference);
      if (cell.significance) {
        const auto& s = *cell.significance;
        sink << ',' << format_real(s.statistic) << ','
             << (s.df ? format_real(*s.df) : "") << ','
             << format_real(s.p_value) << ',' << (s.significant ? 1 : 0);
      } else {
        sink << ",,,,";
      }
      sink << '\n';
    }
  }
  if (!sink) throw IoError("failed writing Welch CSV");
}

std::string report_to_json(const BiasReport& report) {
  ordered_json j;
  j["mode"] = report.mode == ReportMode::kPretrained ? "pretrained"
                                                     : "retrained-compare";
  j["model_id"] = report.model_id;
  if (report.mode == ReportMode::kRetrainedVsBase) {
    j["base_model_id"] = report.base_model_id;
  }
  j["source"] = std::string(to_string(report.source));
  j["measures"] = ordered_json::array();
  for (MeasureKind k : report.measures) {
    j["measures"].push_back(std::string(to_string(k)));
  }
  j["rows"] = ordered_json::array();
  for (const auto& row : report.row_order) {
    ordered_json r;
    r["bias_type"] = row;
    r["cells"] = ordered_json::object();
    for (MeasureKind k : report.measures) {
      const auto& cells = report.rows.at(row);
      auto it = cells.find(k);
      if (it == cells.end()) continue;
      ordered_json c;
      c["score"] = it->second.score;
      c["n"] = it->second.n;
      if (it->second.mean_difference) {
        c["mean_difference"] = *it->second.mean_difference;
      }
      if (it->second.significance) {
        c["significance"] = stat_json(*it->second.significance);
      }
      r["cells"][std::string(to_string(k))] = std::move(c);
    }
    j["rows"].push_back(std::move(r));
  }
  j["skipped"] = ordered_json::array();
  for (const auto& s : report.skipped) {
    j["skipped"].push_back({{"pair_id", s.pair_id},
                            {"measure", std::string(to_string(s.measure))},
                            {"reason", s.reason}});
  }
  return j.dump(2) + "\n";
}

void write_roc_csv(const RocCurve& curve, std::ostream& sink) {
  sink << "fpr,tpr,threshold\n";
  for (const auto& p : curve.points) {
    sink << format_real(p.fpr) << ',' << format_real(p.tpr) << ','
         << format_real(p.threshold) << '\n';
  }
  if (!sink) throw IoError("failed writing ROC CSV");
}

std::string roc_summary_to_json(const std::vector<RocSummary>& summaries) {
  ordered_json j = ordered_json::array();
  for (const auto& s : summaries) {
    j.push_back({
        {"measure", std::string(to_string(s.measure))},
        {"orientation", s.orientation == RocOrientation::kLowerIsPositive
                            ? "lower-is-positive"
                            : "higher-is-positive"},
        {"positives", s.positives},
        {"negatives", s.negatives},
        {"auc", s.curve.auc},
        {"youden_threshold", s.curve.youden_threshold},
        {"youden_j", s.curve.youden_j},
    });
  }
  return j.dump(2) + "\n";
}

void write_ecdf_csv(const EcdfSeries& dis, const EcdfSeries& adv,
                    const EcdfDifference& diff, std::ostream& sink) {
  sink << "series,x,y\n";
  for (std::size_t i = 0; i < dis.xs.size(); ++i) {
    sink << "dis," << format_real(dis.xs[i]) << ','
         << format_real(dis.fractions[i]) << '\n';
  }
  for (std::size_t i = 0; i < adv.xs.size(); ++i) {
    sink << "adv," << format_real(adv.xs[i]) << ','
         << format_real(adv.fractions[i]) << '\n';
  }
  for (std::size_t i = 0; i < diff.xs.size(); ++i) {
    sink << "diff," << format_real(diff.xs[i]) << ','
         << format_real(diff.diff[i]) << '\n';
  }
  if (!sink) throw IoError("failed writing ECDF CSV");
}

}  // namespace mlmbias
