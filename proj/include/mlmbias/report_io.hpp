// Copyright 2026 The mlmbias Authors
// SPDX-License-Identifier: Apache-2.0
//
// Plain-text emission of reports and series. Reals are written in their
// shortest round-trip form so outputs are byte-stable.

#ifndef MLMBIAS_REPORT_IO_HPP_
#define MLMBIAS_REPORT_IO_HPP_

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "mlmbias/bias_scores.hpp"
#include "mlmbias/stats.hpp"

namespace mlmbias {

std::string format_real(double v);

// Reads scores.jsonl (blank lines skipped). Throws ParseError with the line
// number, or ValidationError on a duplicate sentence id.
ScoreIndex read_scores(std::istream& source);

// Wide table: bias_type, then per measure `<m>` and `<m>_n`, plus `<m>_p`
// when any cell carries a significance result. Missing cells are empty.
void write_report_csv(const BiasReport& report, std::ostream& sink);

// Pretrained reports only: bias_type, measure, mean_difference, t, df, p,
// significant for every M1 cell.
void write_welch_csv(const BiasReport& report, std::ostream& sink);

// Pretty-printed JSON with N, significance and skipped pairs.
std::string report_to_json(const BiasReport& report);

// fpr, tpr, threshold.
void write_roc_csv(const RocCurve& curve, std::ostream& sink);

struct RocSummary {
  MeasureKind measure = MeasureKind::kCrr;
  RocOrientation orientation = RocOrientation::kHigherIsPositive;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  RocCurve curve;
};

std::string roc_summary_to_json(const std::vector<RocSummary>& summaries);

// Long format: series (dis, adv, diff), x, y.
void write_ecdf_csv(const EcdfSeries& dis, const EcdfSeries& adv,
                    const EcdfDifference& diff, std::ostream& sink);

}  // namespace mlmbias

#endif  // MLMBIAS_REPORT_IO_HPP_
