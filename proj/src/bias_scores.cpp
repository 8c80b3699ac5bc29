// Copyright 2026 The mlmbias Authors
// SPDX-License-Identifier: Apache-2.0

#include "mlmbias/bias_scores.hpp"

#include <algorithm>
#include <stdexcept>

#include "mlmbias/logging.hpp"

namespace mlmbias {

PairDelta pair_delta(const std::string& pair_id, const SentenceScore& dis,
                     const SentenceScore& adv, MeasureKind kind) {
  const auto f_dis = dis.get(kind);
  const auto f_adv = adv.get(kind);
  if (!f_dis || !f_adv) {
    throw std::invalid_argument("pair_delta: pair " + pair_id + " lacks " +
                                std::string(to_string(kind)));
  }
  const double delta =
      set_of(kind) == MeasureSet::kM1 ? *f_adv - *f_dis : *f_dis - *f_adv;
  return {pair_id, kind, delta};
}

double bspt(std::span<const PairDelta> deltas) {
  if (deltas.empty()) throw std::invalid_argument("bspt: no pairs");
  const auto preferred = std::count_if(
      deltas.begin(), deltas.end(), [](const PairDelta& d) { return d.delta > 0.0; });
  return 100.0 * static_cast<double>(preferred) /
         static_cast<double>(deltas.size());
}

double bsrt(std::span<const PairDelta> first,
            std::span<const PairDelta> second) {
  if (first.empty()) throw std::invalid_argument("bsrt: no pairs");
  if (first.size() != second.size()) {
    throw std::invalid_argument("bsrt: lists differ in length");
  }
  std::size_t count = 0;
  for (std::size_t i = 0; i < first.size(); ++i) {
    if (first[i].pair_id != second[i].pair_id ||
        first[i].measure != second[i].measure) {
      throw std::invalid_argument("bsrt: misaligned pair " + first[i].pair_id +
                                  " vs " + second[i].pair_id);
    }
    if (first[i].delta > second[i].delta) ++count;
  }
  return 100.0 * static_cast<double>(count) /
         static_cast<double>(first.size());
}

std::string dis_sentence_id(const SentencePair& pair) {
  return pair.pair_id + "/dis";
}

std::string adv_sentence_id(const SentencePair& pair) {
  return pair.pair_id + "/adv";
}

namespace {

// Looks up both sentences of a pair; nullopt with a reason when either
// score or the measure is missing.
struct Lookup {
  const SentenceScore* dis = nullptr;
  const SentenceScore* adv = nullptr;
  std::string reason;
};

Lookup lookup(const ScoreIndex& scores, const SentencePair& pair,
              MeasureKind kind, const char* which) {
  Lookup out;
  const auto d = scores.find(dis_sentence_id(pair));
  const auto a = scores.find(adv_sentence_id(pair));
  if (d == scores.end() || a == scores.end()) {
    out.reason = std::string("no ") + which + " score for " +
                 (d == scores.end() ? dis_sentence_id(pair)
                                    : adv_sentence_id(pair));
    return out;
  }
  if (!d->second.get(kind) || !a->second.get(kind)) {
    out.reason = std::string(to_string(kind)) + " undefined in " + which +
                 " scores";
    return out;
  }
  out.dis = &d->second;
  out.adv = &a->second;
  return out;
}

// Per-measure working set for one report row.
struct Accumulator {
  std::vector<PairDelta> deltas;
  std::vector<PairDelta> base_deltas;
  std::vector<double> f_adv;
  std::vector<double> f_dis;
};

ReportCell finish(const Accumulator& acc, MeasureKind kind,
                  const ReportOptions& options) {
  ReportCell cell;
  cell.n = acc.deltas.size();
  if (options.mode == ReportMode::kPretrained) {
    cell.score = bspt(acc.deltas);
    if (set_of(kind) == MeasureSet::kM1) {
      std::vector<double> diff(acc.f_adv.size());
      for (std::size_t i = 0; i < diff.size(); ++i) {
        diff[i] = acc.f_adv[i] - acc.f_dis[i];
      }
      cell.mean_difference = pairwise_sum(diff) / static_cast<double>(diff.size());
      if (options.significance && cell.n >= 2) {
        cell.significance = welch_t(acc.f_adv, acc.f_dis);
      }
    }
    return cell;
  }
  cell.score = bsrt(acc.deltas, acc.base_deltas);
  if (options.significance) {
    long n01 = 0;
    long n10 = 0;
    for (std::size_t i = 0; i < cell.n; ++i) {
      const bool p = acc.base_deltas[i].delta > 0.0;
      const bool r = acc.deltas[i].delta > 0.0;
      if (!p && r) ++n01;
      if (p && !r) ++n10;
    }
    cell.significance = mcnemar(n01, n10);
  }
  return cell;
}

}  // namespace

Contingency binarize_outcomes(const ScoreIndex& retrained,
                              const ScoreIndex& pretrained,
                              std::span<const SentencePair> pairs,
                              MeasureKind kind) {
  std::vector<bool> pre;
  std::vector<bool> re;
  for (const auto& pair : pairs) {
    const Lookup r = lookup(retrained, pair, kind, "retrained");
    const Lookup p = lookup(pretrained, pair, kind, "pretrained");
    if (!r.dis || !p.dis) continue;
    re.push_back(pair_delta(pair.pair_id, *r.dis, *r.adv, kind).delta > 0.0);
    pre.push_back(pair_delta(pair.pair_id, *p.dis, *p.adv, kind).delta > 0.0);
  }
  if (pre.empty()) {
    throw std::invalid_argument("binarize_outcomes: no pair scored by both models");
  }
  Contingency c;
  for (std::size_t i = 0; i < pre.size(); ++i) {
    if (pre[i]) {
      (re[i] ? c.n11 : c.n10)++;
    } else {
      (re[i] ? c.n01 : c.n00)++;
    }
  }
  return c;
}

BiasReport category_report(const ScoreIndex& scores,
                           std::span<const SentencePair> pairs,
                           const ReportOptions& options,
                           const ScoreIndex* base) {
  const bool retrained = options.mode == ReportMode::kRetrainedVsBase;
  if (retrained && base == nullptr) {
    throw std::invalid_argument("category_report: retrained mode needs base scores");
  }
  BiasReport report;
  report.mode = options.mode;
  report.measures = options.measures;
  report.source = pairs.empty() ? Source::kCps : pairs.front().source;
  if (!scores.empty()) report.model_id = scores.begin()->second.model_id;
  if (retrained && !base->empty()) {
    report.base_model_id = base->begin()->second.model_id;
  }

  std::map<BiasType, std::map<MeasureKind, Accumulator>> by_category;
  std::map<MeasureKind, Accumulator> overall;
  for (const auto& pair : pairs) {
    for (MeasureKind kind : options.measures) {
      const Lookup cur = lookup(scores, pair, kind, retrained ? "retrained" : "model");
      if (!cur.dis) {
        report.skipped.push_back({pair.pair_id, kind, cur.reason});
        continue;
      }
      Lookup ref;
      if (retrained) {
        ref = lookup(*base, pair, kind, "base");
        if (!ref.dis) {
          report.skipped.push_back({pair.pair_id, kind, ref.reason});
          continue;
        }
      }
      for (Accumulator* acc : {&by_category[pair.bias_type][kind], &overall[kind]}) {
        acc->deltas.push_back(pair_delta(pair.pair_id, *cur.dis, *cur.adv, kind));
        acc->f_dis.push_back(*cur.dis->get(kind));
        acc->f_adv.push_back(*cur.adv->get(kind));
        if (retrained) {
          acc->base_deltas.push_back(pair_delta(pair.pair_id, *ref.dis, *ref.adv, kind));
        }
      }
    }
  }

  auto emit = [&](const std::string& row,
                  const std::map<MeasureKind, Accumulator>& accs) {
    std::map<MeasureKind, ReportCell> cells;
    for (MeasureKind kind : options.measures) {
      auto it = accs.find(kind);
      if (it == accs.end() || it->second.deltas.empty()) continue;
      cells[kind] = finish(it->second, kind, options);
    }
    if (cells.empty()) {
      log::warn("category '{}' has no scored pairs; omitted", row);
      return;
    }
    report.row_order.push_back(row);
    report.rows[row] = std::move(cells);
  };

  for (BiasType type : categories(report.source)) {
    auto it = by_category.find(type);
    if (it == by_category.end()) continue;
    emit(std::string(to_string(type)), it->second);
  }
  emit(kOverallRow, overall);
  return report;
}

std::vector<ErrorRate> binary_classification_eval(std::span<const BsrtCell> cells) {
  std::vector<ErrorRate> out;
  for (const auto& cell : cells) {
    auto it = std::find_if(out.begin(), out.end(), [&](const ErrorRate& e) {
      return e.measure == cell.measure;
    });
    if (it == out.end()) {
      out.push_back({cell.measure, 0, 0, 0, 0.0});
      it = std::prev(out.end());
    }
    const bool predicted = cell.score > 50.0;
    const bool truth = cell.direction == RetrainDirection::kDis;
    if (cell.score == 50.0) {
      ++it->ties;
      log::warn("BSRT exactly 50 for {} / {} / {}; predicted 0",
                cell.model_id, cell.category, to_string(cell.measure));
    }
    ++it->cells;
    if (predicted != truth) ++it->errors;
  }
  for (auto& e : out) {
    e.rate = static_cast<double>(e.errors) / static_cast<double>(e.cells);
  }
  return out;
}

std::vector<BsrtCell> bsrt_cells(const BiasReport& report,
                                 RetrainDirection direction) {
  if (report.mode != ReportMode::kRetrainedVsBase) {
    throw std::invalid_argument("bsrt_cells: report is not retrained-vs-base");
  }
  std::vector<BsrtCell> out;
  for (const auto& row : report.row_order) {
    if (row == kOverallRow) continue;
    for (const auto& [kind, cell] : report.rows.at(row)) {
      out.push_back({report.model_id, direction, row, kind, cell.score});
    }
  }
  return out;
}

}  // namespace mlmbias
