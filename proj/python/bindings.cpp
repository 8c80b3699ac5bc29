// Copyright 2026 The mlmbias Authors
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <sstream>

#include "mlmbias/bias_scores.hpp"
#include "mlmbias/commands.hpp"
#include "mlmbias/dataset.hpp"
#include "mlmbias/error.hpp"
#include "mlmbias/measures.hpp"
#include "mlmbias/mock_backend.hpp"
#include "mlmbias/pipeline.hpp"
#include "mlmbias/records.hpp"
#include "mlmbias/stats.hpp"

namespace py = pybind11;
using namespace mlmbias;

namespace {

py::dict stat_dict(const StatResult& r) {
  py::dict d;
  d["test"] = r.test_name;
  d["statistic"] = r.statistic;
  d["df"] = r.df ? py::cast(*r.df) : py::none();
  d["p_value"] = r.p_value;
  d["significant"] = r.significant;
  d["note"] = r.note;
  return d;
}

Casing casing_of(const std::string& s) {
  if (s == "cased") return Casing::kCased;
  if (s == "uncased") return Casing::kUncased;
  throw ValidationError("casing", "expected 'cased' or 'uncased', got '" + s + "'");
}

std::vector<MeasureKind> measures_of(const std::vector<std::string>& names) {
  std::vector<MeasureKind> out;
  for (const auto& n : names) out.push_back(parse_measure(n));
  return out;
}

RunConfig config_of(const py::kwargs& kw) {
  RunConfig c;
  for (const auto& [key, value] : kw) {
    const std::string k = py::str(key);
    if (k == "dataset") c.dataset = value.cast<std::string>();
    else if (k == "kind") c.kind = value.cast<std::string>() == "cps" ? Source::kCps : Source::kSs;
    else if (k == "records") c.records = value.cast<std::vector<std::string>>();
    else if (k == "records_base") c.records_base = value.cast<std::vector<std::string>>();
    else if (k == "scores") c.scores = value.cast<std::string>();
    else if (k == "scores_base") c.scores_base = value.cast<std::string>();
    else if (k == "measures") c.measures = measures_of(value.cast<std::vector<std::string>>());
    else if (k == "out") c.out = value.cast<std::string>();
    else if (k == "casing") c.casing = casing_of(value.cast<std::string>());
    else if (k == "significance") c.significance = value.cast<bool>();
    else if (k == "allow_partial") c.allow_partial = value.cast<bool>();
    else if (k == "seed") c.seed = value.cast<std::uint64_t>();
    else if (k == "bias_knob") c.bias_knob = value.cast<double>();
    else if (k == "vocab_size") c.vocab_size = value.cast<std::int64_t>();
    else if (k == "model_id") c.model_id = value.cast<std::string>();
    else if (k == "manifest") c.manifest = value.cast<std::string>();
    else throw py::type_error("unknown option '" + k + "'");
  }
  return c;
}

// Runs a command; returns (exit code, report text).
template <int (*Fn)(const RunConfig&, std::ostream&)>
py::tuple run(const py::kwargs& kw) {
  const RunConfig c = config_of(kw);
  std::ostringstream report;
  const int code = Fn(c, report);
  return py::make_tuple(code, report.str());
}

std::unique_ptr<bool[]> bool_array(const std::vector<bool>& v) {
  std::unique_ptr<bool[]> out(new bool[v.size()]);
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i];
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Social-bias evaluation of masked language models.";
  m.attr("__version__") = MLMBIAS_VERSION;

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", error.ptr());
  py::register_exception<IoError>(m, "IoError", error.ptr());

  py::enum_<Mode>(m, "Mode")
      .value("ITERATIVE_MASKED", Mode::kIterativeMasked)
      .value("UNMASKED", Mode::kUnmasked);

  py::class_<TokenPredictionRecord>(m, "TokenPredictionRecord")
      .def(py::init<>())
      .def_readwrite("sentence_id", &TokenPredictionRecord::sentence_id)
      .def_readwrite("model_id", &TokenPredictionRecord::model_id)
      .def_readwrite("mode", &TokenPredictionRecord::mode)
      .def_readwrite("token_index", &TokenPredictionRecord::token_index)
      .def_readwrite("token_text", &TokenPredictionRecord::token_text)
      .def_readwrite("gt_rank", &TokenPredictionRecord::gt_rank)
      .def_readwrite("gt_logprob", &TokenPredictionRecord::gt_logprob)
      .def_readwrite("top_logprob", &TokenPredictionRecord::top_logprob)
      .def_readwrite("attention", &TokenPredictionRecord::attention)
      .def_readwrite("vocab_size", &TokenPredictionRecord::vocab_size)
      .def("to_json_line", [](const TokenPredictionRecord& r) { return to_json_line(r); })
      .def_static("from_json_line",
                  [](const std::string& line) { return parse_record_line(line); })
      .def("__eq__", [](const TokenPredictionRecord& a, const TokenPredictionRecord& b) {
        return a == b;
      });

  m.def("validate_record", [](const TokenPredictionRecord& r) { validate(r); });
  m.def("crr_token", &crr_token);
  m.def("dp_token", &dp_token);
  m.def("crra_token", &crra_token);
  m.def("dpa_token", &dpa_token);

  m.def("normalize", [](const std::string& text, const std::string& casing) {
    return normalize(text, casing_of(casing));
  }, py::arg("text"), py::arg("casing") = "uncased");
  m.def("split_tokens", [](const std::string& text) { return split_tokens(text); });
  m.def("align_pair", [](const std::vector<std::string>& dis, const std::vector<std::string>& adv) {
    const PairAlignment a = align_pair(dis, adv);
    py::dict d;
    d["unmodified_dis"] = a.unmodified_dis;
    d["unmodified_adv"] = a.unmodified_adv;
    d["modified_dis"] = a.modified_dis;
    d["modified_adv"] = a.modified_adv;
    return d;
  });

  // Sentence measures over one sentence's records.
  m.def("sentence_measures", [](const std::vector<TokenPredictionRecord>& records) {
    const RecordIndex idx = group_by_sentence(records);
    if (idx.size() != 1) throw ValidationError("sentence_id", "expected one sentence");
    const SentenceRecordSet& set = idx.begin()->second;
    py::dict d;
    if (!set.masked.empty()) {
      for (MeasureKind k : {MeasureKind::kCrr, MeasureKind::kCrra, MeasureKind::kDp,
                            MeasureKind::kDpa}) {
        d[py::str(std::string(to_string(k)))] = sentence_measure(set, k);
      }
    }
    if (!set.unmasked.empty()) {
      d["aul"] = aul(set);
      d["aula"] = aula(set);
    }
    return d;
  });

  m.def("bspt", [](const std::vector<double>& deltas) {
    std::vector<PairDelta> d;
    for (std::size_t i = 0; i < deltas.size(); ++i) d.push_back({std::to_string(i), MeasureKind::kCrr, deltas[i]});
    return bspt(d);
  }, "Percentage of strictly positive pair deltas.");
  m.def("bsrt", [](const std::vector<double>& first, const std::vector<double>& second) {
    std::vector<PairDelta> a;
    std::vector<PairDelta> b;
    for (std::size_t i = 0; i < first.size(); ++i) a.push_back({std::to_string(i), MeasureKind::kCrr, first[i]});
    for (std::size_t i = 0; i < second.size(); ++i) b.push_back({std::to_string(i), MeasureKind::kCrr, second[i]});
    return bsrt(a, b);
  }, "Percentage of pairs whose first delta exceeds the second.");

  m.def("welch_t", [](const std::vector<double>& a, const std::vector<double>& b) {
    return stat_dict(welch_t(a, b));
  });
  m.def("mcnemar", [](long n01, long n10) { return stat_dict(mcnemar(n01, n10)); });
  m.def("shapiro_wilk", [](const std::vector<double>& x) { return stat_dict(shapiro_wilk(x)); });
  m.def("ecdf", [](const std::vector<double>& v) {
    const EcdfSeries e = ecdf(v);
    return py::make_tuple(e.xs, e.fractions);
  });
  m.def("ecdf_diff", [](const std::vector<double>& a, const std::vector<double>& b) {
    const EcdfDifference d = ecdf_diff(ecdf(a), ecdf(b));
    return py::make_tuple(d.xs, d.diff);
  });
  m.def("roc", [](const std::vector<double>& scores, const std::vector<bool>& labels,
                  bool lower_is_positive) {
    const auto arr = bool_array(labels);
    const RocCurve c = roc(scores, std::span<const bool>(arr.get(), labels.size()),
                           lower_is_positive ? RocOrientation::kLowerIsPositive
                                             : RocOrientation::kHigherIsPositive);
    py::list points;
    for (const auto& p : c.points) points.append(py::make_tuple(p.fpr, p.tpr, p.threshold));
    py::dict d;
    d["points"] = points;
    d["auc"] = c.auc;
    d["youden_threshold"] = c.youden_threshold;
    d["youden_j"] = c.youden_j;
    return d;
  }, py::arg("scores"), py::arg("labels"), py::arg("lower_is_positive") = false);

  m.def("mock_sentence_records",
        [](const std::string& sentence_id, const std::vector<std::string>& tokens,
           bool disadvantaged, std::uint64_t seed, double bias_knob, std::int64_t vocab_size,
           const std::string& model_id) {
          MockModelSpec spec;
          spec.seed = seed;
          spec.bias_knob = bias_knob;
          spec.vocab_size = vocab_size;
          spec.model_id = model_id;
          return generate_sentence_records(sentence_id, tokens, disadvantaged, spec);
        },
        py::arg("sentence_id"), py::arg("tokens"), py::arg("disadvantaged"),
        py::arg("seed") = 0, py::arg("bias_knob") = 0.0, py::arg("vocab_size") = 30522,
        py::arg("model_id") = "mock");

  m.def("validate_dataset", &run<cmd_validate_dataset>);
  m.def("score", &run<cmd_score>);
  m.def("bias_score", &run<cmd_bias_score>);
  m.def("roc_command", &run<cmd_roc>);
  m.def("ecdf_command", &run<cmd_ecdf>);
  m.def("mock", &run<cmd_mock>);
}
