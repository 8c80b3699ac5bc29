// Copyright 2026 The mlmbias Authors
// SPDX-License-Identifier: Apache-2.0

#include "mlmbias/commands.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include "json.hpp"
#include "mlmbias/bias_scores.hpp"
#include "mlmbias/error.hpp"
#include "mlmbias/logging.hpp"
#include "mlmbias/mock_backend.hpp"
#include "mlmbias/pipeline.hpp"
#include "mlmbias/records.hpp"
#include "mlmbias/report_io.hpp"

namespace mlmbias {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                              EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw IoError("sha256: digest init failed");
  }
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) {
      EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
  }
  if (in.bad()) throw IoError("read failed: " + path);
  std::array<unsigned char, EVP_MAX_MD_SIZE> md;
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
  return hex;
}

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return in;
}

// Output files are written under config.out and collected for the manifest.
class OutputDir {
 public:
  explicit OutputDir(const std::string& dir) : dir_(dir) {
    fs::create_directories(dir_);
  }

  void write(const std::string& name, const std::string& content) {
    const fs::path p = dir_ / name;
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out) throw IoError("cannot write " + p.string());
    files_.push_back(p.string());
  }

  const std::vector<std::string>& files() const { return files_; }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

Source resolve_kind(const RunConfig& config) {
  if (config.kind) return *config.kind;
  const std::string ext = fs::path(config.dataset).extension().string();
  if (ext == ".csv") return Source::kCps;
  if (ext == ".json") return Source::kSs;
  throw ValidationError("kind", "cannot infer dataset kind from '" +
                                    config.dataset + "'; pass --kind");
}

std::vector<TokenPredictionRecord> load_records(
    const std::vector<std::string>& paths) {
  std::vector<TokenPredictionRecord> all;
  for (const auto& path : paths) {
    auto in = open_in(path);
    try {
      auto recs = read_records(in);
      all.insert(all.end(), std::make_move_iterator(recs.begin()),
                 std::make_move_iterator(recs.end()));
    } catch (const Error& e) {
      throw ParseError(path + ": " + e.what());
    }
  }
  return all;
}

struct Scored {
  ScoreIndex index;
  std::vector<std::string> missing;
};

Scored scores_from(const RunConfig& config, std::span<const SentencePair> pairs,
                   const std::string& scores_path,
                   const std::vector<std::string>& record_paths) {
  Scored out;
  if (!scores_path.empty()) {
    auto in = open_in(scores_path);
    out.index = read_scores(in);
    return out;
  }
  if (record_paths.empty()) {
    throw ValidationError("records", "need --scores or --records");
  }
  const auto records = load_records(record_paths);
  ScoreRun run = score_pairs(pairs, group_by_sentence(records), config.casing);
  out.missing = std::move(run.missing);
  for (auto& s : run.scores) {
    const std::string id = s.sentence_id;
    out.index.emplace(id, std::move(s));
  }
  return out;
}

std::vector<std::string> input_paths(const RunConfig& c) {
  std::vector<std::string> p;
  if (!c.dataset.empty()) p.push_back(c.dataset);
  p.insert(p.end(), c.records.begin(), c.records.end());
  p.insert(p.end(), c.records_base.begin(), c.records_base.end());
  if (!c.scores.empty()) p.push_back(c.scores);
  if (!c.scores_base.empty()) p.push_back(c.scores_base);
  return p;
}

void write_manifest(const RunConfig& c, const std::string& command,
                    const std::vector<std::string>& outputs, int exit_code) {
  if (c.manifest.empty()) return;
  ordered_json j;
  j["tool"] = "mlmbias";
  j["version"] = MLMBIAS_VERSION;
  j["command"] = command;
  ordered_json flags;
  flags["dataset"] = c.dataset;
  flags["kind"] = c.kind ? std::string(to_string(*c.kind)) : "";
  flags["records"] = c.records;
  flags["records_base"] = c.records_base;
  flags["scores"] = c.scores;
  flags["scores_base"] = c.scores_base;
  flags["measures"] = ordered_json::array();
  for (MeasureKind k : c.measures) {
    flags["measures"].push_back(std::string(to_string(k)));
  }
  flags["out"] = c.out;
  flags["casing"] = c.casing == Casing::kCased ? "cased" : "uncased";
  flags["significance"] = c.significance;
  flags["allow_partial"] = c.allow_partial;
  flags["seed"] = c.seed;
  flags["bias_knob"] = c.bias_knob;
  flags["vocab_size"] = c.vocab_size;
  flags["model_id"] = c.model_id;
  j["flags"] = std::move(flags);
  auto digests = [](const std::vector<std::string>& paths) {
    ordered_json arr = ordered_json::array();
    for (const auto& p : paths) {
      arr.push_back({{"path", p}, {"sha256", sha256_file(p)}});
    }
    return arr;
  };
  j["inputs"] = digests(input_paths(c));
  j["outputs"] = digests(outputs);
  j["exit_code"] = exit_code;
  const fs::path parent = fs::path(c.manifest).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
  std::ofstream out(c.manifest, std::ios::binary | std::ios::trunc);
  out << j.dump(2) << '\n';
  if (!out) throw IoError("cannot write manifest " + c.manifest);
}

int report_missing(const std::vector<std::string>& missing, bool allow_partial,
                   std::ostream& report) {
  if (missing.empty()) return kExitOk;
  report << fmt::format("coverage: {} sentence(s) without records\n",
                        missing.size());
  for (const auto& id : missing) report << "  missing " << id << '\n';
  return allow_partial ? kExitOk : kExitFailed;
}

}  // namespace

std::vector<SentencePair> load_dataset(const RunConfig& config) {
  if (config.dataset.empty()) {
    throw ValidationError("dataset", "--dataset is required");
  }
  const Source source = resolve_kind(config);
  auto in = open_in(config.dataset);
  try {
    if (source == Source::kCps) return parse_cps(in);
    return parse_ss(in).pairs;
  } catch (const Error& e) {
    throw ParseError(config.dataset + ": " + e.what());
  }
}

int cmd_validate_dataset(const RunConfig& config, std::ostream& report) {
  const Source source = resolve_kind(config);
  const auto pairs = load_dataset(config);
  std::map<BiasType, std::size_t> counts;
  for (const auto& p : pairs) ++counts[p.bias_type];

  const auto& expected = expected_counts(source);
  bool pass = true;
  std::size_t total_expected = 0;
  std::ostringstream csv;
  csv << "bias_type,count,expected,status\n";
  report << fmt::format("{:<22}{:>8}{:>10}  status\n", "bias_type", "count",
                        "expected");
  for (BiasType type : categories(source)) {
    const std::size_t got = counts.count(type) ? counts.at(type) : 0;
    const std::size_t want = expected.at(type);
    total_expected += want;
    const bool ok = got == want;
    pass = pass && ok;
    std::string status = ok ? "ok" : "";
    if (!ok) {
      status = got < want ? fmt::format("deficit {}", want - got)
                          : fmt::format("excess {}", got - want);
    }
    report << fmt::format("{:<22}{:>8}{:>10}  {}\n", to_string(type), got,
                          want, status);
    csv << fmt::format("{},{},{},{}\n", to_string(type), got, want,
                       ok ? "ok" : status);
  }
  const bool total_ok = pairs.size() == total_expected;
  pass = pass && total_ok;
  report << fmt::format("{:<22}{:>8}{:>10}  {}\n", "total", pairs.size(),
                        total_expected, total_ok ? "ok" : "mismatch");
  csv << fmt::format("total,{},{},{}\n", pairs.size(), total_expected,
                     total_ok ? "ok" : "mismatch");
  report << (pass ? "PASS" : "FAIL") << ' ' << to_string(source) << ": "
         << categories(source).size() << " categories, N=" << pairs.size()
         << '\n';

  OutputDir out(config.out);
  out.write("dataset_counts.csv", csv.str());
  const int code = pass || config.allow_partial ? kExitOk : kExitFailed;
  write_manifest(config, "validate-dataset", out.files(), code);
  return code;
}

int cmd_score(const RunConfig& config, std::ostream& report) {
  const auto pairs = load_dataset(config);
  if (config.records.empty()) {
    throw ValidationError("records", "--records is required");
  }
  const auto records = load_records(config.records);
  const RecordIndex index = group_by_sentence(records);
  const ScoreRun run = score_pairs(pairs, index, config.casing);

  std::string body;
  for (const auto& s : run.scores) body += to_json_line(s) + '\n';
  OutputDir out(config.out);
  out.write("scores.jsonl", body);
  report << fmt::format("scored {} sentence(s) from {} pair(s)\n",
                        run.scores.size(), pairs.size());
  if (run.fallback_alignments > 0) {
    report << fmt::format("{} pair(s) aligned on record tokens directly\n",
                          run.fallback_alignments);
  }
  const int code = report_missing(run.missing, config.allow_partial, report);
  write_manifest(config, "score", out.files(), code);
  return code;
}

int cmd_bias_score(const RunConfig& config, std::ostream& report) {
  const auto pairs = load_dataset(config);
  const Scored model = scores_from(config, pairs, config.scores, config.records);
  const bool retrained =
      !config.scores_base.empty() || !config.records_base.empty();
  std::optional<Scored> base;
  if (retrained) {
    base = scores_from(config, pairs, config.scores_base, config.records_base);
    std::set<std::string> a;
    std::set<std::string> b;
    for (const auto& [id, s] : model.index) a.insert(id);
    for (const auto& [id, s] : base->index) b.insert(id);
    if (a != b) {
      throw ValidationError("records_base",
                            "retrained and base scores cover different sentences");
    }
  }
  ReportOptions options;
  options.mode = retrained ? ReportMode::kRetrainedVsBase : ReportMode::kPretrained;
  options.measures = config.measures;
  options.significance = config.significance;
  const BiasReport rep = category_report(model.index, pairs, options,
                                         retrained ? &base->index : nullptr);

  OutputDir out(config.out);
  std::ostringstream csv;
  write_report_csv(rep, csv);
  out.write("bias_scores.csv", csv.str());
  out.write("bias_scores.json", report_to_json(rep));
  if (!retrained) {
    std::ostringstream welch;
    write_welch_csv(rep, welch);
    out.write("welch.csv", welch.str());
  }
  report << csv.str();
  if (!rep.skipped.empty()) {
    report << fmt::format("{} (pair, measure) combination(s) skipped\n",
                          rep.skipped.size());
  }
  std::vector<std::string> missing = model.missing;
  if (base) missing.insert(missing.end(), base->missing.begin(), base->missing.end());
  const int code = report_missing(missing, config.allow_partial, report);
  write_manifest(config, "bias-score", out.files(), code);
  return code;
}

int cmd_roc(const RunConfig& config, std::ostream& report) {
  const auto pairs = load_dataset(config);
  const Scored model = scores_from(config, pairs, config.scores, config.records);
  OutputDir out(config.out);
  std::vector<RocSummary> summaries;
  for (MeasureKind kind : config.measures) {
    std::vector<double> scores;
    std::vector<bool> labels_v;
    for (const auto& pair : pairs) {
      if (!pair.annotations) continue;
      const auto d = model.index.find(dis_sentence_id(pair));
      const auto a = model.index.find(adv_sentence_id(pair));
      if (d == model.index.end() || a == model.index.end()) continue;
      const auto fd = d->second.get(kind);
      const auto fa = a->second.get(kind);
      if (!fd || !fa) continue;
      scores.push_back(*fd - *fa);
      labels_v.push_back(annotation_label(pair) == AnnotationLabel::kBiased);
    }
    if (scores.empty()) {
      throw ValidationError("annotations",
                            fmt::format("no annotated pair scored for {}",
                                        to_string(kind)));
    }
    // std::vector<bool> has no contiguous storage for std::span.
    std::unique_ptr<bool[]> labels(new bool[labels_v.size()]);
    for (std::size_t i = 0; i < labels_v.size(); ++i) labels[i] = labels_v[i];
    RocSummary s;
    s.measure = kind;
    s.orientation = set_of(kind) == MeasureSet::kM1
                        ? RocOrientation::kLowerIsPositive
                        : RocOrientation::kHigherIsPositive;
    s.curve = roc(scores, std::span<const bool>(labels.get(), labels_v.size()),
                  s.orientation);
    s.positives = static_cast<std::size_t>(
        std::count(labels_v.begin(), labels_v.end(), true));
    s.negatives = labels_v.size() - s.positives;
    std::ostringstream csv;
    write_roc_csv(s.curve, csv);
    out.write(fmt::format("roc_{}.csv", to_string(kind)), csv.str());
    report << fmt::format("{}: AUC {} (n+ {}, n- {})\n", to_string(kind),
                          format_real(s.curve.auc), s.positives, s.negatives);
    summaries.push_back(std::move(s));
  }
  out.write("roc_summary.json", roc_summary_to_json(summaries));
  const int code = report_missing(model.missing, config.allow_partial, report);
  write_manifest(config, "roc", out.files(), code);
  return code;
}

int cmd_ecdf(const RunConfig& config, std::ostream& report) {
  const auto pairs = load_dataset(config);
  const Scored model = scores_from(config, pairs, config.scores, config.records);
  OutputDir out(config.out);
  const Source source = pairs.empty() ? Source::kCps : pairs.front().source;

  std::vector<std::pair<std::string, std::optional<BiasType>>> groups;
  for (BiasType t : categories(source)) groups.emplace_back(to_string(t), t);
  groups.emplace_back(kOverallRow, std::nullopt);

  for (const auto& [name, type] : groups) {
    for (MeasureKind kind : config.measures) {
      std::vector<double> dis;
      std::vector<double> adv;
      for (const auto& pair : pairs) {
        if (type && pair.bias_type != *type) continue;
        const auto d = model.index.find(dis_sentence_id(pair));
        const auto a = model.index.find(adv_sentence_id(pair));
        if (d == model.index.end() || a == model.index.end()) continue;
        const auto fd = d->second.get(kind);
        const auto fa = a->second.get(kind);
        if (!fd || !fa) continue;
        dis.push_back(*fd);
        adv.push_back(*fa);
      }
      if (dis.empty()) {
        log::debug("ecdf: no scored pairs for {} / {}", name, to_string(kind));
        continue;
      }
      const EcdfSeries e_dis = ecdf(dis);
      const EcdfSeries e_adv = ecdf(adv);
      std::ostringstream csv;
      write_ecdf_csv(e_dis, e_adv, ecdf_diff(e_dis, e_adv), csv);
      out.write(fmt::format("ecdf_{}_{}.csv", name, to_string(kind)), csv.str());
    }
  }
  report << fmt::format("wrote {} ECDF file(s)\n", out.files().size());
  const int code = report_missing(model.missing, config.allow_partial, report);
  write_manifest(config, "ecdf", out.files(), code);
  return code;
}

int cmd_mock(const RunConfig& config, std::ostream& report) {
  const auto pairs = load_dataset(config);
  MockModelSpec spec;
  spec.seed = config.seed;
  spec.vocab_size = config.vocab_size;
  spec.bias_knob = config.bias_knob;
  spec.model_id = config.model_id;
  const auto records = generate_records(pairs, spec, config.casing);
  std::ostringstream body;
  write_records(records, body);
  OutputDir out(config.out);
  out.write("records.jsonl", body.str());
  report << fmt::format("generated {} record(s) for {} pair(s)\n",
                        records.size(), pairs.size());
  write_manifest(config, "mock", out.files(), kExitOk);
  return kExitOk;
}

}  // namespace mlmbias
