// Copyright 2026 The mlmbias Authors
// SPDX-License-Identifier: Apache-2.0

#include "mlmbias/records.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "json.hpp"
#include "mlmbias/error.hpp"

namespace mlmbias {

using json = nlohmann::json;

std::string_view to_string(Mode mode) {
  return mode == Mode::kIterativeMasked ? "masked" : "unmasked";
}

void validate(const TokenPredictionRecord& r) {
  if (r.sentence_id.empty()) {
    throw ValidationError("sentence_id", "must be non-empty");
  }
  if (r.vocab_size < 2) {
    throw ValidationError("vocab_size", "must be >= 2");
  }
  if (!std::isfinite(r.gt_logprob) || r.gt_logprob > 0.0) {
    throw ValidationError("gt_logprob", "must be a finite value <= 0");
  }
  if (!std::isfinite(r.attention) || r.attention < 0.0 || r.attention > 1.0) {
    throw ValidationError("attention", "must lie in [0, 1]");
  }
  if (r.mode == Mode::kUnmasked) {
    if (r.gt_rank) {
      throw ValidationError("gt_rank", "must be absent for unmasked records");
    }
    if (r.top_logprob) {
      throw ValidationError("top_logprob",
                            "must be absent for unmasked records");
    }
    return;
  }
  if (!r.gt_rank) {
    throw ValidationError("gt_rank", "required for masked records");
  }
  if (*r.gt_rank < 1 || *r.gt_rank > r.vocab_size) {
    throw ValidationError("gt_rank", "must lie in [1, vocab_size]");
  }
  if (!r.top_logprob) {
    throw ValidationError("top_logprob", "required for masked records");
  }
  const double top = *r.top_logprob;
  if (!std::isfinite(top) || top > 0.0) {
    throw ValidationError("top_logprob", "must be a finite value <= 0");
  }
  if (top < r.gt_logprob) {
    throw ValidationError("top_logprob", "must be >= gt_logprob");
  }
  if ((*r.gt_rank == 1) != (top == r.gt_logprob)) {
    throw ValidationError(
        "gt_rank", "rank 1 must coincide with top_logprob == gt_logprob");
  }
}

std::string to_json_line(const TokenPredictionRecord& r) {
  // ordered_json keeps the key order stable for golden files.
  nlohmann::ordered_json j;
  j["sentence_id"] = r.sentence_id;
  j["model_id"] = r.model_id;
  j["mode"] = to_string(r.mode);
  j["token_index"] = r.token_index;
  j["token_text"] = r.token_text;
  j["gt_rank"] = r.gt_rank ? json(*r.gt_rank) : json(nullptr);
  j["gt_logprob"] = r.gt_logprob;
  j["top_logprob"] = r.top_logprob ? json(*r.top_logprob) : json(nullptr);
  j["attention"] = r.attention;
  j["vocab_size"] = r.vocab_size;
  return j.dump();
}

namespace {

const json& require(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(key, "missing");
  return *it;
}

double as_real(const json& v, const char* key) {
  if (!v.is_number()) throw ValidationError(key, "expected a number");
  return v.get<double>();
}

std::int64_t as_integer(const json& v, const char* key) {
  if (!v.is_number_integer()) throw ValidationError(key, "expected an integer");
  return v.get<std::int64_t>();
}

std::string as_string(const json& v, const char* key) {
  if (!v.is_string()) throw ValidationError(key, "expected a string");
  return v.get<std::string>();
}

}  // namespace

TokenPredictionRecord parse_record_line(std::string_view line,
                                        std::size_t line_no) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed record: ") + e.what(), line_no);
  }
  if (!j.is_object()) throw ParseError("record must be an object", line_no);

  try {
    TokenPredictionRecord r;
    r.sentence_id = as_string(require(j, "sentence_id"), "sentence_id");
    if (auto it = j.find("model_id"); it != j.end() && !it->is_null()) {
      r.model_id = as_string(*it, "model_id");
    }
    const std::string mode = as_string(require(j, "mode"), "mode");
    if (mode == "masked") {
      r.mode = Mode::kIterativeMasked;
    } else if (mode == "unmasked") {
      r.mode = Mode::kUnmasked;
    } else {
      throw ValidationError("mode", "expected \"masked\" or \"unmasked\"");
    }
    const std::int64_t index =
        as_integer(require(j, "token_index"), "token_index");
    if (index < 0) throw ValidationError("token_index", "must be >= 0");
    r.token_index = static_cast<std::size_t>(index);
    r.token_text = as_string(require(j, "token_text"), "token_text");
    if (auto it = j.find("gt_rank"); it != j.end() && !it->is_null()) {
      r.gt_rank = as_integer(*it, "gt_rank");
    }
    r.gt_logprob = as_real(require(j, "gt_logprob"), "gt_logprob");
    if (auto it = j.find("top_logprob"); it != j.end() && !it->is_null()) {
      r.top_logprob = as_real(*it, "top_logprob");
    }
    r.attention = as_real(require(j, "attention"), "attention");
    r.vocab_size = as_integer(require(j, "vocab_size"), "vocab_size");
    validate(r);
    return r;
  } catch (const ValidationError& e) {
    if (line_no == 0) throw;
    throw ValidationError(e.field(),
                          "line " + std::to_string(line_no) + ": " + e.what());
  }
}

void write_records(std::span<const TokenPredictionRecord> records,
                   std::ostream& sink) {
  for (std::size_t i = 0; i < records.size(); ++i) {
    sink << to_json_line(records[i]) << '\n';
    if (!sink) {
      throw IoError("failed writing record " + std::to_string(i));
    }
  }
  sink.flush();
  if (!sink) throw IoError("failed flushing record stream");
}

std::vector<TokenPredictionRecord> read_records(std::istream& source) {
  std::vector<TokenPredictionRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(source, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_record_line(line, line_no));
  }
  if (source.bad()) throw IoError("failed reading record stream");
  return out;
}

namespace {

void sort_and_check(std::vector<TokenPredictionRecord>& v,
                    const std::string& sentence_id, Mode mode) {
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
    return a.token_index < b.token_index;
  });
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].token_index == i) continue;
    const std::string where = "sentence " + sentence_id + " (" +
                              std::string(to_string(mode)) + ")";
    if (i > 0 && v[i].token_index == v[i - 1].token_index) {
      throw ValidationError("token_index",
                            "duplicate index " +
                                std::to_string(v[i].token_index) + " in " +
                                where);
    }
    throw ValidationError("token_index", "gap before index " +
                                             std::to_string(v[i].token_index) +
                                             " in " + where);
  }
}

}  // namespace

RecordIndex group_by_sentence(std::span<const TokenPredictionRecord> records) {
  RecordIndex index;
  for (const auto& r : records) {
    auto [it, inserted] = index.try_emplace(r.sentence_id);
    SentenceRecordSet& set = it->second;
    if (inserted) {
      set.sentence_id = r.sentence_id;
      set.model_id = r.model_id;
    } else if (set.model_id != r.model_id) {
      throw ValidationError("model_id", "sentence " + r.sentence_id +
                                            " mixes model ids '" +
                                            set.model_id + "' and '" +
                                            r.model_id + "'");
    }
    (r.mode == Mode::kIterativeMasked ? set.masked : set.unmasked).push_back(r);
  }
  for (auto& [id, set] : index) {
    sort_and_check(set.masked, id, Mode::kIterativeMasked);
    sort_and_check(set.unmasked, id, Mode::kUnmasked);
    if (!set.masked.empty() && !set.unmasked.empty()) {
      if (set.masked.size() != set.unmasked.size()) {
        throw ValidationError("token_index",
                              "sentence " + id +
                                  " has different masked/unmasked lengths");
      }
      for (std::size_t i = 0; i < set.masked.size(); ++i) {
        if (set.masked[i].token_text != set.unmasked[i].token_text) {
          throw ValidationError("token_text",
                                "sentence " + id + " token " +
                                    std::to_string(i) +
                                    " differs between masked and unmasked");
        }
      }
    }
  }
  return index;
}

}  // namespace mlmbias
