// Copyright 2026 The mlmbias Authors
// SPDX-License-Identifier: Apache-2.0
//
// Implementations behind the `mlmbias` subcommands. Each returns the process
// exit code: 0 on success, 2 when a validation failed or coverage is
// incomplete (without --allow-partial). Errors are thrown.

#ifndef MLMBIAS_COMMANDS_HPP_
#define MLMBIAS_COMMANDS_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mlmbias/dataset.hpp"
#include "mlmbias/measures.hpp"

namespace mlmbias {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitFailed = 2;

struct RunConfig {
  std::string dataset;
  std::optional<Source> kind;  // inferred from the extension when unset
  std::vector<std::string> records;
  std::vector<std::string> records_base;
  std::string scores;
  std::string scores_base;
  std::vector<MeasureKind> measures{kAllMeasures.begin(), kAllMeasures.end()};
  std::string out = ".";
  Casing casing = Casing::kUncased;
  bool significance = true;
  bool allow_partial = false;
  std::uint64_t seed = 0;
  double bias_knob = 0.0;
  std::int64_t vocab_size = 30522;
  std::string model_id = "mock";
  std::string manifest;
};

// .csv -> cps, .json -> ss unless config.kind is set.
std::vector<SentencePair> load_dataset(const RunConfig& config);

int cmd_validate_dataset(const RunConfig& config, std::ostream& report);
int cmd_score(const RunConfig& config, std::ostream& report);
int cmd_bias_score(const RunConfig& config, std::ostream& report);
int cmd_roc(const RunConfig& config, std::ostream& report);
int cmd_ecdf(const RunConfig& config, std::ostream& report);
int cmd_mock(const RunConfig& config, std::ostream& report);

// Lower-case hex SHA-256 of a file's bytes. Throws IoError.
std::string sha256_file(const std::string& path);

}  // namespace mlmbias

#endif  // MLMBIAS_COMMANDS_HPP_
