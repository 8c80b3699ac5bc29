// Copyright 2026 The mlmbias Authors
// SPDX-License-Identifier: Apache-2.0

#include "mlmbias/dataset.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <stdexcept>

#include "json.hpp"
#include "mlmbias/csv.hpp"
#include "mlmbias/error.hpp"
#include "mlmbias/logging.hpp"

namespace mlmbias {

namespace {

constexpr std::array kCpsCategories = {
    BiasType::kRace,          BiasType::kReligion,
    BiasType::kNationality,   BiasType::kSocioeconomic,
    BiasType::kGender,        BiasType::kSexualOrientation,
    BiasType::kAge,           BiasType::kDisability,
    BiasType::kPhysicalAppearance,
};

constexpr std::array kSsCategories = {
    BiasType::kRace,
    BiasType::kReligion,
    BiasType::kGender,
    BiasType::kProfession,
};

}  // namespace

std::string_view to_string(BiasType type) {
  switch (type) {
    case BiasType::kRace: return "race";
    case BiasType::kReligion: return "religion";
    case BiasType::kNationality: return "nationality";
    case BiasType::kSocioeconomic: return "socioeconomic";
    case BiasType::kGender: return "gender";
    case BiasType::kSexualOrientation: return "sexual-orientation";
    case BiasType::kAge: return "age";
    case BiasType::kDisability: return "disability";
    case BiasType::kPhysicalAppearance: return "physical-appearance";
    case BiasType::kProfession: return "profession";
  }
  return "unknown";
}

std::string_view to_string(Source source) {
  return source == Source::kCps ? "cps" : "ss";
}

BiasType parse_bias_type(std::string_view name) {
  if (name == "race-color") return BiasType::kRace;
  for (int i = 0; i <= static_cast<int>(BiasType::kProfession); ++i) {
    const auto type = static_cast<BiasType>(i);
    if (to_string(type) == name) return type;
  }
  throw ParseError("unknown bias_type '" + std::string(name) + "'");
}

std::span<const BiasType> categories(Source source) {
  if (source == Source::kCps) return kCpsCategories;
  return kSsCategories;
}

const std::map<BiasType, std::size_t>& expected_counts(Source source) {
  static const std::map<BiasType, std::size_t> cps = {
      {BiasType::kRace, 516},         {BiasType::kReligion, 105},
      {BiasType::kNationality, 159},  {BiasType::kSocioeconomic, 172},
      {BiasType::kGender, 262},       {BiasType::kSexualOrientation, 84},
      {BiasType::kAge, 87},           {BiasType::kDisability, 60},
      {BiasType::kPhysicalAppearance, 63},
  };
  static const std::map<BiasType, std::size_t> ss = {
      {BiasType::kRace, 962},
      {BiasType::kReligion, 79},
      {BiasType::kGender, 255},
      {BiasType::kProfession, 810},
  };
  return source == Source::kCps ? cps : ss;
}

// ---------------------------------------------------------------------------
// CrowS-Pairs

std::vector<std::vector<std::string>> parse_annotation_list(
    std::string_view text) {
  std::vector<std::vector<std::string>> out;
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() &&
           (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n')) {
      ++pos;
    }
  };
  auto expect = [&](char c) {
    skip_ws();
    if (pos >= text.size() || text[pos] != c) {
      throw ParseError("annotations: expected '" + std::string(1, c) +
                       "' at offset " + std::to_string(pos));
    }
    ++pos;
  };
  auto parse_string = [&] {
    skip_ws();
    if (pos >= text.size() || (text[pos] != '\'' && text[pos] != '"')) {
      throw ParseError("annotations: expected string at offset " +
                       std::to_string(pos));
    }
    const char quote = text[pos++];
    std::string s;
    while (pos < text.size() && text[pos] != quote) {
      if (text[pos] == '\\' && pos + 1 < text.size()) ++pos;
      s.push_back(text[pos++]);
    }
    if (pos >= text.size()) throw ParseError("annotations: unterminated string");
    ++pos;
    return s;
  };

  expect('[');
  skip_ws();
  if (pos < text.size() && text[pos] == ']') return out;
  while (true) {
    expect('[');
    std::vector<std::string> labels;
    skip_ws();
    if (pos < text.size() && text[pos] == ']') {
      ++pos;
    } else {
      while (true) {
        labels.push_back(parse_string());
        skip_ws();
        if (pos < text.size() && text[pos] == ',') {
          ++pos;
          continue;
        }
        expect(']');
        break;
      }
    }
    out.push_back(std::move(labels));
    skip_ws();
    if (pos < text.size() && text[pos] == ',') {
      ++pos;
      continue;
    }
    expect(']');
    break;
  }
  return out;
}

std::vector<SentencePair> parse_cps(std::istream& source) {
  CsvReader reader(source);
  auto header = reader.next();
  if (!header) throw ParseError("empty CrowS-Pairs file", 1);
  if (!header->empty() && header->front().starts_with("\xEF\xBB\xBF")) {
    header->front().erase(0, 3);
  }

  auto column = [&](std::string_view name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header->size(); ++i) {
      if ((*header)[i] == name) return i;
    }
    return std::nullopt;
  };
  auto required = [&](std::string_view name) {
    auto c = column(name);
    if (!c) throw ParseError("missing column '" + std::string(name) + "'", 1);
    return *c;
  };
  const std::size_t c_more = required("sent_more");
  const std::size_t c_less = required("sent_less");
  const std::size_t c_dir = required("stereo_antistereo");
  const std::size_t c_type = required("bias_type");
  const std::size_t c_ann = required("annotations");
  // The published file leads with an unnamed index column.
  const std::optional<std::size_t> c_index = column("");

  std::vector<SentencePair> pairs;
  std::size_t row = 0;
  while (auto rec = reader.next()) {
    const std::size_t line = reader.record_line();
    if (rec->size() == 1 && (*rec)[0].empty()) continue;
    if (rec->size() < header->size()) {
      throw ParseError("expected " + std::to_string(header->size()) +
                           " fields, found " + std::to_string(rec->size()),
                       line);
    }
    SentencePair p;
    p.source = Source::kCps;
    std::size_t id = row;
    if (c_index && !(*rec)[*c_index].empty()) {
      try {
        id = std::stoul((*rec)[*c_index]);
      } catch (const std::exception&) {
        throw ParseError("non-numeric index '" + (*rec)[*c_index] + "'", line);
      }
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "cps-%05zu", id);
    p.pair_id = buf;
    try {
      p.bias_type = parse_bias_type((*rec)[c_type]);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line);
    }
    const std::string& direction = (*rec)[c_dir];
    if (direction == "stereo") {
      p.sent_dis = (*rec)[c_more];
      p.sent_adv = (*rec)[c_less];
    } else if (direction == "antistereo") {
      p.sent_dis = (*rec)[c_less];
      p.sent_adv = (*rec)[c_more];
    } else {
      throw ParseError("unknown stereo_antistereo '" + direction + "'", line);
    }
    if (p.sent_dis == p.sent_adv) {
      throw ValidationError("sent_dis", "line " + std::to_string(line) +
                                            ": both sentences are identical");
    }
    const std::string& ann = (*rec)[c_ann];
    if (!ann.empty()) {
      try {
        p.annotations = parse_annotation_list(ann);
      } catch (const ParseError& e) {
        throw ParseError(e.what(), line);
      }
    }
    pairs.push_back(std::move(p));
    ++row;
  }
  return pairs;
}

// ---------------------------------------------------------------------------
// StereoSet

SsParseResult parse_ss(std::istream& source) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(source);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed StereoSet JSON: ") + e.what());
  }
  SsParseResult result;
  const auto data = doc.find("data");
  if (data == doc.end() || !data->is_object()) {
    throw ParseError("StereoSet JSON lacks a 'data' object");
  }
  if (auto inter = data->find("intersentence");
      inter != data->end() && inter->is_array()) {
    result.intersentence_dropped = inter->size();
  }
  const auto intra = data->find("intrasentence");
  if (intra == data->end() || !intra->is_array()) {
    throw ParseError("StereoSet JSON lacks 'data.intrasentence'");
  }

  std::size_t entry_no = 0;
  for (const auto& entry : *intra) {
    const std::string where = "intrasentence entry " + std::to_string(entry_no);
    if (!entry.is_object() || !entry.contains("bias_type") ||
        !entry.contains("sentences") || !entry["sentences"].is_array()) {
      throw ParseError(where + ": missing bias_type or sentences");
    }
    SentencePair p;
    p.source = Source::kSs;
    try {
      p.bias_type = parse_bias_type(entry["bias_type"].get<std::string>());
    } catch (const ParseError& e) {
      throw ParseError(where + ": " + e.what());
    }
    p.pair_id = entry.contains("id") ? entry["id"].get<std::string>()
                                     : "ss-" + std::to_string(entry_no);
    bool have_dis = false;
    bool have_adv = false;
    for (const auto& s : entry["sentences"]) {
      const std::string label = s.value("gold_label", "");
      if (label == "stereotype") {
        p.sent_dis = s.value("sentence", "");
        have_dis = true;
      } else if (label == "anti-stereotype") {
        p.sent_adv = s.value("sentence", "");
        have_adv = true;
      }
    }
    ++entry_no;
    if (!have_dis || !have_adv || p.sent_dis == p.sent_adv) {
      ++result.skipped;
      continue;
    }
    result.pairs.push_back(std::move(p));
  }
  if (result.skipped > 0) {
    log::warn("StereoSet: skipped {} intrasentence entries lacking a "
              "stereotype/anti-stereotype option",
              result.skipped);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Normalization

namespace {

bool is_space(char32_t c) {
  return c == ' ' || (c >= '\t' && c <= '\r') || c == 0x00A0 ||
         c == 0x1680 || (c >= 0x2000 && c <= 0x200A) || c == 0x2028 ||
         c == 0x2029 || c == 0x202F || c == 0x205F || c == 0x3000;
}

// Unicode general category P* (connector, dash, open/close, initial/final
// quote, other) for ASCII, Latin-1 and the common punctuation blocks.
bool is_punct(char32_t c) {
  if (c < 0x80) {
    switch (c) {
      case '!': case '"': case '#': case '%': case '&': case '\'':
      case '(': case ')': case '*': case ',': case '-': case '.':
      case '/': case ':': case ';': case '?': case '@': case '[':
      case '\\': case ']': case '_': case '{': case '}':
        return true;
      default:
        return false;
    }
  }
  switch (c) {
    case 0x00A1: case 0x00A7: case 0x00AB: case 0x00B6: case 0x00B7:
    case 0x00BB: case 0x00BF: case 0x037E: case 0x0387: case 0xFE63:
    case 0xFE68: case 0xFE6A: case 0xFE6B: case 0xFF1A: case 0xFF1B:
    case 0xFF1F: case 0xFF20: case 0xFF3F: case 0xFF5B: case 0xFF5D:
      return true;
    default:
      break;
  }
  return (c >= 0x2010 && c <= 0x2027) || (c >= 0x2030 && c <= 0x2043) ||
         (c >= 0x2045 && c <= 0x2051) || (c >= 0x2053 && c <= 0x205E) ||
         (c >= 0x2E00 && c <= 0x2E4F) || (c >= 0x3001 && c <= 0x3003) ||
         (c >= 0x3008 && c <= 0x3011) || (c >= 0x3014 && c <= 0x301F) ||
         (c >= 0xFE10 && c <= 0xFE19) || (c >= 0xFE30 && c <= 0xFE52) ||
         (c >= 0xFE54 && c <= 0xFE61) || (c >= 0xFF01 && c <= 0xFF03) ||
         (c >= 0xFF05 && c <= 0xFF0A) || (c >= 0xFF0C && c <= 0xFF0F) ||
         (c >= 0xFF3B && c <= 0xFF3D) || (c >= 0xFF5F && c <= 0xFF65);
}

bool is_word(char32_t c) { return !is_space(c) && !is_punct(c); }

char32_t to_lower(char32_t c) {
  if (c >= 'A' && c <= 'Z') return c + 32;
  if (c >= 0x00C0 && c <= 0x00DE && c != 0x00D7) return c + 32;
  return c;
}

// Invalid bytes decode to themselves so they pass through unchanged.
std::vector<char32_t> decode_utf8(std::string_view s) {
  std::vector<char32_t> out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    int len = b0 < 0x80 ? 1 : (b0 >> 5) == 0x6 ? 2 : (b0 >> 4) == 0xE ? 3
              : (b0 >> 3) == 0x1E ? 4 : 0;
    if (len == 0 || i + len > s.size()) {
      out.push_back(0xDC00 + b0);  // lone surrogate range marks raw bytes
      ++i;
      continue;
    }
    char32_t cp = len == 1 ? b0 : b0 & (0x7F >> len);
    bool ok = true;
    for (int k = 1; k < len; ++k) {
      const auto b = static_cast<unsigned char>(s[i + k]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (b & 0x3F);
    }
    if (!ok) {
      out.push_back(0xDC00 + b0);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

void encode_utf8(char32_t cp, std::string& out) {
  if (cp >= 0xDC80 && cp <= 0xDCFF) {
    out.push_back(static_cast<char>(cp - 0xDC00));
  } else if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

}  // namespace

std::string normalize(std::string_view text, Casing casing) {
  const std::vector<char32_t> cps = decode_utf8(text);
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    char32_t c = cps[i];
    bool word = is_word(c);
    if (c == '-' && i > 0 && i + 1 < cps.size() && is_word(cps[i - 1]) &&
        is_word(cps[i + 1])) {
      word = true;
    }
    if (!word) {
      pending_space = true;
      continue;
    }
    if (pending_space && !out.empty()) out.push_back(' ');
    pending_space = false;
    encode_utf8(casing == Casing::kUncased ? to_lower(c) : c, out);
  }
  return out;
}

std::vector<std::string> split_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Alignment

PairAlignment align_pair(std::span<const std::string> a,
                         std::span<const std::string> b) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("align_pair: token lists must be non-empty");
  }
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  // suffix[i][j] = LCS length of a[i..] and b[j..].
  std::vector<std::vector<std::size_t>> suffix(
      n + 1, std::vector<std::size_t>(m + 1, 0));
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = m; j-- > 0;) {
      suffix[i][j] = a[i] == b[j]
                         ? suffix[i + 1][j + 1] + 1
                         : std::max(suffix[i + 1][j], suffix[i][j + 1]);
    }
  }

  std::vector<bool> kept_a(n, false);
  std::vector<bool> kept_b(m, false);
  std::size_t i = 0;
  std::size_t j = 0;
  while (suffix[i][j] > 0) {
    const std::size_t want = suffix[i][j];
    std::size_t best_i = n;
    std::size_t best_j = m;
    // Earliest occurrence of each candidate token keeps the most room for
    // the remainder, so only first occurrences in a[i..] need checking.
    for (std::size_t x = i; x < n; ++x) {
      if (best_i < n && !(a[x] < a[best_i])) continue;
      bool first = true;
      for (std::size_t y = i; y < x; ++y) {
        if (a[y] == a[x]) {
          first = false;
          break;
        }
      }
      if (!first) continue;
      for (std::size_t y = j; y < m; ++y) {
        if (b[y] == a[x]) {
          if (suffix[x + 1][y + 1] + 1 == want) {
            best_i = x;
            best_j = y;
          }
          break;
        }
      }
    }
    kept_a[best_i] = true;
    kept_b[best_j] = true;
    i = best_i + 1;
    j = best_j + 1;
  }

  PairAlignment out;
  for (std::size_t k = 0; k < n; ++k) {
    (kept_a[k] ? out.unmodified_dis : out.modified_dis).push_back(k);
  }
  for (std::size_t k = 0; k < m; ++k) {
    (kept_b[k] ? out.unmodified_adv : out.modified_adv).push_back(k);
  }
  if (out.unmodified_dis.empty()) {
    log::warn("align_pair: no common tokens, every token is modified");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Annotations

AnnotationLabel annotation_label(const SentencePair& pair) {
  if (!pair.annotations) {
    throw ValidationError("annotations", "pair " + pair.pair_id +
                                             " has no annotations");
  }
  // The writer counts as one annotator agreeing on the pair's own type.
  std::size_t agree = 1;
  std::size_t same_type = 1;
  for (const auto& labels : *pair.annotations) {
    if (labels.empty()) continue;
    ++agree;
    for (const auto& label : labels) {
      BiasType t;
      try {
        t = parse_bias_type(label);
      } catch (const ParseError&) {
        continue;
      }
      if (t == pair.bias_type) {
        ++same_type;
        break;
      }
    }
  }
  const bool biased = agree >= 3 && 2 * same_type > agree;
  return biased ? AnnotationLabel::kBiased : AnnotationLabel::kUnbiased;
}

}  // namespace mlmbias
