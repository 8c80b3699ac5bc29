// Copyright 2026 The mlmbias Authors
// SPDX-License-Identifier: Apache-2.0
//
// Synthetic datasets for tests. Deterministic for a given seed.

#ifndef MLMBIAS_TESTS_FIXTURES_HPP_
#define MLMBIAS_TESTS_FIXTURES_HPP_

#include <array>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mlmbias/csv.hpp"
#include "mlmbias/dataset.hpp"

namespace mlmbias::testing {

inline constexpr std::array<const char*, 32> kFiller = {
    "the", "people", "are", "always", "really", "ignorant", "about", "how",
    "to", "handle", "money", "they", "do", "have", "good", "at", "math",
    "never", "work", "hard", "in", "school", "city", "food", "like", "dance",
    "drive", "cars", "smart", "lazy", "kind", "loud"};

inline constexpr std::array<std::pair<const char*, const char*>, 12> kGroups = {{
    {"poor", "rich"}, {"black", "white"}, {"women", "men"},
    {"muslims", "christians"}, {"gay", "straight"}, {"old", "young"},
    {"disabled", "abled"}, {"fat", "thin"}, {"mexicans", "americans"},
    {"girls", "boys"}, {"immigrants", "citizens"}, {"jews", "catholics"}}};

inline std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out += ' ';
    out += words[i];
  }
  return out;
}

// `per_category` pairs for each category of `source`; one or two group words
// differ between the sentences, occasionally with an extra word on one side.
inline std::vector<SentencePair> synthetic_pairs(Source source,
                                                 std::size_t per_category,
                                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  };
  std::vector<SentencePair> out;
  std::size_t id = 0;
  for (BiasType type : categories(source)) {
    for (std::size_t k = 0; k < per_category; ++k) {
      const std::size_t len = 4 + pick(9);
      std::vector<std::string> dis;
      for (std::size_t i = 0; i < len; ++i) dis.push_back(kFiller[pick(kFiller.size())]);
      std::vector<std::string> adv = dis;
      const auto& g = kGroups[pick(kGroups.size())];
      const std::size_t pos = pick(len);
      dis[pos] = g.first;
      adv[pos] = g.second;
      if (pick(10) == 0) {
        const auto& g2 = kGroups[pick(kGroups.size())];
        const std::size_t pos2 = (pos + 1 + pick(len - 1)) % len;
        dis[pos2] = g2.first;
        adv[pos2] = g2.second;
      }
      if (pick(10) == 0) adv.insert(adv.begin() + static_cast<long>(pick(len)), "very");
      SentencePair p;
      p.pair_id = "syn-" + std::string(5 - std::to_string(id).size(), '0') +
                  std::to_string(id);
      ++id;
      p.sent_dis = join(dis);
      p.sent_adv = join(adv);
      p.bias_type = type;
      p.source = source;
      out.push_back(std::move(p));
    }
  }
  return out;
}

inline std::string cps_name(BiasType t) {
  return t == BiasType::kRace ? "race-color" : std::string(to_string(t));
}

// CSV in the published CrowS-Pairs layout. Every fifth pair is written in
// the anti-stereotypical direction. Annotations name the pair's own type
// for `agree` of five validators, or for one validator on every
// `unbiased_every`-th pair (which makes those pairs unbiased).
inline std::string synthetic_cps_csv(const std::vector<SentencePair>& pairs,
                                     std::size_t agree = 4,
                                     std::size_t unbiased_every = 0) {
  std::ostringstream out;
  out << ",sent_more,sent_less,stereo_antistereo,bias_type,annotations,"
         "anon_writer,anon_annotators\n";
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& p = pairs[i];
    const bool anti = i % 5 == 4;
    std::string ann = "[";
    const std::size_t n_agree =
        unbiased_every && i % unbiased_every == 0 ? 1 : agree;
    for (std::size_t a = 0; a < 5; ++a) {
      if (a) ann += ", ";
      ann += a < n_agree ? "['" + cps_name(p.bias_type) + "']" : "[]";
    }
    ann += "]";
    out << i << ',' << csv_escape(anti ? p.sent_adv : p.sent_dis) << ','
        << csv_escape(anti ? p.sent_dis : p.sent_adv) << ','
        << (anti ? "antistereo" : "stereo") << ',' << cps_name(p.bias_type)
        << ',' << csv_escape(ann) << ",a0,\"['a1', 'a2', 'a3', 'a4', 'a5']\"\n";
  }
  return out.str();
}

}  // namespace mlmbias::testing

#endif  // MLMBIAS_TESTS_FIXTURES_HPP_
