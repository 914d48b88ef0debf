// Copyright 2026 The wavelatent Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wavelatent/pipeline/tokenizer.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <sstream>
#include <string_view>
#include <utility>

#include "wavelatent/errors.hpp"

namespace wavelatent::pipeline {
namespace {

struct Rule {
  std::string_view graphemes;
  std::string_view phones;  // space separated, may be empty
};

// Longest graphemes first; the first match at a position wins.
constexpr std::array kRules = {
    Rule{"tch", "ch"}, Rule{"igh", "ay"}, Rule{"sch", "s k"},
    Rule{"th", "th"},  Rule{"sh", "sh"},  Rule{"ch", "ch"},   Rule{"ng", "ng"},  Rule{"ph", "f"},
    Rule{"ck", "k"},   Rule{"qu", "k w"}, Rule{"wh", "w"},    Rule{"kn", "n"},   Rule{"wr", "r"},
    Rule{"gh", ""},    Rule{"ee", "iy"},  Rule{"ea", "iy"},   Rule{"ie", "iy"},  Rule{"oo", "uw"},
    Rule{"ai", "ey"},  Rule{"ay", "ey"},  Rule{"ey", "ey"},   Rule{"ou", "aw"},  Rule{"ow", "ow"},
    Rule{"oi", "oy"},  Rule{"oy", "oy"},  Rule{"au", "aa"},   Rule{"aw", "aa"},  Rule{"er", "er"},
    Rule{"ir", "er"},  Rule{"ur", "er"},  Rule{"ar", "aa r"}, Rule{"or", "ow r"}, Rule{"ll", "l"},
    Rule{"ss", "s"},   Rule{"tt", "t"},   Rule{"dd", "d"},    Rule{"ff", "f"},   Rule{"mm", "m"},
    Rule{"nn", "n"},   Rule{"pp", "p"},   Rule{"bb", "b"},    Rule{"rr", "r"},   Rule{"zz", "z"},
    Rule{"gg", "g"},   Rule{"cc", "k"},
};

constexpr std::array<std::string_view, 26> kLetters = {
    "ae", "b", "k", "d", "eh", "f", "g", "hh", "ih", "jh", "k", "l", "m",
    "n",  "aa", "p", "k", "r", "s", "t", "ah", "v", "w", "k s", "y", "z"};

constexpr std::array<std::string_view, 10> kDigits = {"zero", "one", "two",   "three", "four",
                                                      "five", "six", "seven", "eight", "nine"};

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

void append_phones(std::string_view phones, std::vector<std::string>& out) {
  std::istringstream in{std::string(phones)};
  for (std::string p; in >> p;) out.push_back(p);
}

void word_to_phones(std::string word, std::vector<std::string>& out) {
  // A final 'e' after a consonant is usually silent ("make", "time").
  if (word.size() > 2 && word.back() == 'e' && !is_vowel(word[word.size() - 2])) word.pop_back();
  std::size_t i = 0;
  while (i < word.size()) {
    const std::string_view rest(word.data() + i, word.size() - i);
    bool matched = false;
    for (const auto& rule : kRules) {
      if (rest.substr(0, rule.graphemes.size()) == rule.graphemes) {
        append_phones(rule.phones, out);
        i += rule.graphemes.size();
        matched = true;
        break;
      }
    }
    if (matched) continue;
    const char c = word[i];
    const char next = i + 1 < word.size() ? word[i + 1] : '\0';
    if (c == 'c' && (next == 'e' || next == 'i' || next == 'y')) {
      out.emplace_back("s");
    } else if (c == 'y' && i > 0) {
      out.emplace_back("iy");
    } else {
      append_phones(kLetters[static_cast<std::size_t>(c - 'a')], out);
    }
    ++i;
  }
}

}  // namespace

std::vector<std::string> RuleBasedTokenizer::phonemes(const std::string& text) const {
  std::vector<std::string> raw;
  std::string word;
  auto flush = [&] {
    if (word.empty()) return;
    word_to_phones(word, raw);
    raw.emplace_back("_");
    word.clear();
  };
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalpha(c) && c < 128) {
      word.push_back(static_cast<char>(std::tolower(c)));
    } else if (std::isdigit(c)) {
      flush();
      word = std::string(kDigits[static_cast<std::size_t>(c - '0')]);
      flush();
    } else if (ch == '\'') {
      continue;
    } else {
      flush();
      if (ch == '.' || ch == '?' || ch == '!' || ch == ',') {
        raw.emplace_back(1, ch);
      } else if (ch == ';' || ch == ':') {
        raw.emplace_back(",");
      }
    }
  }
  flush();

  // Drop leading, trailing, repeated and pre-punctuation boundaries.
  std::vector<std::string> out;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == "_") {
      if (out.empty() || out.back() == "_") continue;
      if (i + 1 == raw.size() || raw[i + 1] == "_") continue;
      const auto& n = raw[i + 1];
      if (n == "." || n == "?" || n == "!" || n == ",") continue;
    }
    out.push_back(raw[i]);
  }
  return out;
}

std::vector<std::string> RuleBasedTokenizer::inventory() {
  return {"_",  ",",  ".",  "?",  "!",  "aa", "ae", "ah", "aw", "ay", "b",  "ch",
          "d",  "dh", "eh", "er", "ey", "f",  "g",  "hh", "ih", "iy", "jh", "k",
          "l",  "m",  "n",  "ng", "ow", "oy", "p",  "r",  "s",  "sh", "t",  "th",
          "uh", "uw", "v",  "w",  "y",  "z",  "zh"};
}

Vocabulary::Vocabulary(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (tokens_[i].empty()) throw FormatError("vocabulary entry " + std::to_string(i) + " is blank");
    if (!ids_.emplace(tokens_[i], static_cast<std::int64_t>(i)).second) {
      throw FormatError("duplicate vocabulary entry '" + tokens_[i] + "'");
    }
  }
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read vocabulary: " + path.string());
  std::vector<std::string> tokens;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    tokens.push_back(line);
  }
  // Tolerate a single trailing newline at end of file.
  while (!tokens.empty() && tokens.back().empty()) tokens.pop_back();
  return Vocabulary(std::move(tokens));
}

void Vocabulary::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write vocabulary: " + path.string());
  for (const auto& t : tokens_) out << t << '\n';
}

const std::string& Vocabulary::token(std::int64_t id) const {
  if (id < 0 || id >= static_cast<std::int64_t>(tokens_.size())) {
    throw ArgumentError("token id " + std::to_string(id) + " out of range");
  }
  return tokens_[static_cast<std::size_t>(id)];
}

std::vector<std::int64_t> Vocabulary::encode(const std::vector<std::string>& phonemes) const {
  std::vector<std::int64_t> ids;
  ids.reserve(phonemes.size());
  for (const auto& p : phonemes) {
    auto it = ids_.find(p);
    if (it == ids_.end()) throw ArgumentError("phoneme '" + p + "' is not in the vocabulary");
    ids.push_back(it->second);
  }
  return ids;
}

std::vector<std::int64_t> tokenize(const Tokenizer& tokenizer, const Vocabulary& vocab,
                                   const std::string& text) {
  auto phones = tokenizer.phonemes(text);
  const bool pronounceable = std::any_of(phones.begin(), phones.end(), [](const std::string& p) {
    return p != "_" && p != "," && p != "." && p != "?" && p != "!";
  });
  if (!pronounceable) throw ArgumentError("text has no pronounceable content: '" + text + "'");
  return vocab.encode(phones);
}

}  // namespace wavelatent::pipeline
