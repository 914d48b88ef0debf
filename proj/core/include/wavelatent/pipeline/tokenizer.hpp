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

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

namespace wavelatent::pipeline {

/// Text front-end: maps a transcript to a phoneme sequence.
class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  virtual std::vector<std::string> phonemes(const std::string& text) const = 0;
};

/// Letter-to-sound rules for English-like text. Not a real G2P; it exists so
/// the pipeline runs without an external dictionary. Word boundaries become
/// "_", sentence punctuation is kept as its own token, digits are spelled
/// out and every other character is dropped.
class RuleBasedTokenizer : public Tokenizer {
 public:
  std::vector<std::string> phonemes(const std::string& text) const override;

  /// The bundled phone set, a superset of what phonemes() emits.
  static std::vector<std::string> inventory();
};

/// Phoneme vocabulary; the id of a token is its zero-based line number in
/// the vocabulary file.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> tokens);

  /// One token per line. Throws IoError if unreadable and FormatError on
  /// blank or duplicate entries.
  static Vocabulary load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  std::size_t size() const { return tokens_.size(); }
  const std::string& token(std::int64_t id) const;
  bool contains(const std::string& token) const { return ids_.count(token) != 0; }

  /// Throws ArgumentError on a token missing from the vocabulary.
  std::vector<std::int64_t> encode(const std::vector<std::string>& phonemes) const;

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::int64_t> ids_;
};

/// phonemes() followed by encode(); throws ArgumentError when the text has
/// no pronounceable content.
std::vector<std::int64_t> tokenize(const Tokenizer& tokenizer, const Vocabulary& vocab,
                                   const std::string& text);

}  // namespace wavelatent::pipeline
