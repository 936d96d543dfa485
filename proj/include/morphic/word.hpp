#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace morphic {

/// Letters are dense indices into an alphabet. A word stores one index per
/// byte, so std::string gives hashing, slicing and search for free.
using Letter = unsigned char;
using Word = std::string;
using WordView = std::string_view;

/// Splits UTF-8 text into code points, one string per visible character.
std::vector<std::string> split_symbols(std::string_view text);

/// Display symbols of an alphabet, indexed in first-appearance order.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> symbols);

  std::size_t size() const noexcept { return symbols_.size(); }
  const std::string& symbol(Letter a) const { return symbols_.at(a); }
  const std::vector<std::string>& symbols() const noexcept { return symbols_; }
  std::optional<Letter> find(std::string_view symbol) const;

  /// Letter codes to display text.
  std::string render(WordView w) const;
  /// Display text to letter codes; throws on unknown symbols.
  Word parse(std::string_view text) const;

 private:
  std::vector<std::string> symbols_;
};

/// All words of length n over {0, ..., d-1} in lexicographic order.
std::vector<Word> all_words(std::size_t d, std::size_t n);

}  // namespace morphic
