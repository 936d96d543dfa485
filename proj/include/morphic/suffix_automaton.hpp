#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "morphic/word.hpp"

namespace morphic {

/// Answers "longest prefix of x[j..] occurring in the text" for every j in
/// one right-to-left pass. Internally a suffix automaton of the reversed text.
class SubstringOracle {
 public:
  SubstringOracle() = default;
  SubstringOracle(WordView text, std::size_t alphabetSize);

  std::size_t text_length() const noexcept { return textLength_; }
  std::size_t state_count() const noexcept { return len_.size(); }

  /// ms[j] = length of the longest prefix of x[j..] that is a factor of the
  /// text, for j in [0, |x|).
  std::vector<std::uint32_t> prefix_matches(WordView x) const;

 private:
  std::size_t d_ = 0;
  std::size_t textLength_ = 0;
  std::vector<std::int32_t> next_;
  std::vector<std::int32_t> link_;
  std::vector<std::int32_t> len_;
};

}  // namespace morphic
