#include "morphic/suffix_automaton.hpp"

#include <algorithm>

#include "morphic/error.hpp"

namespace morphic {

SubstringOracle::SubstringOracle(WordView text, std::size_t alphabetSize)
    : d_(alphabetSize), textLength_(text.size()) {
  if (text.size() >= (std::size_t{1} << 30)) throw BudgetExceeded("substring oracle text too long");
  const std::size_t cap = 2 * text.size() + 2;
  next_.reserve(cap * d_);
  link_.reserve(cap);
  len_.reserve(cap);
  auto add_state = [&](std::int32_t len, std::int32_t link) {
    len_.push_back(len);
    link_.push_back(link);
    next_.resize(next_.size() + d_, -1);
    return static_cast<std::int32_t>(len_.size() - 1);
  };
  add_state(0, -1);
  std::int32_t last = 0;
  // Feed the text backwards: factors of the reversed text are reversed factors.
  for (std::size_t i = text.size(); i-- > 0;) {
    const auto c = static_cast<Letter>(text[i]);
    if (c >= d_) throw Error("text letter outside alphabet");
    const std::int32_t cur = add_state(len_[last] + 1, 0);
    std::int32_t p = last;
    while (p != -1 && next_[p * d_ + c] == -1) {
      next_[p * d_ + c] = cur;
      p = link_[p];
    }
    if (p != -1) {
      const std::int32_t q = next_[p * d_ + c];
      if (len_[p] + 1 == len_[q]) {
        link_[cur] = q;
      } else {
        const std::int32_t clone = add_state(len_[p] + 1, link_[q]);
        std::copy_n(next_.begin() + q * d_, d_, next_.begin() + clone * d_);
        while (p != -1 && next_[p * d_ + c] == q) {
          next_[p * d_ + c] = clone;
          p = link_[p];
        }
        link_[q] = clone;
        link_[cur] = clone;
      }
    }
    last = cur;
  }
}

std::vector<std::uint32_t> SubstringOracle::prefix_matches(WordView x) const {
  std::vector<std::uint32_t> ms(x.size());
  std::int32_t v = 0;
  std::uint32_t l = 0;
  // Reading x right to left walks the reversed text forwards.
  for (std::size_t j = x.size(); j-- > 0;) {
    const auto c = static_cast<Letter>(x[j]);
    if (c >= d_) {
      v = 0;
      l = 0;
      ms[j] = 0;
      continue;
    }
    while (v != 0 && next_[v * d_ + c] == -1) {
      v = link_[v];
      l = static_cast<std::uint32_t>(len_[v]);
    }
    if (next_[v * d_ + c] != -1) {
      v = next_[v * d_ + c];
      ++l;
    } else {
      v = 0;
      l = 0;
    }
    ms[j] = l;
  }
  return ms;
}

}  // namespace morphic
