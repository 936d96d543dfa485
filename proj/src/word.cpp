#include "morphic/word.hpp"

#include "morphic/error.hpp"

namespace morphic {

std::vector<std::string> split_symbols(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto lead = static_cast<unsigned char>(text[i]);
    std::size_t len = 1;
    if (lead >= 0xF0) {
      len = 4;
    } else if (lead >= 0xE0) {
      len = 3;
    } else if (lead >= 0xC0) {
      len = 2;
    }
    if (i + len > text.size()) throw Error("truncated UTF-8 sequence");
    out.emplace_back(text.substr(i, len));
    i += len;
  }
  return out;
}

Alphabet::Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.size() > 255) throw Error("alphabet larger than 255 letters");
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (symbols_[i] == symbols_[j]) throw Error("duplicate letter '" + symbols_[i] + "'");
    }
  }
}

std::optional<Letter> Alphabet::find(std::string_view symbol) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (symbols_[i] == symbol) return static_cast<Letter>(i);
  }
  return std::nullopt;
}

std::string Alphabet::render(WordView w) const {
  std::string out;
  out.reserve(w.size());
  for (char c : w) out += symbol(static_cast<Letter>(c));
  return out;
}

Word Alphabet::parse(std::string_view text) const {
  Word w;
  for (const auto& s : split_symbols(text)) {
    auto a = find(s);
    if (!a) throw Error("unknown letter '" + s + "'");
    w.push_back(static_cast<char>(*a));
  }
  return w;
}

std::vector<Word> all_words(std::size_t d, std::size_t n) {
  std::vector<Word> out{Word()};
  for (std::size_t len = 0; len < n; ++len) {
    std::vector<Word> next;
    next.reserve(out.size() * d);
    for (const auto& w : out) {
      for (std::size_t a = 0; a < d; ++a) next.push_back(w + static_cast<char>(a));
    }
    out.swap(next);
  }
  return out;
}

}  // namespace morphic
