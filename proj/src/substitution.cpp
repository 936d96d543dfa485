#include "morphic/substitution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "morphic/error.hpp"

namespace morphic {

namespace {

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  const auto max = std::numeric_limits<std::uint64_t>::max();
  return a > max - b ? max : a + b;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  const auto max = std::numeric_limits<std::uint64_t>::max();
  if (a != 0 && b > max / a) return max;
  return a * b;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string strip_spaces(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c != ' ' && c != '\t' && c != '\r') out += c;
  }
  return out;
}

}  // namespace

Substitution::Substitution(Alphabet alphabet, std::vector<Word> images)
    : alphabet_(std::move(alphabet)), images_(std::move(images)) {
  if (alphabet_.size() != images_.size()) throw Error("one image per letter required");
  if (images_.size() < 2) throw Error("alphabet needs at least two letters");
  minImage_ = std::numeric_limits<std::size_t>::max();
  for (std::size_t a = 0; a < images_.size(); ++a) {
    if (images_[a].empty()) throw Error("empty image for letter '" + alphabet_.symbol(a) + "'");
    for (char c : images_[a]) {
      if (static_cast<std::size_t>(static_cast<Letter>(c)) >= images_.size()) {
        throw Error("image uses a letter outside the alphabet");
      }
    }
    maxImage_ = std::max(maxImage_, images_[a].size());
    minImage_ = std::min(minImage_, images_[a].size());
  }
}

Word Substitution::apply(WordView w) const {
  Word out;
  std::size_t len = 0;
  for (char c : w) len += images_[static_cast<Letter>(c)].size();
  out.reserve(len);
  for (char c : w) out += images_[static_cast<Letter>(c)];
  return out;
}

Expansion Substitution::apply(WordView w, std::size_t n, std::size_t cap) const {
  Expansion e;
  e.word.assign(w.substr(0, std::min(w.size(), cap)));
  for (std::size_t step = 0; step < n; ++step) {
    Word next;
    for (char c : e.word) {
      const Word& img = images_[static_cast<Letter>(c)];
      if (next.size() + img.size() > cap) {
        next.append(img, 0, cap - next.size());
        break;
      }
      next += img;
    }
    e.word.swap(next);
  }
  e.truncated = image_length(w, n) > e.word.size();
  return e;
}

std::vector<std::uint64_t> Substitution::image_lengths(std::size_t n) const {
  const std::size_t d = size();
  std::vector<std::uint64_t> len(d, 1);
  for (std::size_t step = 0; step < n; ++step) {
    std::vector<std::uint64_t> next(d, 0);
    for (std::size_t a = 0; a < d; ++a) {
      for (char c : images_[a]) next[a] = sat_add(next[a], len[static_cast<Letter>(c)]);
    }
    len.swap(next);
  }
  return len;
}

std::uint64_t Substitution::image_length(WordView w, std::size_t n) const {
  const auto len = image_lengths(n);
  std::vector<std::uint64_t> count(size(), 0);
  for (char c : w) ++count[static_cast<Letter>(c)];
  std::uint64_t total = 0;
  for (std::size_t a = 0; a < size(); ++a) total = sat_add(total, sat_mul(count[a], len[a]));
  return total;
}

std::string Substitution::to_string() const {
  std::ostringstream out;
  for (std::size_t a = 0; a < size(); ++a) {
    out << alphabet_.symbol(static_cast<Letter>(a)) << " -> " << alphabet_.render(images_[a]) << '\n';
  }
  return out.str();
}

Substitution parse_substitution(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> rules;
  std::vector<std::size_t> lineOf;
  std::size_t lineNo = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++lineNo;
    std::string_view line = text.substr(pos, end - pos);
    std::size_t p = 0;
    while (p <= line.size()) {
      std::size_t q = line.find(';', p);
      if (q == std::string_view::npos) q = line.size();
      std::string_view rule = trim(line.substr(p, q - p));
      p = q + 1;
      if (rule.empty() || rule.front() == '#') continue;
      const auto arrow = rule.find("->");
      if (arrow == std::string_view::npos) {
        throw Error("line " + std::to_string(lineNo) + ": expected 'letter -> image'");
      }
      const auto lhs = strip_spaces(rule.substr(0, arrow));
      const auto rhs = strip_spaces(rule.substr(arrow + 2));
      if (split_symbols(lhs).size() != 1) {
        throw Error("line " + std::to_string(lineNo) + ": left side must be a single letter");
      }
      if (rhs.empty()) throw Error("line " + std::to_string(lineNo) + ": empty image");
      rules.emplace_back(lhs, rhs);
      lineOf.push_back(lineNo);
    }
    pos = end + 1;
  }
  try {
    return make_substitution(rules);
  } catch (const Error& e) {
    throw Error(std::string("substitution: ") + e.what());
  }
}

Substitution make_substitution(const std::vector<std::pair<std::string, std::string>>& rules) {
  std::vector<std::string> symbols;
  auto note = [&](const std::string& s) {
    if (std::find(symbols.begin(), symbols.end(), s) == symbols.end()) symbols.push_back(s);
  };
  for (const auto& [lhs, rhs] : rules) {
    note(lhs);
    for (const auto& s : split_symbols(rhs)) note(s);
  }
  std::vector<bool> seen(symbols.size(), false);
  std::vector<std::string> rawImages(symbols.size());
  for (const auto& [lhs, rhs] : rules) {
    const auto idx = static_cast<std::size_t>(std::find(symbols.begin(), symbols.end(), lhs) - symbols.begin());
    if (seen[idx]) throw Error("duplicate rule for letter '" + lhs + "'");
    if (rhs.empty()) throw Error("empty image for letter '" + lhs + "'");
    seen[idx] = true;
    rawImages[idx] = rhs;
  }
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (!seen[i]) throw Error("letter '" + symbols[i] + "' has no rule");
  }
  Alphabet alphabet(symbols);
  std::vector<Word> images;
  images.reserve(symbols.size());
  for (const auto& raw : rawImages) images.push_back(alphabet.parse(raw));
  return Substitution(std::move(alphabet), std::move(images));
}

bool IncidenceMatrix::positive() const {
  return std::all_of(entries_.begin(), entries_.end(), [](std::int64_t v) { return v > 0; });
}

std::int64_t IncidenceMatrix::row_sum(std::size_t i) const {
  std::int64_t s = 0;
  for (std::size_t j = 0; j < dim_; ++j) s += (*this)(i, j);
  return s;
}

IncidenceMatrix incidence_matrix(const Substitution& h) {
  IncidenceMatrix m(h.size());
  for (std::size_t a = 0; a < h.size(); ++a) {
    for (char c : h.image(static_cast<Letter>(a))) ++m(a, static_cast<Letter>(c));
  }
  return m;
}

PrimitivityResult is_primitive(const IncidenceMatrix& m) {
  const std::size_t d = m.dim();
  std::vector<char> base(d * d), cur(d * d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) base[i * d + j] = cur[i * d + j] = m(i, j) > 0;
  }
  const std::size_t bound = (d - 1) * (d - 1) + 1;
  for (std::size_t k = 1; k <= bound; ++k) {
    if (std::all_of(cur.begin(), cur.end(), [](char v) { return v != 0; })) return {true, k};
    std::vector<char> next(d * d, 0);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t l = 0; l < d; ++l) {
        if (!cur[i * d + l]) continue;
        for (std::size_t j = 0; j < d; ++j) next[i * d + j] |= base[l * d + j];
      }
    }
    cur.swap(next);
  }
  return {false, std::nullopt};
}

PerronEstimate perron_eigenvalue(const IncidenceMatrix& m, double relTol, std::size_t maxIterations) {
  if (!is_primitive(m).primitive) throw Error("Perron eigenvalue requested for a non-primitive matrix");
  const std::size_t d = m.dim();
  std::vector<double> v(d, 1.0), w(d);
  PerronEstimate est;
  double prev = 0;
  for (std::size_t it = 1; it <= maxIterations; ++it) {
    double norm = 0;
    for (std::size_t i = 0; i < d; ++i) {
      double s = 0;
      for (std::size_t j = 0; j < d; ++j) s += static_cast<double>(m(i, j)) * v[j];
      w[i] = s;
      norm += s;
    }
    double vnorm = 0;
    for (double x : v) vnorm += x;
    const double lambda = norm / vnorm;
    for (std::size_t i = 0; i < d; ++i) v[i] = w[i] / norm;
    est.iterations = it;
    est.lambda = lambda;
    est.relativeError = std::abs(lambda - prev) / lambda;
    if (it > 1 && est.relativeError < relTol) break;
    prev = lambda;
  }
  est.lengths = v;
  // Row sums of M^n give |H^n(a)| exactly.
  std::vector<double> len(d, 1.0);
  double k = 1.0;
  double scale = 1.0;
  for (std::size_t n = 1; n <= 30; ++n) {
    std::vector<double> next(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) next[i] += static_cast<double>(m(i, j)) * len[j];
    }
    len.swap(next);
    scale *= est.lambda;
    for (double l : len) k = std::max(k, l / scale);
  }
  est.lengthConstant = k;
  return est;
}

bool is_marked(const Substitution& h) {
  const std::size_t d = h.size();
  std::vector<bool> first(d, false), last(d, false);
  for (std::size_t a = 0; a < d; ++a) {
    const Word& img = h.image(static_cast<Letter>(a));
    first[static_cast<Letter>(img.front())] = true;
    last[static_cast<Letter>(img.back())] = true;
  }
  return std::all_of(first.begin(), first.end(), [](bool b) { return b; }) &&
         std::all_of(last.begin(), last.end(), [](bool b) { return b; });
}

std::vector<Letter> fixed_point_letters(const Substitution& h) {
  std::vector<Letter> out;
  for (std::size_t a = 0; a < h.size(); ++a) {
    const Word& img = h.image(static_cast<Letter>(a));
    if (img.size() >= 2 && static_cast<Letter>(img.front()) == a) out.push_back(static_cast<Letter>(a));
  }
  return out;
}

Word fixed_point_prefix(const Substitution& h, Letter a, std::size_t len) {
  const Word& img = h.image(a);
  if (img.size() < 2 || static_cast<Letter>(img.front()) != a) {
    throw Error("letter '" + h.alphabet().symbol(a) + "' does not start a fixed point");
  }
  Word w(1, static_cast<char>(a));
  while (w.size() < len) {
    Word next = h.apply(w, 1, len).word;
    if (next.size() == w.size()) break;
    w.swap(next);
  }
  w.resize(std::min(w.size(), len));
  return w;
}

}  // namespace morphic
