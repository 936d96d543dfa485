#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "morphic/word.hpp"

namespace morphic {

/// Default cap on the length of any materialized word.
inline constexpr std::size_t kDefaultLengthCap = std::size_t{1} << 26;

struct Expansion {
  Word word;
  bool truncated = false;
};

/// A non-erasing substitution on a finite alphabet.
class Substitution {
 public:
  Substitution() = default;
  Substitution(Alphabet alphabet, std::vector<Word> images);

  std::size_t size() const noexcept { return images_.size(); }
  const Alphabet& alphabet() const noexcept { return alphabet_; }
  const Word& image(Letter a) const { return images_.at(a); }
  const std::vector<Word>& images() const noexcept { return images_; }
  std::size_t max_image_length() const noexcept { return maxImage_; }
  std::size_t min_image_length() const noexcept { return minImage_; }

  Word apply(WordView w) const;
  /// Prefix of H^n(w) of length at most cap.
  Expansion apply(WordView w, std::size_t n, std::size_t cap = kDefaultLengthCap) const;
  /// |H^n(a)| for every letter, saturating at UINT64_MAX.
  std::vector<std::uint64_t> image_lengths(std::size_t n) const;
  /// |H^n(w)|, saturating.
  std::uint64_t image_length(WordView w, std::size_t n) const;

  /// Text form, one rule per line.
  std::string to_string() const;

 private:
  Alphabet alphabet_;
  std::vector<Word> images_;
  std::size_t maxImage_ = 0;
  std::size_t minImage_ = 0;
};

/// Parses "a -> ab" rules separated by newlines or ';'. Letters are indexed
/// in order of first appearance anywhere in the text.
Substitution parse_substitution(std::string_view text);

/// Builds a substitution from (symbol, image) pairs given in order.
Substitution make_substitution(const std::vector<std::pair<std::string, std::string>>& rules);

/// Square non-negative integer matrix, row-major; entry (a, b) counts b in H(a).
class IncidenceMatrix {
 public:
  explicit IncidenceMatrix(std::size_t dim = 0) : dim_(dim), entries_(dim * dim, 0) {}

  std::size_t dim() const noexcept { return dim_; }
  std::int64_t& operator()(std::size_t i, std::size_t j) { return entries_[i * dim_ + j]; }
  std::int64_t operator()(std::size_t i, std::size_t j) const { return entries_[i * dim_ + j]; }

  bool positive() const;
  std::int64_t row_sum(std::size_t i) const;

 private:
  std::size_t dim_;
  std::vector<std::int64_t> entries_;
};

IncidenceMatrix incidence_matrix(const Substitution& h);

struct PrimitivityResult {
  bool primitive = false;
  /// Smallest k with M^k > 0 when primitive.
  std::optional<std::size_t> witness;
};

/// Checks powers of the zero pattern up to the Wielandt bound (d-1)^2 + 1.
PrimitivityResult is_primitive(const IncidenceMatrix& m);

struct PerronEstimate {
  double lambda = 0;
  double relativeError = 0;
  std::size_t iterations = 0;
  /// max over letters a and n <= 30 of |H^n(a)| / lambda^n.
  double lengthConstant = 0;
  /// Right eigenvector, normalized to sum 1: |H^n(a)| ~ c · lengths[a] · λ^n.
  std::vector<double> lengths;
};

/// Power iteration from the all-ones vector. Throws unless m is primitive.
PerronEstimate perron_eigenvalue(const IncidenceMatrix& m, double relTol = 1e-13,
                                 std::size_t maxIterations = 1000000);

/// First letters of the images form a bijection, and so do the last letters.
bool is_marked(const Substitution& h);

/// Letters a with H(a) starting with a and |H(a)| >= 2.
std::vector<Letter> fixed_point_letters(const Substitution& h);

/// Prefix of length len of the fixed point starting with a.
Word fixed_point_prefix(const Substitution& h, Letter a, std::size_t len);

}  // namespace morphic
