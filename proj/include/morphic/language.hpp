#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "morphic/error.hpp"
#include "morphic/substitution.hpp"
#include "morphic/word.hpp"

namespace morphic {

struct LanguageOptions {
  /// Factor sets are enumerated for every length up to maxLen.
  std::size_t maxLen = 16;
  /// δ answers strictly below the certified depth are exact; the certified
  /// depth is at least max(deltaDepth, maxLen) + 1.
  std::size_t deltaDepth = 0;
};

struct DeltaQuery {
  std::size_t length = 0;
  SaturationKind saturation = SaturationKind::none;
  bool saturated() const noexcept { return saturation != SaturationKind::none; }
};

/// The language of a primitive substitution: exact factor sets up to maxLen
/// plus a substring oracle for membership and δ on long words.
/// Immutable after build; copies share storage.
class LanguageIndex {
 public:
  static LanguageIndex build(const Substitution& h, LanguageOptions options = {});

  const Substitution& substitution() const noexcept;
  std::size_t max_len() const noexcept;
  /// Every word of the language of length <= certified_depth() occurs in
  /// the oracle text.
  std::size_t certified_depth() const noexcept;
  double perron() const noexcept;
  double length_constant() const noexcept;
  const std::vector<double>& length_vector() const noexcept;

  /// Sorted factors of length n, n <= maxLen.
  const std::vector<Word>& factors(std::size_t n) const;
  std::size_t complexity(std::size_t n) const { return factors(n).size(); }
  bool contains(WordView w) const;
  bool is_two_full() const;

  /// Length of the longest prefix of x in the language.
  DeltaQuery delta(WordView x) const;
  /// δ of x[j..] for j in [0, count).
  std::vector<DeltaQuery> delta_all(WordView x, std::size_t count) const;
  /// Same, throwing Saturation at the first saturated position.
  std::vector<std::size_t> delta_exact(WordView x, std::size_t count) const;

  /// Prefix of a fixed point of some power of H (the reference word of the
  /// attractor). Computed on demand, capped at the length cap.
  Word reference_prefix(std::size_t len) const;

 private:
  struct Data;
  std::shared_ptr<const Data> data_;
};

// ── Special and bispecial words ──

enum class BispecialKind { weak, strong, neutral };

const char* to_string(BispecialKind k);

struct SpecialWordRecord {
  Word word;
  std::size_t leftValence = 0;
  std::size_t rightValence = 0;
  std::size_t bothValence = 0;
  long bilateralIndex = 0;
  bool leftSpecial() const noexcept { return leftValence >= 2; }
  bool rightSpecial() const noexcept { return rightValence >= 2; }
  bool bispecial() const noexcept { return leftSpecial() && rightSpecial(); }
  BispecialKind kind() const noexcept;
};

/// Valences of a single factor w; needs |w| + 2 within the index.
SpecialWordRecord special_record(const LanguageIndex& index, WordView w);

/// Valences of every factor of length n; needs n + 2 <= maxLen.
std::vector<SpecialWordRecord> special_profile(const LanguageIndex& index, std::size_t n);

/// Bispecial factors of length <= maxLen - 2, by length then lexicographically.
std::vector<SpecialWordRecord> bispecials_up_to(const LanguageIndex& index, std::size_t maxLen);

struct PowerFreeBound {
  /// Smallest N with w^N outside the language for every |w| <= maxBase.
  std::size_t bound = 0;
  std::size_t maxExponent = 0;
  Word witness;
  std::size_t maxBase = 0;
};

PowerFreeBound power_free_bound(const LanguageIndex& index, std::size_t maxBase = 12);

struct ReturnTimes {
  Word word;
  std::vector<std::size_t> occurrences;
  /// next - prev for consecutive occurrences.
  std::vector<std::size_t> returnTimes;
  /// Letters strictly between consecutive occurrences: next - prev - |w|.
  std::vector<std::size_t> gaps;
  std::size_t maxGap = 0;
  /// max return time / |w|.
  double linearityConstant = 0;
};

ReturnTimes return_times(const LanguageIndex& index, WordView w, std::size_t horizon);

struct OverlapAudit {
  double maxRatio = 0;
  Word worstU;
  Word worstV;
  std::size_t worstPosition = 0;
  std::size_t pairsExamined = 0;
};

/// Largest overlap |U ∩ V| / |U| over occurrences of catalog words U before
/// V, with |U| <= |V| and U starting strictly first, in a reference prefix.
OverlapAudit overlap_ratio_audit(const LanguageIndex& index, const std::vector<Word>& catalog,
                                 std::size_t horizon);

}  // namespace morphic
