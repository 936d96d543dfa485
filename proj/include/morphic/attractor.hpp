#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "morphic/language.hpp"

namespace morphic {

/// An infinite word given by a finite prefix and an eventually periodic or
/// fixed-point continuation.
class Tail {
 public:
  enum class Kind { periodic, fixed_point };

  /// prefix · block^∞
  static Tail periodic(Word prefix, Word block);
  /// prefix · u where u is the fixed point of H starting with letter.
  static Tail fixed_point(Word prefix, Letter letter);

  Kind kind() const noexcept { return kind_; }
  const Word& prefix() const noexcept { return prefix_; }
  const Word& block() const noexcept { return block_; }
  Letter letter() const noexcept { return letter_; }
  Letter first_letter() const;

  /// The first len letters.
  Word materialize(const Substitution& h, std::size_t len) const;
  /// H^n applied to this word, again as a tail.
  Tail image(const Substitution& h, std::size_t n, std::size_t cap = kDefaultLengthCap) const;

 private:
  Kind kind_ = Kind::periodic;
  Word prefix_;
  Word block_;
  Letter letter_ = 0;
};

/// A materialized prefix of an infinite word with exact δ at its first
/// positions.
struct OrbitWindow {
  Word word;
  std::vector<std::size_t> delta;
};

/// δ(σ^j x) for j in [0, count). Materializes more of x until no answer
/// touches the end of the window; throws Saturation if the certified depth
/// is reached or the length cap is exceeded (x likely in the attractor).
OrbitWindow orbit_window(const LanguageIndex& index, const Tail& x, std::size_t count,
                         std::size_t cap = kDefaultLengthCap);

/// δ(σ^j H^n x) for j in [0, count). Answers beyond the certified depth are
/// lifted level by level from H^{n-1} x: for marked H a long coincidence of
/// H(z) with the language follows the blocks of H(z), so it ends where the
/// image of the coincidence of z ends. Short answers are always read from
/// the index directly, and the two must agree.
OrbitWindow image_window(const LanguageIndex& index, const Tail& x, std::size_t n, std::size_t count);

struct AccidentProfile {
  std::size_t delta0 = 0;
  /// Accident times B_1 < B_2 < ...
  std::vector<std::size_t> times;
  /// b_i = B_i - B_{i-1}, with B_0 = 0.
  std::vector<std::size_t> gaps;
  /// d_i = δ(σ^{B_i} x); depths[0] = delta0.
  std::vector<std::size_t> depths;
  /// W^(i) = x[B_i, B_{i-1} + d_{i-1}), the part of the previous coincidence
  /// still alive at the accident.
  std::vector<Word> witnesses;
  /// |W^(i)| = d_{i-1} - b_i.
  std::vector<std::size_t> Deltas;
  /// W^(i) overlaps W^(i-1).
  std::vector<bool> overlapsPrevious;
};

/// Accidents at positions 1..deltas.size()-1 of a δ sequence: positions
/// where δ does not drop by exactly one.
AccidentProfile accidents_from_deltas(WordView word, const std::vector<std::size_t>& deltas);

/// Accidents of x up to and including position horizon.
AccidentProfile accidents(const LanguageIndex& index, const Tail& x, std::size_t horizon);

/// Keeps the accidents with time below limit.
AccidentProfile restrict_times(const AccidentProfile& p, std::size_t limit);

/// t_n(x) = |H^n(x_0)|.
std::size_t first_block_length(const Substitution& h, const Tail& x, std::size_t n);

/// Smallest k with |H^k(x_2 … x_p)| >= lH, p = δ(x).
std::size_t select_scale(const LanguageIndex& index, const Tail& x, std::size_t lH);

struct ScaleRow {
  std::size_t n = 0;
  std::vector<std::size_t> times;
  std::vector<std::size_t> depths;
  std::vector<std::size_t> Deltas;
  /// Prediction |H^{n-k}(e_1 … e_{j_i})| and |H^{n-k}(depth word)| from level k.
  std::vector<std::size_t> exactTimes;
  std::vector<std::size_t> exactDepths;
  bool exactMatch = false;
  /// max_i |observed - λ^{n-k} · ℓ(level-k word)| / λ^{n-k}, where ℓ(w) is
  /// the limit of |H^r(w)| / λ^r. ℓ(w) = |w| for constant-length H.
  double timeResidual = 0;
  double depthResidual = 0;
  double DeltaResidual = 0;
  /// Same with the plain length |w| in place of ℓ(w).
  double plainTimeResidual = 0;
  double plainDepthResidual = 0;
  double plainDeltaResidual = 0;
};

/// ℓ(a) = lim |H^r(a)| / λ^r for each letter.
std::vector<double> asymptotic_lengths(const Substitution& h, double lambda);

struct RenormalizationCheck {
  std::size_t k = 0;
  AccidentProfile base;
  std::vector<ScaleRow> rows;
  std::vector<std::string> violations;
};

struct RenormalizationCheckOptions {
  std::optional<std::size_t> k;
  /// Refuse substitutions that are not primitive, marked and 2-full.
  bool enforceHypotheses = true;
};

/// Accidents of H^n(x) before t_n(x), for n = k+1 .. nMax, compared with
/// the accidents of H^k(x) pushed forward by H^{n-k}.
RenormalizationCheck accident_renormalization_check(const LanguageIndex& index, const Tail& x, std::size_t lH,
                                                    std::size_t nMax, RenormalizationCheckOptions options = {});

}  // namespace morphic
