#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "morphic/language.hpp"

namespace morphic {

/// z = head · H(core) · tail, head a proper suffix of H(headLetter), tail a
/// proper prefix of H(tailLetter), and headLetter·core·tailLetter in L.
/// Letters are absent when the corresponding part is empty.
struct Decomposition {
  Word head;
  Word core;
  Word tail;
  std::optional<Letter> headLetter;
  std::optional<Letter> tailLetter;
};

enum class DesubVerdict { unique, multiple, none };

const char* to_string(DesubVerdict v);

struct DesubReport {
  Word word;
  std::vector<Decomposition> decompositions;
  DesubVerdict verdict = DesubVerdict::none;
};

/// All decompositions of z, ordered by head length then core.
DesubReport desubstitute(const LanguageIndex& index, WordView z);

struct RecognizabilityScan {
  /// Largest length at which some factor has several decompositions.
  std::size_t length = 0;
  std::size_t scanLen = 0;
  std::vector<Word> ambiguousAtLength;
};

/// Desubstitutes every factor up to scanLen. Throws Inconclusive when
/// ambiguity persists at scanLen.
RecognizabilityScan recognizability_length(const LanguageIndex& index, std::size_t scanLen);

/// (D²s)^p0 + sD² with s = max |H(a)| and p0 the least p with
/// (D²s)^p + sD² > powerBound.
std::size_t theoretical_recognizability_bound(const Substitution& h, std::size_t powerBound);

/// Λ: the longest H(v) with v in L that occurs inside H(u), for some word u,
/// with no block boundary of H(v) (ends included) on a block boundary of
/// H(u). For marked H, an occurrence in H(z) of a word of L longer than
/// Λ + 2·max|H(a)| - 2 decomposes along the blocks of H(z).
/// Throws Inconclusive if the search reaches the index maxLen.
std::size_t misaligned_coincidence_bound(const LanguageIndex& index);

enum class AlignmentOutcome { forces_equality, forces_periodicity, undecided, contradiction };

const char* to_string(AlignmentOutcome o);

struct AlignmentResult {
  AlignmentOutcome outcome = AlignmentOutcome::undecided;
  /// Blocks consumed on each side before the outcome was reached.
  std::size_t steps = 0;
  /// Letters of x and y forced by marking, including the given prefixes.
  Word forcedX;
  Word forcedY;
};

/// H(x) and σ^shift H(y) agree: x, y are given prefixes of the two
/// preimages. Left marking forces each next letter from the overlapping
/// block; the search stops when the offset returns to 0 (equality), a
/// (letter, letter, offset) state repeats (periodicity), the forced blocks
/// disagree (contradiction), or maxSteps is hit.
/// Throws if the given prefixes contradict the forced letters.
AlignmentResult shifted_decomposition_search(const Substitution& h, WordView x, WordView y,
                                             std::size_t shift, std::size_t maxSteps = 1000);

}  // namespace morphic
