#pragma once

#include <cstddef>
#include <optional>

#include "morphic/substitution.hpp"

namespace morphic {

enum class AperiodicityVerdict { certified_periodic, no_periodicity_found };

struct AperiodicEvidence {
  AperiodicityVerdict verdict = AperiodicityVerdict::no_periodicity_found;
  /// Lengths checked: p(n) >= n + 1 was tested for n <= bound.
  std::size_t bound = 0;
  /// First n with p(n) = p(n + 1), when periodic.
  std::optional<std::size_t> stallLength;
  /// Period word read off the reference word, when periodic.
  Word periodWord;
};

/// Complexity test p(n) >= n + 1 for n <= bound. A stall certifies
/// periodicity; otherwise the result is evidence, not proof.
AperiodicEvidence aperiodicity_check(const Substitution& h, std::size_t bound = 200);

struct StructureReport {
  bool primitive = false;
  std::optional<std::size_t> primitiveWitness;
  bool marked = false;
  bool twoFull = false;
  AperiodicEvidence aperiodic;
  std::optional<PerronEstimate> perron;
};

StructureReport analyze_structure(const Substitution& h, std::size_t aperiodicityBound = 200);

}  // namespace morphic
