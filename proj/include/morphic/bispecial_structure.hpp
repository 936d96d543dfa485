#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "morphic/language.hpp"

namespace morphic {

struct BispecialFactorization {
  Word word;
  /// word = H^n(seed), seed bispecial with |seed| <= l(H).
  std::size_t n = 0;
  Word seed;
};

struct StructureViolation {
  Word word;
  std::string reason;
};

struct BispecialStructure {
  std::size_t lH = 0;
  std::vector<BispecialFactorization> factorizations;
  std::vector<StructureViolation> violations;
};

/// Desubstitutes every bispecial longer than lH down to a short bispecial
/// seed; each step must be unique with empty head and tail.
BispecialStructure bispecial_structure_check(const LanguageIndex& index,
                                             const std::vector<SpecialWordRecord>& catalog, std::size_t lH);

struct LengthCluster {
  Word seed;
  std::vector<std::size_t> exponents;
  std::vector<std::size_t> lengths;
  /// Mean of |H^n(seed)| / λ^n.
  double c = 0;
  /// (max - min) / mean of the same ratios.
  double spread = 0;
  /// Geometric rate of ||H^n(seed)| - cλ^n|, when at least two residuals
  /// are nonzero. Diagnostic only.
  std::optional<double> theta;
};

std::vector<LengthCluster> bispecial_length_clusters(const BispecialStructure& s, double lambda);

}  // namespace morphic
