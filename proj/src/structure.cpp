#include "morphic/structure.hpp"

#include "morphic/language.hpp"

namespace morphic {

AperiodicEvidence aperiodicity_check(const Substitution& h, std::size_t bound) {
  const auto index = LanguageIndex::build(h, {bound + 1, 0});
  AperiodicEvidence ev;
  ev.bound = bound;
  for (std::size_t n = 1; n <= bound; ++n) {
    const auto pn = index.complexity(n);
    if (index.complexity(n + 1) == pn) {
      // A minimal subshift with p(n) = p(n+1) is a single periodic orbit of
      // period p(n).
      ev.verdict = AperiodicityVerdict::certified_periodic;
      ev.stallLength = n;
      const Word ref = index.reference_prefix(2 * pn + n + 1);
      ev.periodWord = ref.substr(0, pn);
      for (std::size_t i = pn; i < ref.size(); ++i) {
        if (ref[i] != ref[i - pn]) throw Error("complexity stall without a periodic reference word");
      }
      return ev;
    }
  }
  return ev;
}

StructureReport analyze_structure(const Substitution& h, std::size_t aperiodicityBound) {
  StructureReport r;
  const auto m = incidence_matrix(h);
  const auto prim = is_primitive(m);
  r.primitive = prim.primitive;
  r.primitiveWitness = prim.witness;
  r.marked = is_marked(h);
  if (!r.primitive) return r;
  r.perron = perron_eigenvalue(m);
  r.twoFull = LanguageIndex::build(h, {2, 0}).is_two_full();
  r.aperiodic = aperiodicity_check(h, aperiodicityBound);
  return r;
}

}  // namespace morphic
