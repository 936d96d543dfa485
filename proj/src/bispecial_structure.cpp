#include "morphic/bispecial_structure.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "morphic/recognizability.hpp"

namespace morphic {

BispecialStructure bispecial_structure_check(const LanguageIndex& index,
                                             const std::vector<SpecialWordRecord>& catalog, std::size_t lH) {
  const Substitution& h = index.substitution();
  BispecialStructure out;
  out.lH = lH;
  for (const auto& rec : catalog) {
    if (rec.word.size() <= lH) continue;
    Word cur = rec.word;
    std::size_t n = 0;
    std::string failure;
    while (cur.size() > lH) {
      const auto r = desubstitute(index, cur);
      if (r.verdict != DesubVerdict::unique) {
        failure = std::string("decomposition is ") + to_string(r.verdict);
        break;
      }
      const auto& dec = r.decompositions.front();
      if (!dec.head.empty() || !dec.tail.empty()) {
        failure = "unique decomposition has a nonempty head or tail";
        break;
      }
      cur = dec.core;
      ++n;
      if (!special_record(index, cur).bispecial()) {
        failure = "core after " + std::to_string(n) + " steps is not bispecial";
        break;
      }
    }
    if (failure.empty() && h.apply(cur, n).word != rec.word) failure = "H^n(seed) does not reproduce the word";
    if (failure.empty()) {
      out.factorizations.push_back({rec.word, n, cur});
    } else {
      out.violations.push_back({rec.word, failure});
    }
  }
  return out;
}

std::vector<LengthCluster> bispecial_length_clusters(const BispecialStructure& s, double lambda) {
  std::map<Word, LengthCluster> bySeed;
  for (const auto& f : s.factorizations) {
    auto& c = bySeed[f.seed];
    c.seed = f.seed;
    c.exponents.push_back(f.n);
    c.lengths.push_back(f.word.size());
  }
  std::vector<LengthCluster> out;
  for (auto& [seed, c] : bySeed) {
    std::vector<double> ratios;
    for (std::size_t i = 0; i < c.lengths.size(); ++i) {
      ratios.push_back(static_cast<double>(c.lengths[i]) / std::pow(lambda, static_cast<double>(c.exponents[i])));
    }
    double sum = 0;
    for (double r : ratios) sum += r;
    c.c = sum / static_cast<double>(ratios.size());
    const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
    c.spread = (*hi - *lo) / c.c;
    // Residuals against the constant read off the longest member.
    const std::size_t last = static_cast<std::size_t>(
        std::max_element(c.exponents.begin(), c.exponents.end()) - c.exponents.begin());
    const double cLast = ratios[last];
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < ratios.size(); ++i) {
      if (i == last) continue;
      const double resid = std::abs(static_cast<double>(c.lengths[i]) -
                                    cLast * std::pow(lambda, static_cast<double>(c.exponents[i])));
      if (resid > 1e-9) {
        xs.push_back(static_cast<double>(c.exponents[i]));
        ys.push_back(std::log(resid));
      }
    }
    if (xs.size() >= 2) {
      double mx = 0, my = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
      }
      mx /= static_cast<double>(xs.size());
      my /= static_cast<double>(xs.size());
      double num = 0, den = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        num += (xs[i] - mx) * (ys[i] - my);
        den += (xs[i] - mx) * (xs[i] - mx);
      }
      if (den > 0) c.theta = std::exp(num / den);
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace morphic
