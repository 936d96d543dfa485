#include "morphic/language.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <unordered_set>

#include "morphic/suffix_automaton.hpp"

namespace morphic {

struct LanguageIndex::Data {
  Substitution h;
  std::size_t maxLen = 0;
  std::vector<std::unordered_set<Word>> sets;
  std::vector<std::vector<Word>> sorted;
  std::vector<std::int32_t> trie;  // node * d + letter -> child, -1 if absent
  SubstringOracle oracle;
  std::size_t certified = 0;
  PerronEstimate perron;
  Substitution referencePower;
  Letter referenceLetter = 0;
};

namespace {

/// Exact L_n for primitive h: seed with the factors of some H^k(a) and close
/// under "factors of length n of H(w)".
std::unordered_set<Word> closure_at(const Substitution& h, std::size_t n) {
  Word seed(1, '\0');
  while (seed.size() < n) {
    Word next = h.apply(seed);
    if (next.size() > kDefaultLengthCap) throw BudgetExceeded("language seed too long");
    seed.swap(next);
  }
  std::unordered_set<Word> set;
  std::deque<Word> queue;
  auto add_windows = [&](const Word& w) {
    for (std::size_t i = 0; i + n <= w.size(); ++i) {
      Word f = w.substr(i, n);
      if (set.insert(f).second) queue.push_back(std::move(f));
    }
  };
  add_windows(seed);
  while (!queue.empty()) {
    Word w = std::move(queue.front());
    queue.pop_front();
    add_windows(h.apply(w));
  }
  return set;
}

bool contains_all(const Word& text, const std::unordered_set<Word>& words) {
  for (const auto& w : words) {
    if (text.find(w) == Word::npos) return false;
  }
  return true;
}

}  // namespace

LanguageIndex LanguageIndex::build(const Substitution& h, LanguageOptions options) {
  const auto m = incidence_matrix(h);
  if (!is_primitive(m).primitive) throw Error("language index requires a primitive substitution");
  if (options.maxLen < 2) options.maxLen = 2;
  auto data = std::make_shared<Data>();
  data->h = h;
  data->maxLen = options.maxLen;
  data->perron = perron_eigenvalue(m);
  const std::size_t d = h.size();

  auto top = closure_at(h, options.maxLen);
  data->sets.resize(options.maxLen + 1);
  data->sets[0].insert(Word());
  for (const auto& w : top) {
    for (std::size_t n = 1; n <= options.maxLen; ++n) data->sets[n].insert(w.substr(0, n));
  }
  data->sorted.resize(options.maxLen + 1);
  for (std::size_t n = 0; n <= options.maxLen; ++n) {
    data->sorted[n].assign(data->sets[n].begin(), data->sets[n].end());
    std::sort(data->sorted[n].begin(), data->sorted[n].end());
  }

  data->trie.assign(d, -1);
  for (const auto& w : data->sorted[options.maxLen]) {
    std::size_t node = 0;
    for (char c : w) {
      const auto slot = node * d + static_cast<Letter>(c);
      if (data->trie[slot] == -1) {
        data->trie[slot] = static_cast<std::int32_t>(data->trie.size() / d);
        data->trie.resize(data->trie.size() + d, -1);
      }
      node = static_cast<std::size_t>(data->trie[slot]);
    }
  }

  // Any word of length <= min_c |H^k(c)| + 1 straddles at most two blocks
  // H^k(c)H^k(c'), so it occurs in H^k(q) once q contains all of L_2.
  Word q(1, '\0');
  while (!contains_all(q, data->sets[2])) {
    q = h.apply(q);
    if (q.size() > kDefaultLengthCap) throw BudgetExceeded("no short word covers L_2");
  }
  const std::size_t target = std::max(options.deltaDepth, options.maxLen);
  std::size_t k = 0;
  for (;; ++k) {
    const auto lens = h.image_lengths(k);
    const auto shortest = *std::min_element(lens.begin(), lens.end());
    if (shortest >= target) {
      data->certified = static_cast<std::size_t>(shortest) + 1;
      break;
    }
  }
  if (h.image_length(q, k) > kDefaultLengthCap) {
    throw BudgetExceeded("substring oracle for depth " + std::to_string(target) + " exceeds the length cap");
  }
  data->oracle = SubstringOracle(h.apply(q, k).word, d);

  for (std::size_t j = 1; j <= std::max<std::size_t>(d, 1); ++j) {
    std::vector<Word> imgs;
    for (std::size_t a = 0; a < d; ++a) imgs.push_back(h.apply(Word(1, static_cast<char>(a)), j).word);
    Substitution power(h.alphabet(), imgs);
    const auto letters = fixed_point_letters(power);
    if (!letters.empty()) {
      data->referencePower = power;
      data->referenceLetter = letters.front();
      break;
    }
    if (j == d) throw Error("no power of the substitution up to the alphabet size has a fixed point");
  }

  LanguageIndex index;
  index.data_ = std::move(data);
  return index;
}

const Substitution& LanguageIndex::substitution() const noexcept { return data_->h; }
std::size_t LanguageIndex::max_len() const noexcept { return data_->maxLen; }
std::size_t LanguageIndex::certified_depth() const noexcept { return data_->certified; }
double LanguageIndex::perron() const noexcept { return data_->perron.lambda; }
double LanguageIndex::length_constant() const noexcept { return data_->perron.lengthConstant; }
const std::vector<double>& LanguageIndex::length_vector() const noexcept { return data_->perron.lengths; }

const std::vector<Word>& LanguageIndex::factors(std::size_t n) const {
  if (n > data_->maxLen) {
    throw Error("factor length " + std::to_string(n) + " beyond index maxLen " + std::to_string(data_->maxLen));
  }
  return data_->sorted[n];
}

bool LanguageIndex::contains(WordView w) const {
  if (w.size() <= data_->maxLen) return data_->sets[w.size()].count(Word(w)) != 0;
  if (w.size() > data_->certified) {
    throw Saturation("membership query longer than the certified depth", SaturationKind::index_depth,
                     data_->certified);
  }
  return data_->oracle.prefix_matches(w)[0] >= w.size();
}

bool LanguageIndex::is_two_full() const {
  const auto d = data_->h.size();
  return complexity(2) == d * d;
}

DeltaQuery LanguageIndex::delta(WordView x) const {
  const std::size_t d = data_->h.size();
  std::size_t node = 0;
  std::size_t depth = 0;
  while (depth < x.size() && depth < data_->maxLen) {
    const auto next = data_->trie[node * d + static_cast<Letter>(x[depth])];
    if (next == -1) return {depth, SaturationKind::none};
    node = static_cast<std::size_t>(next);
    ++depth;
  }
  if (depth == x.size()) return {depth, SaturationKind::end_of_input};
  return delta_all(x.substr(0, std::min(x.size(), data_->certified + 1)), 1).front();
}

std::vector<DeltaQuery> LanguageIndex::delta_all(WordView x, std::size_t count) const {
  count = std::min(count, x.size());
  const auto ms = data_->oracle.prefix_matches(x);
  std::vector<DeltaQuery> out(count);
  for (std::size_t j = 0; j < count; ++j) {
    const std::size_t len = ms[j];
    if (len >= data_->certified) {
      out[j] = {data_->certified, SaturationKind::index_depth};
    } else if (len == x.size() - j) {
      out[j] = {len, SaturationKind::end_of_input};
    } else {
      out[j] = {len, SaturationKind::none};
    }
  }
  return out;
}

std::vector<std::size_t> LanguageIndex::delta_exact(WordView x, std::size_t count) const {
  const auto qs = delta_all(x, count);
  std::vector<std::size_t> out(qs.size());
  for (std::size_t j = 0; j < qs.size(); ++j) {
    if (qs[j].saturated()) {
      throw Saturation("δ saturated at position " + std::to_string(j), qs[j].saturation, j);
    }
    out[j] = qs[j].length;
  }
  return out;
}

Word LanguageIndex::reference_prefix(std::size_t len) const {
  if (len > kDefaultLengthCap) throw BudgetExceeded("reference prefix longer than the length cap");
  return fixed_point_prefix(data_->referencePower, data_->referenceLetter, len);
}

// ── Special and bispecial words ──

const char* to_string(BispecialKind k) {
  switch (k) {
    case BispecialKind::weak:
      return "weak";
    case BispecialKind::strong:
      return "strong";
    case BispecialKind::neutral:
      return "neutral";
  }
  return "neutral";
}

BispecialKind SpecialWordRecord::kind() const noexcept {
  if (bilateralIndex < 0) return BispecialKind::weak;
  if (bilateralIndex > 0) return BispecialKind::strong;
  return BispecialKind::neutral;
}

SpecialWordRecord special_record(const LanguageIndex& index, WordView w) {
  const std::size_t d = index.substitution().size();
  if (w.size() + 2 > index.max_len()) throw Error("special_record: word too long for the index");
  if (!index.contains(w)) throw Error("special_record: word not in the language");
  SpecialWordRecord r;
  r.word = Word(w);
  for (std::size_t a = 0; a < d; ++a) {
    const char ca = static_cast<char>(a);
    if (index.contains(ca + r.word)) ++r.leftValence;
    if (index.contains(r.word + ca)) ++r.rightValence;
    for (std::size_t b = 0; b < d; ++b) {
      if (index.contains(ca + r.word + static_cast<char>(b))) ++r.bothValence;
    }
  }
  r.bilateralIndex = static_cast<long>(r.bothValence) - static_cast<long>(r.rightValence) -
                     static_cast<long>(r.leftValence) + 1;
  return r;
}

std::vector<SpecialWordRecord> special_profile(const LanguageIndex& index, std::size_t n) {
  if (n + 2 > index.max_len()) {
    throw Error("special profile at length " + std::to_string(n) + " needs maxLen >= " + std::to_string(n + 2));
  }
  std::vector<SpecialWordRecord> out;
  for (const auto& w : index.factors(n)) out.push_back(special_record(index, w));
  return out;
}

std::vector<SpecialWordRecord> bispecials_up_to(const LanguageIndex& index, std::size_t maxLen) {
  if (maxLen + 2 > index.max_len()) {
    throw Error("bispecial catalog up to " + std::to_string(maxLen) + " needs maxLen >= " +
                std::to_string(maxLen + 2));
  }
  std::vector<SpecialWordRecord> out;
  for (std::size_t n = 0; n <= maxLen; ++n) {
    for (auto& r : special_profile(index, n)) {
      if (r.bispecial()) out.push_back(std::move(r));
    }
  }
  return out;
}

PowerFreeBound power_free_bound(const LanguageIndex& index, std::size_t maxBase) {
  if (maxBase > index.max_len()) throw Error("power_free_bound: maxBase beyond index maxLen");
  PowerFreeBound out;
  out.maxBase = maxBase;
  for (std::size_t n = 1; n <= maxBase; ++n) {
    for (const auto& w : index.factors(n)) {
      std::size_t e = 1;
      Word p = w;
      for (;;) {
        p += w;
        if (p.size() > index.certified_depth()) {
          throw Inconclusive("power " + std::to_string(e + 1) + " of a length-" + std::to_string(n) +
                             " word reaches the certified depth; the language may contain arbitrarily "
                             "high powers (periodic) or the index is too shallow");
        }
        if (!index.contains(p)) break;
        ++e;
      }
      if (e > out.maxExponent) {
        out.maxExponent = e;
        out.witness = w;
      }
    }
  }
  out.bound = out.maxExponent + 1;
  return out;
}

ReturnTimes return_times(const LanguageIndex& index, WordView w, std::size_t horizon) {
  if (w.empty()) throw Error("return_times: empty word");
  if (!index.contains(w)) throw Error("return_times: word not in the language");
  const Word ref = index.reference_prefix(horizon);
  ReturnTimes r;
  r.word = Word(w);
  for (auto pos = ref.find(w); pos != Word::npos; pos = ref.find(w, pos + 1)) r.occurrences.push_back(pos);
  if (r.occurrences.size() < 2) {
    throw Error("return_times: fewer than two occurrences within the horizon");
  }
  std::size_t maxReturn = 0;
  for (std::size_t i = 1; i < r.occurrences.size(); ++i) {
    const auto t = r.occurrences[i] - r.occurrences[i - 1];
    r.returnTimes.push_back(t);
    r.gaps.push_back(t >= w.size() ? t - w.size() : 0);
    maxReturn = std::max(maxReturn, t);
  }
  r.maxGap = *std::max_element(r.gaps.begin(), r.gaps.end());
  r.linearityConstant = static_cast<double>(maxReturn) / static_cast<double>(w.size());
  return r;
}

OverlapAudit overlap_ratio_audit(const LanguageIndex& index, const std::vector<Word>& catalog,
                                 std::size_t horizon) {
  const Word ref = index.reference_prefix(horizon);
  // starts[p] lists catalog entries occurring at p.
  std::vector<std::vector<std::size_t>> starts(ref.size());
  for (std::size_t c = 0; c < catalog.size(); ++c) {
    if (catalog[c].empty()) continue;
    for (auto pos = ref.find(catalog[c]); pos != Word::npos; pos = ref.find(catalog[c], pos + 1)) {
      starts[pos].push_back(c);
    }
  }
  OverlapAudit audit;
  for (std::size_t a = 0; a < ref.size(); ++a) {
    for (std::size_t u : starts[a]) {
      const auto ulen = catalog[u].size();
      for (std::size_t b = a + 1; b < a + ulen && b < ref.size(); ++b) {
        for (std::size_t v : starts[b]) {
          if (catalog[v].size() < ulen) continue;
          ++audit.pairsExamined;
          const double ratio = static_cast<double>(a + ulen - b) / static_cast<double>(ulen);
          if (ratio > audit.maxRatio) {
            audit.maxRatio = ratio;
            audit.worstU = catalog[u];
            audit.worstV = catalog[v];
            audit.worstPosition = a;
          }
        }
      }
    }
  }
  return audit;
}

}  // namespace morphic
