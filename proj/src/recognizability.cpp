#include "morphic/recognizability.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace morphic {

const char* to_string(DesubVerdict v) {
  switch (v) {
    case DesubVerdict::unique:
      return "unique";
    case DesubVerdict::multiple:
      return "multiple";
    case DesubVerdict::none:
      return "none";
  }
  return "none";
}

const char* to_string(AlignmentOutcome o) {
  switch (o) {
    case AlignmentOutcome::forces_equality:
      return "forces-equality";
    case AlignmentOutcome::forces_periodicity:
      return "forces-periodicity";
    case AlignmentOutcome::undecided:
      return "undecided";
    case AlignmentOutcome::contradiction:
      return "contradiction";
  }
  return "undecided";
}

namespace {

struct DesubSearch {
  const LanguageIndex& index;
  const Substitution& h;
  WordView z;
  std::set<std::tuple<std::size_t, Word, std::size_t>> seen;
  std::vector<Decomposition> found;

  bool in_language(const Word& w) const {
    if (w.size() > index.certified_depth()) {
      throw Saturation("desubstitution core longer than the certified depth", SaturationKind::index_depth,
                       index.certified_depth());
    }
    return index.contains(w);
  }

  void record(std::size_t headLen, std::optional<Letter> headLetter, const Word& core, std::size_t pos,
              std::optional<Letter> tailLetter) {
    const auto key = std::make_tuple(headLen, core, z.size() - pos);
    if (seen.count(key)) return;
    seen.insert(key);
    found.push_back({Word(z.substr(0, headLen)), core, Word(z.substr(pos)), headLetter, tailLetter});
  }

  void finish(std::size_t headLen, std::optional<Letter> headLetter, const Word& core, std::size_t pos) {
    const WordView tail = z.substr(pos);
    Word base;
    if (headLetter) base += static_cast<char>(*headLetter);
    base += core;
    if (tail.empty()) {
      if (in_language(base)) record(headLen, headLetter, core, pos, std::nullopt);
      return;
    }
    for (std::size_t c = 0; c < h.size(); ++c) {
      const Word& img = h.image(static_cast<Letter>(c));
      if (img.size() <= tail.size() || img.compare(0, tail.size(), tail) != 0) continue;
      if (in_language(base + static_cast<char>(c))) {
        record(headLen, headLetter, core, pos, static_cast<Letter>(c));
        return;
      }
    }
  }

  void extend(std::size_t headLen, std::optional<Letter> headLetter, Word& core, std::size_t pos) {
    finish(headLen, headLetter, core, pos);
    for (std::size_t c = 0; c < h.size(); ++c) {
      const Word& img = h.image(static_cast<Letter>(c));
      if (pos + img.size() > z.size() || z.compare(pos, img.size(), img) != 0) continue;
      core.push_back(static_cast<char>(c));
      Word prefix;
      if (headLetter) prefix += static_cast<char>(*headLetter);
      prefix += core;
      if (in_language(prefix)) extend(headLen, headLetter, core, pos + img.size());
      core.pop_back();
    }
  }
};

}  // namespace

DesubReport desubstitute(const LanguageIndex& index, WordView z) {
  if (z.empty()) throw Error("desubstitute: empty word");
  if (!index.contains(z)) throw Error("desubstitute: word not in the language");
  const Substitution& h = index.substitution();
  DesubSearch search{index, h, z, {}, {}};
  const std::size_t maxHead = std::min(z.size(), h.max_image_length() - 1);
  for (std::size_t t = 0; t <= maxHead; ++t) {
    Word core;
    if (t == 0) {
      search.extend(0, std::nullopt, core, 0);
      continue;
    }
    const WordView head = z.substr(0, t);
    for (std::size_t c = 0; c < h.size(); ++c) {
      const Word& img = h.image(static_cast<Letter>(c));
      if (img.size() <= t || img.compare(img.size() - t, t, head) != 0) continue;
      search.extend(t, static_cast<Letter>(c), core, t);
    }
  }
  DesubReport report;
  report.word = Word(z);
  report.decompositions = std::move(search.found);
  std::sort(report.decompositions.begin(), report.decompositions.end(),
            [](const Decomposition& a, const Decomposition& b) {
              return std::make_tuple(a.head.size(), a.core) < std::make_tuple(b.head.size(), b.core);
            });
  report.verdict = report.decompositions.empty()       ? DesubVerdict::none
                   : report.decompositions.size() == 1 ? DesubVerdict::unique
                                                       : DesubVerdict::multiple;
  return report;
}

RecognizabilityScan recognizability_length(const LanguageIndex& index, std::size_t scanLen) {
  if (scanLen > index.max_len()) throw Error("recognizability scan beyond index maxLen");
  RecognizabilityScan scan;
  scan.scanLen = scanLen;
  for (std::size_t n = 1; n <= scanLen; ++n) {
    std::vector<Word> ambiguous;
    for (const auto& z : index.factors(n)) {
      const auto r = desubstitute(index, z);
      if (r.verdict == DesubVerdict::none) throw Error("factor without a decomposition: language index inconsistent");
      if (r.verdict == DesubVerdict::multiple) ambiguous.push_back(z);
    }
    if (!ambiguous.empty()) {
      scan.length = n;
      scan.ambiguousAtLength = std::move(ambiguous);
    }
  }
  if (scan.length == scanLen) {
    throw Inconclusive("decompositions still ambiguous at the scan length " + std::to_string(scanLen));
  }
  return scan;
}

std::size_t theoretical_recognizability_bound(const Substitution& h, std::size_t powerBound) {
  const std::size_t d = h.size();
  const std::size_t base = d * d * h.max_image_length();
  const std::size_t offset = h.max_image_length() * d * d;
  std::size_t power = 1;
  while (power + offset <= powerBound) power *= base;
  return power + offset;
}

namespace {

struct MisalignmentSearch {
  const LanguageIndex& index;
  const Substitution& h;
  std::size_t best = 0;

  std::optional<char> letter_starting(char first) const {
    for (std::size_t c = 0; c < h.size(); ++c) {
      if (h.image(static_cast<Letter>(c)).front() == first) return static_cast<char>(c);
    }
    return std::nullopt;
  }

  // v: the aligned preimage so far; img = H(v); u: forced content of the
  // misaligned blocks in the coordinates of img.
  void extend(Word& v, Word& img, Word& u) {
    if (v.size() >= index.max_len()) {
      throw Inconclusive("misaligned coincidence search reached the index maxLen " +
                         std::to_string(index.max_len()));
    }
    for (std::size_t b = 0; b < h.size(); ++b) {
      v.push_back(static_cast<char>(b));
      if (index.contains(v)) {
        const Word& block = h.image(static_cast<Letter>(b));
        const std::size_t start = img.size();
        const std::size_t end = start + block.size();
        const std::size_t uSize = u.size();
        bool ok = true;
        while (ok && u.size() < end) {
          if (u.size() == start) {
            ok = false;
            break;
          }
          const auto c = letter_starting(block[u.size() - start]);
          if (!c) {
            ok = false;
            break;
          }
          u += h.image(static_cast<Letter>(*c));
        }
        ok = ok && u.size() != end && u.compare(start, block.size(), block) == 0;
        if (ok) {
          img += block;
          best = std::max(best, img.size());
          extend(v, img, u);
          img.resize(start);
        }
        u.resize(uSize);
      }
      v.pop_back();
    }
  }
};

}  // namespace

std::size_t misaligned_coincidence_bound(const LanguageIndex& index) {
  const Substitution& h = index.substitution();
  MisalignmentSearch search{index, h, 0};
  for (std::size_t a = 0; a < h.size(); ++a) {
    const Word& first = h.image(static_cast<Letter>(a));
    for (std::size_t t = 1; t < first.size(); ++t) {
      Word v, img;
      Word u = first.substr(t);
      search.extend(v, img, u);
    }
  }
  return search.best;
}

AlignmentResult shifted_decomposition_search(const Substitution& h, WordView x, WordView y, std::size_t shift,
                                             std::size_t maxSteps) {
  if (!is_marked(h)) throw Error("shifted_decomposition_search: substitution is not marked");
  if (x.empty() || y.empty()) throw Error("shifted_decomposition_search: empty prefix");
  AlignmentResult r;
  r.forcedX.push_back(x[0]);
  r.forcedY.push_back(y[0]);
  // Block starts in the coordinates of H(x); the current y block starts at qy.
  long px = 0;
  long qy = -static_cast<long>(shift);
  auto imgLen = [&](char c) { return static_cast<long>(h.image(static_cast<Letter>(c)).size()); };
  // Blocks of H(y) entirely before position 0 are not constrained by x.
  while (qy + imgLen(r.forcedY.back()) <= 0) {
    const std::size_t j = r.forcedY.size();
    if (j >= y.size()) {
      r.outcome = AlignmentOutcome::undecided;
      return r;
    }
    qy += imgLen(r.forcedY.back());
    r.forcedY.push_back(y[j]);
  }
  auto letterStarting = [&](char first) -> std::optional<char> {
    for (std::size_t c = 0; c < h.size(); ++c) {
      if (h.image(static_cast<Letter>(c)).front() == first) return static_cast<char>(c);
    }
    return std::nullopt;
  };
  auto check = [&](const Word& forced, WordView given, const char* side) {
    const std::size_t i = forced.size() - 1;
    if (i < given.size() && given[i] != forced[i]) {
      throw Error(std::string("shifted_decomposition_search: given ") + side + " prefix contradicts the letter forced at index " +
                  std::to_string(i));
    }
  };
  auto agree = [&](long startA, const Word& imgA, long startB, const Word& imgB) {
    const long lo = std::max(startA, startB);
    const long hi = std::min(startA + static_cast<long>(imgA.size()), startB + static_cast<long>(imgB.size()));
    for (long p = lo; p < hi; ++p) {
      if (imgA[static_cast<std::size_t>(p - startA)] != imgB[static_cast<std::size_t>(p - startB)]) return false;
    }
    return true;
  };
  std::set<std::tuple<char, char, long>> states;
  for (std::size_t step = 0; step < maxSteps; ++step) {
    const char a = r.forcedX.back();
    const char b = r.forcedY.back();
    const Word& ia = h.image(static_cast<Letter>(a));
    const Word& ib = h.image(static_cast<Letter>(b));
    if (!agree(px, ia, qy, ib)) {
      r.outcome = AlignmentOutcome::contradiction;
      r.steps = step;
      return r;
    }
    if (px == qy) {
      r.outcome = AlignmentOutcome::forces_equality;
      r.steps = step;
      return r;
    }
    if (!states.insert({a, b, qy - px}).second) {
      r.outcome = AlignmentOutcome::forces_periodicity;
      r.steps = step;
      return r;
    }
    const long endX = px + static_cast<long>(ia.size());
    const long endY = qy + static_cast<long>(ib.size());
    if (endX <= endY) {
      // Next x block starts inside the current y block (or at its end).
      if (endX == endY) {
        r.outcome = AlignmentOutcome::forces_equality;
        r.steps = step + 1;
        return r;
      }
      const auto c = letterStarting(ib[static_cast<std::size_t>(endX - qy)]);
      if (!c) {
        r.outcome = AlignmentOutcome::contradiction;
        r.steps = step;
        return r;
      }
      r.forcedX.push_back(*c);
      check(r.forcedX, x, "x");
      px = endX;
    } else {
      const auto c = letterStarting(ia[static_cast<std::size_t>(endY - px)]);
      if (!c) {
        r.outcome = AlignmentOutcome::contradiction;
        r.steps = step;
        return r;
      }
      r.forcedY.push_back(*c);
      check(r.forcedY, y, "y");
      qy = endY;
    }
  }
  r.outcome = AlignmentOutcome::undecided;
  r.steps = maxSteps;
  return r;
}

}  // namespace morphic
