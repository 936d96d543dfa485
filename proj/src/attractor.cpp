#include "morphic/attractor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "morphic/recognizability.hpp"

namespace morphic {

Tail Tail::periodic(Word prefix, Word block) {
  if (block.empty()) throw Error("periodic tail needs a nonempty block");
  Tail t;
  t.kind_ = Kind::periodic;
  t.prefix_ = std::move(prefix);
  t.block_ = std::move(block);
  return t;
}

Tail Tail::fixed_point(Word prefix, Letter letter) {
  Tail t;
  t.kind_ = Kind::fixed_point;
  t.prefix_ = std::move(prefix);
  t.letter_ = letter;
  return t;
}

Letter Tail::first_letter() const {
  if (!prefix_.empty()) return static_cast<Letter>(prefix_.front());
  if (kind_ == Kind::periodic) return static_cast<Letter>(block_.front());
  return letter_;
}

Word Tail::materialize(const Substitution& h, std::size_t len) const {
  if (len > kDefaultLengthCap) throw BudgetExceeded("tail materialization beyond the length cap");
  Word w = prefix_.substr(0, std::min(prefix_.size(), len));
  if (w.size() == len) return w;
  if (kind_ == Kind::periodic) {
    w.reserve(len);
    while (w.size() + block_.size() <= len) w += block_;
    w.append(block_, 0, len - w.size());
  } else {
    w += fixed_point_prefix(h, letter_, len - w.size());
  }
  return w;
}

Tail Tail::image(const Substitution& h, std::size_t n, std::size_t cap) const {
  auto expand = [&](const Word& w) {
    if (h.image_length(w, n) > cap) throw BudgetExceeded("tail image beyond the length cap");
    return h.apply(w, n, cap).word;
  };
  Tail t = *this;
  t.prefix_ = expand(prefix_);
  if (kind_ == Kind::periodic) t.block_ = expand(block_);
  return t;
}

OrbitWindow orbit_window(const LanguageIndex& index, const Tail& x, std::size_t count, std::size_t cap) {
  std::size_t len = 2 * count + 64;
  for (;;) {
    len = std::min(len, cap);
    OrbitWindow w;
    w.word = x.materialize(index.substitution(), len);
    const auto qs = index.delta_all(w.word, count);
    bool grow = false;
    for (std::size_t j = 0; j < qs.size(); ++j) {
      if (qs[j].saturation == SaturationKind::index_depth) {
        throw Saturation("δ reached the certified depth " + std::to_string(index.certified_depth()) +
                             " at position " + std::to_string(j),
                         SaturationKind::index_depth, j);
      }
      if (qs[j].saturation == SaturationKind::end_of_input) {
        grow = true;
        break;
      }
    }
    if (!grow) {
      w.delta.resize(qs.size());
      for (std::size_t j = 0; j < qs.size(); ++j) w.delta[j] = qs[j].length;
      return w;
    }
    if (len == cap) {
      throw Saturation("δ still touches the end of a window of the full length cap; the word may lie in the attractor",
                       SaturationKind::end_of_input, 0);
    }
    len *= 2;
  }
}

namespace {

struct Lifter {
  const LanguageIndex& index;
  const Substitution& h;
  const Tail& x;
  std::size_t threshold = 0;

  OrbitWindow direct(std::size_t r, std::size_t count) const { return orbit_window(index, x.image(h, r), count); }

  OrbitWindow window(std::size_t r, std::size_t count) {
    if (r == 0) return direct(0, count);
    try {
      return direct(r, count);
    } catch (const Saturation& e) {
      if (e.kind() != SaturationKind::index_depth) throw;
    }
    if (threshold == 0) {
      if (!is_marked(h)) throw Saturation("δ beyond the certified depth and H is not marked", SaturationKind::index_depth, 0);
      threshold = misaligned_coincidence_bound(index) + 2 * h.max_image_length() - 1;
      if (threshold >= index.certified_depth()) {
        throw Saturation("lifting threshold " + std::to_string(threshold) + " beyond the certified depth",
                         SaturationKind::index_depth, 0);
      }
    }
    return lift(r, count);
  }

  OrbitWindow lift(std::size_t r, std::size_t count) {
    // Blocks of z = H^{r-1} x covering positions below count.
    Word z = x.image(h, r - 1).materialize(h, count);
    std::size_t blocks = 0;
    for (std::size_t len = 0; len < count; ++blocks) len += h.image(static_cast<Letter>(z[blocks])).size();
    const OrbitWindow lower = window(r - 1, blocks);

    std::size_t need = lower.word.size();
    for (std::size_t j = 0; j < blocks; ++j) need = std::max(need, j + lower.delta[j] + 1);
    std::vector<std::size_t> start;
    for (;;) {
      if (z.size() < need) z = x.image(h, r - 1).materialize(h, need);
      start.assign(1, 0);
      for (std::size_t j = 0; j < need; ++j) start.push_back(start.back() + h.image(static_cast<Letter>(z[j])).size());
      if (start.back() >= count + threshold) break;
      need *= 2;
    }
    OrbitWindow out;
    out.word = h.apply(WordView(z).substr(0, need));
    const auto qs = index.delta_all(out.word, count);
    out.delta.resize(count);
    std::size_t j = 0;
    for (std::size_t i = 0; i < count; ++i) {
      while (start[j + 1] <= i) ++j;
      const std::size_t lifted = start[j + lower.delta[j]] - i;
      const bool isShort = !qs[i].saturated() && qs[i].length < threshold;
      if (isShort ? qs[i].length < lifted : lifted < threshold) {
        throw Error("lifted δ disagrees with the index at position " + std::to_string(i));
      }
      out.delta[i] = isShort ? qs[i].length : lifted;
    }
    return out;
  }
};

}  // namespace

OrbitWindow image_window(const LanguageIndex& index, const Tail& x, std::size_t n, std::size_t count) {
  Lifter lifter{index, index.substitution(), x};
  return lifter.window(n, count);
}

AccidentProfile accidents_from_deltas(WordView word, const std::vector<std::size_t>& deltas) {
  AccidentProfile p;
  if (deltas.empty()) return p;
  p.delta0 = deltas[0];
  p.depths.push_back(deltas[0]);
  std::size_t start = 0;
  std::size_t depth = deltas[0];
  for (std::size_t k = 1; k < deltas.size(); ++k) {
    const std::size_t elapsed = k - start;
    if (elapsed < depth && deltas[k] == depth - elapsed) continue;
    // δ can only stay on the staircase or jump above it.
    const std::size_t alive = start + depth - k;
    p.times.push_back(k);
    p.gaps.push_back(k - start);
    p.Deltas.push_back(alive);
    p.witnesses.emplace_back(word.substr(k, alive));
    const std::size_t i = p.times.size();
    bool overlap = false;
    if (i >= 2) {
      const std::size_t prevPrevStart = i >= 3 ? p.times[i - 3] : 0;
      overlap = k < prevPrevStart + p.depths[i - 2];
    }
    p.overlapsPrevious.push_back(overlap);
    p.depths.push_back(deltas[k]);
    start = k;
    depth = deltas[k];
  }
  return p;
}

AccidentProfile accidents(const LanguageIndex& index, const Tail& x, std::size_t horizon) {
  const auto w = orbit_window(index, x, horizon + 1);
  return accidents_from_deltas(w.word, w.delta);
}

AccidentProfile restrict_times(const AccidentProfile& p, std::size_t limit) {
  AccidentProfile r;
  r.delta0 = p.delta0;
  r.depths.push_back(p.delta0);
  for (std::size_t i = 0; i < p.times.size() && p.times[i] < limit; ++i) {
    r.times.push_back(p.times[i]);
    r.gaps.push_back(p.gaps[i]);
    r.depths.push_back(p.depths[i + 1]);
    r.witnesses.push_back(p.witnesses[i]);
    r.Deltas.push_back(p.Deltas[i]);
    r.overlapsPrevious.push_back(p.overlapsPrevious[i]);
  }
  return r;
}

std::size_t first_block_length(const Substitution& h, const Tail& x, std::size_t n) {
  const auto len = h.image_length(Word(1, static_cast<char>(x.first_letter())), n);
  if (len > kDefaultLengthCap) throw BudgetExceeded("t_n(x) beyond the length cap");
  return static_cast<std::size_t>(len);
}

std::size_t select_scale(const LanguageIndex& index, const Tail& x, std::size_t lH) {
  const auto w = orbit_window(index, x, 1);
  const std::size_t p = w.delta[0];
  if (p < 2) throw Error("δ(x) = 1: no scale k makes |H^k(x_2 … x_p)| reach l(H)");
  const Word inner = w.word.substr(1, p - 1);
  for (std::size_t k = 0; k < 64; ++k) {
    if (index.substitution().image_length(inner, k) >= lH) return k;
  }
  throw Error("select_scale: no k below 64");
}

std::vector<double> asymptotic_lengths(const Substitution& h, double lambda) {
  // Deepest r with every |H^r(a)| exact in a double; the error decays like
  // (θ/λ)^r with θ the second eigenvalue modulus.
  std::size_t r = 0;
  while (r < 200) {
    const auto next = h.image_lengths(r + 1);
    if (*std::max_element(next.begin(), next.end()) > (std::uint64_t{1} << 52)) break;
    ++r;
  }
  const auto lengths = h.image_lengths(r);
  std::vector<double> out;
  for (auto l : lengths) out.push_back(static_cast<double>(l) / std::pow(lambda, static_cast<double>(r)));
  return out;
}

RenormalizationCheck accident_renormalization_check(const LanguageIndex& index, const Tail& x, std::size_t lH,
                                                    std::size_t nMax, RenormalizationCheckOptions options) {
  const Substitution& h = index.substitution();
  if (options.enforceHypotheses) {
    if (!is_marked(h)) throw Error("accident renormalization needs a marked substitution");
    if (!index.is_two_full()) throw Error("accident renormalization needs a 2-full substitution");
  }
  RenormalizationCheck out;
  out.k = options.k ? *options.k : select_scale(index, x, lH);
  if (nMax < out.k) throw Error("nMax below the base scale k");
  const double lambda = index.perron();
  const auto ell = asymptotic_lengths(h, lambda);
  auto weighted = [&](WordView w) {
    double s = 0;
    for (char c : w) s += ell[static_cast<Letter>(c)];
    return s;
  };

  const std::size_t tk = first_block_length(h, x, out.k);
  const auto baseWin = image_window(index, x, out.k, tk);
  out.base = accidents_from_deltas(baseWin.word, baseWin.delta);
  const Word& e = baseWin.word;

  for (std::size_t n = out.k; n <= nMax; ++n) {
    const std::size_t r = n - out.k;
    const double scale = std::pow(lambda, static_cast<double>(r));
    ScaleRow row;
    row.n = n;
    const std::size_t tn = first_block_length(h, x, n);
    const auto win = image_window(index, x, n, tn);
    const auto prof = accidents_from_deltas(win.word, win.delta);
    row.times = prof.times;
    row.depths = prof.depths;
    row.Deltas = prof.Deltas;
    std::vector<std::size_t> starts{0};
    starts.insert(starts.end(), out.base.times.begin(), out.base.times.end());
    for (std::size_t i = 0; i < starts.size(); ++i) {
      if (i > 0) row.exactTimes.push_back(static_cast<std::size_t>(h.image_length(e.substr(0, starts[i]), r)));
      row.exactDepths.push_back(
          static_cast<std::size_t>(h.image_length(e.substr(starts[i], out.base.depths[i]), r)));
    }
    row.exactMatch = row.times == row.exactTimes && row.depths == row.exactDepths;
    if (!row.exactMatch) {
      out.violations.push_back("level " + std::to_string(n) + ": accidents differ from the pushed-forward level " +
                               std::to_string(out.k));
    }
    if (row.times.size() != out.base.times.size()) {
      row.timeResidual = row.depthResidual = row.DeltaResidual = std::numeric_limits<double>::infinity();
      row.plainTimeResidual = row.plainDepthResidual = row.plainDeltaResidual = row.timeResidual;
    } else {
      auto gap = [&](std::size_t observed, double predicted) {
        return std::abs(static_cast<double>(observed) - scale * predicted) / scale;
      };
      for (std::size_t i = 0; i < row.times.size(); ++i) {
        const Word pre = e.substr(0, out.base.times[i]);
        const Word alive = e.substr(out.base.times[i], out.base.Deltas[i]);
        row.timeResidual = std::max(row.timeResidual, gap(row.times[i], weighted(pre)));
        row.DeltaResidual = std::max(row.DeltaResidual, gap(row.Deltas[i], weighted(alive)));
        row.plainTimeResidual = std::max(row.plainTimeResidual, gap(row.times[i], double(pre.size())));
        row.plainDeltaResidual = std::max(row.plainDeltaResidual, gap(row.Deltas[i], double(alive.size())));
      }
      for (std::size_t i = 0; i < row.depths.size(); ++i) {
        const Word word = e.substr(starts[i], out.base.depths[i]);
        row.depthResidual = std::max(row.depthResidual, gap(row.depths[i], weighted(word)));
        row.plainDepthResidual = std::max(row.plainDepthResidual, gap(row.depths[i], double(word.size())));
      }
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace morphic
