#include "morphic/renormalization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace morphic {

namespace {

/// Neumaier compensated sum.
class Accumulator {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0;
  double comp_ = 0;
};

}  // namespace

CylinderFunction::CylinderFunction(std::size_t depth, std::unordered_map<Word, double> table, double fallback)
    : depth_(depth), table_(std::move(table)), fallback_(fallback) {
  for (const auto& [w, v] : table_) {
    if (w.size() != depth_) throw Error("cylinder table entry of the wrong length");
    if (!std::isfinite(v)) throw Error("cylinder table entry is not finite");
  }
}

CylinderFunction CylinderFunction::indicator(const Word& w) { return CylinderFunction(w.size(), {{w, 1.0}}, 0.0); }

double CylinderFunction::operator()(WordView x) const {
  if (depth_ == 0 || table_.empty()) return fallback_;
  if (x.size() < depth_) throw Error("cylinder function evaluated on a word shorter than its depth");
  const auto it = table_.find(Word(x.substr(0, depth_)));
  return it == table_.end() ? fallback_ : it->second;
}

double CylinderFunction::min_value() const {
  double m = fallback_;
  for (const auto& [w, v] : table_) m = std::min(m, v);
  return m;
}

double CylinderFunction::max_value() const {
  double m = fallback_;
  for (const auto& [w, v] : table_) m = std::max(m, v);
  return m;
}

void validate_potential(const Potential& v, const LanguageIndex& index) {
  if (!std::isfinite(v.alpha) || v.alpha <= 0) throw Error("potential exponent must be positive");
  const std::size_t depth = std::max(v.g.depth(), v.h.depth());
  if (depth > index.max_len()) throw Error("potential depth beyond the index maxLen");
  for (const auto& w : index.factors(depth)) {
    if (v.g(w) <= 0) throw Error("g must be positive on the attractor");
    if (v.h(w) != 0) throw Error("h must vanish on cylinders of words of the language");
  }
}

double potential_value(const Potential& v, WordView y, std::size_t delta) {
  const double weight = v.g(y) + v.h(y);
  const auto d = static_cast<double>(delta);
  if (v.logForm) return weight * std::log1p(1.0 / d);
  return weight / std::pow(d, v.alpha);
}

double evaluate_potential(const Potential& v, const LanguageIndex& index, const Tail& x) {
  const Substitution& h = index.substitution();
  if (x.kind() == Tail::Kind::fixed_point && x.prefix().empty()) return 0.0;
  const auto win = orbit_window(index, x, 1);
  const std::size_t depth = std::max(v.g.depth(), v.h.depth());
  const Word y = win.word.size() >= depth ? win.word : x.materialize(h, depth);
  return potential_value(v, y, win.delta[0]);
}

double renormalize(const Potential& v, const LanguageIndex& index, const Tail& x, std::size_t m) {
  const Substitution& h = index.substitution();
  const std::size_t tm = first_block_length(h, x, m);
  auto win = image_window(index, x, m, tm);
  const std::size_t depth = std::max(v.g.depth(), v.h.depth());
  if (win.word.size() < tm + depth) win.word = x.image(h, m).materialize(h, tm + depth);
  Accumulator acc;
  const WordView word = win.word;
  for (std::size_t i = 0; i < tm; ++i) acc.add(potential_value(v, word.substr(i), win.delta[i]));
  return acc.value();
}

LimitU limit_U(const LanguageIndex& index, const Tail& x, std::size_t lH, std::optional<std::size_t> k) {
  const Substitution& h = index.substitution();
  LimitU out;
  out.k = k ? *k : select_scale(index, x, lH);
  const std::size_t tk = first_block_length(h, x, out.k);
  const auto win = orbit_window(index, x.image(h, out.k), tk);
  const auto prof = accidents_from_deltas(win.word, win.delta);
  out.times.push_back(0);
  out.times.insert(out.times.end(), prof.times.begin(), prof.times.end());
  out.depths = prof.depths;
  out.times.push_back(tk);

  const auto& ell = index.length_vector();
  std::vector<double> prefixWeight(win.word.size() + 1, 0.0);
  for (std::size_t i = 0; i < win.word.size(); ++i) {
    prefixWeight[i + 1] = prefixWeight[i] + ell[static_cast<Letter>(win.word[i])];
  }
  auto weight = [&](std::size_t from, std::size_t to) { return prefixWeight[to] - prefixWeight[from]; };
  for (std::size_t i = 0; i + 1 < out.times.size(); ++i) {
    const std::size_t j = out.times[i];
    const std::size_t seg = out.times[i + 1] - j;
    const std::size_t depth = out.depths[i];
    if (seg >= depth) throw Error("limit_U: a segment reaches the end of its coincidence");
    const double wd = weight(j, j + depth);
    out.value += std::log(wd / (wd - weight(j, j + seg)));
    const auto dd = static_cast<double>(depth);
    out.plainLengthValue += std::log(dd / (dd - static_cast<double>(seg)));
  }
  return out;
}

double thue_morse_U(std::size_t p) {
  if (p < 2) throw Error("thue_morse_U: δ(x) must be at least 2");
  if (p == 2) return 2.0 * std::log(4.0 / 3.0);
  const auto q = static_cast<double>(p);
  return std::log(q / (q - 1.0));
}

BirkhoffAverage mu_K_average(const LanguageIndex& index, const CylinderFunction& g, std::size_t n) {
  if (n < 2) throw Error("mu_K_average: n must be at least 2");
  const Word ref = index.reference_prefix(n + g.depth());
  const WordView w = ref;
  Accumulator full, half;
  for (std::size_t k = 0; k < n; ++k) {
    const double v = g(w.substr(k));
    full.add(v);
    if (k < n / 2) half.add(v);
  }
  BirkhoffAverage avg;
  avg.value = full.value() / static_cast<double>(n);
  avg.spread = std::abs(avg.value - half.value() / static_cast<double>(n / 2));
  return avg;
}

SampledFunction::SampledFunction(std::vector<double> samples) : samples_(std::move(samples)) {
  if (samples_.size() < 2) throw Error("sampled function needs at least two samples");
  for (double s : samples_) {
    if (!std::isfinite(s)) throw Error("sampled function value is not finite");
  }
}

SampledFunction SampledFunction::from(const std::function<double(double)>& f, std::size_t samples) {
  std::vector<double> v(samples);
  for (std::size_t i = 0; i < samples; ++i) v[i] = f(static_cast<double>(i) / static_cast<double>(samples - 1));
  return SampledFunction(std::move(v));
}

double SampledFunction::operator()(double t) const {
  if (t < 0 || t > 1) throw Error("sampled function evaluated outside [0, 1]");
  const double pos = t * static_cast<double>(samples_.size() - 1);
  const auto i = std::min(static_cast<std::size_t>(pos), samples_.size() - 2);
  const double frac = pos - static_cast<double>(i);
  return samples_[i] * (1 - frac) + samples_[i + 1] * frac;
}

double weighted_birkhoff(const SampledFunction& f, const CylinderFunction& g, const LanguageIndex& index,
                         std::size_t n) {
  if (n == 0) throw Error("weighted_birkhoff: n must be positive");
  const Word ref = index.reference_prefix(n + 1 + g.depth());
  const WordView w = ref;
  Accumulator acc;
  for (std::size_t k = 0; k <= n; ++k) {
    acc.add(f(static_cast<double>(k) / static_cast<double>(n)) * g(w.substr(k)));
  }
  return acc.value() / static_cast<double>(n);
}

const char* to_string(LimitClass c) {
  switch (c) {
    case LimitClass::to_zero:
      return "to-zero";
    case LimitClass::diverges:
      return "diverges";
    case LimitClass::converges:
      return "converges";
    case LimitClass::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

LimitClass classify_values(const std::vector<double>& values, double alpha, double lambda,
                           const ClassifyOptions& options) {
  const std::size_t w = options.window;
  if (values.size() < w + 1) return LimitClass::inconclusive;
  const std::size_t last = values.size() - 1;
  bool decreasing = true;
  bool growing = true;
  const double minGrowth = std::pow(lambda, (1.0 - alpha) / 2.0);
  for (std::size_t i = last + 1 - w; i <= last; ++i) {
    decreasing = decreasing && values[i] < values[i - 1];
    growing = growing && values[i] / values[i - 1] >= minGrowth;
  }
  if (values[last] < options.zeroTolerance && decreasing) return LimitClass::to_zero;
  if (values[last] > options.divergenceThreshold && growing && alpha < 1.0) return LimitClass::diverges;
  if (std::abs(alpha - 1.0) < 1e-12) {
    const auto [lo, hi] = std::minmax_element(values.end() - static_cast<long>(w), values.end());
    if (*hi - *lo < options.cauchyTolerance) return LimitClass::converges;
  }
  return LimitClass::inconclusive;
}

RenormResult classify_limit(const Potential& v, const LanguageIndex& index, const Tail& x, std::size_t mMax,
                            ClassifyOptions options) {
  validate_potential(v, index);
  if (options.window < 1) throw Error("classify_limit: window must be positive");
  if (mMax < options.mMin + options.window) throw Error("classify_limit: mMax too small for the window");
  RenormResult r;
  r.mMin = options.mMin;
  for (std::size_t m = options.mMin; m <= mMax; ++m) r.values.push_back(renormalize(v, index, x, m));
  const std::size_t last = r.values.size() - 1;
  const std::size_t w = options.window;
  for (std::size_t i = last + 1 - w; i <= last; ++i) r.growthRatios.push_back(r.values[i] / r.values[i - 1]);
  // The log form is the α = 1 case for the classification rules.
  const double alpha = v.logForm ? 1.0 : v.alpha;
  const double lambda = index.perron();
  for (std::size_t i = 0; i <= last; ++i) {
    const std::vector<double> head(r.values.begin(), r.values.begin() + static_cast<long>(i) + 1);
    r.runningClass.push_back(classify_values(head, alpha, lambda, options));
  }
  r.classification = r.runningClass.back();
  if (r.classification == LimitClass::to_zero) r.limitEstimate = 0.0;
  if (r.classification == LimitClass::converges) r.limitEstimate = r.values[last];

  if (std::abs(alpha - 1.0) < 1e-12 && !v.logForm && options.lH > 0) {
    const double gMean = mu_K_average(index, v.g, 1 << 16).value;
    r.closedForm = gMean * limit_U(index, x, options.lH).value;
  }
  return r;
}

}  // namespace morphic
