#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "morphic/attractor.hpp"
#include "morphic/language.hpp"

namespace morphic {

/// A function of the first depth() letters, read from a table with a
/// fallback for missing cylinders.
class CylinderFunction {
 public:
  CylinderFunction() = default;
  CylinderFunction(std::size_t depth, std::unordered_map<Word, double> table, double fallback);
  static CylinderFunction constant(double v) { return CylinderFunction(0, {}, v); }
  /// 1 on the cylinder [w], 0 elsewhere.
  static CylinderFunction indicator(const Word& w);

  std::size_t depth() const noexcept { return depth_; }
  double fallback() const noexcept { return fallback_; }
  const std::unordered_map<Word, double>& table() const noexcept { return table_; }
  double operator()(WordView x) const;
  double min_value() const;
  double max_value() const;

 private:
  std::size_t depth_ = 0;
  std::unordered_map<Word, double> table_;
  double fallback_ = 0;
};

/// V(x) = (g(x) + h(x)) / δ(x)^α, or (g + h) · log(1 + 1/δ(x)) in log form.
/// h must vanish on cylinders of words of the language.
struct Potential {
  double alpha = 1.0;
  CylinderFunction g = CylinderFunction::constant(1.0);
  CylinderFunction h = CylinderFunction::constant(0.0);
  bool logForm = false;
};

/// Throws if g is not positive or h is nonzero on a cylinder of L.
void validate_potential(const Potential& v, const LanguageIndex& index);

double potential_value(const Potential& v, WordView y, std::size_t delta);

/// V(x). Zero on a fixed point of H, which lies in the attractor; a tail
/// whose coincidence saturates the index otherwise throws Saturation.
double evaluate_potential(const Potential& v, const LanguageIndex& index, const Tail& x);

/// (R^m V)(x) = Σ_{i < t_m(x)} V(σ^i H^m x), computed directly from δ.
double renormalize(const Potential& v, const LanguageIndex& index, const Tail& x, std::size_t m);

struct LimitU {
  std::size_t k = 0;
  /// j_0 = 0, accident times of H^k(x) below t_k(x), then t_k(x).
  std::vector<std::size_t> times;
  /// δ at each j_i, i <= s.
  std::vector<std::size_t> depths;
  /// Σ log(Δ_i / (Δ_i - (j_{i+1} - j_i))) with lengths weighted by the
  /// Perron length vector.
  double value = 0;
  /// Same sum with plain word lengths; equal to value for constant-length H.
  double plainLengthValue = 0;
};

/// Closed-form limit of R^m V for α = 1, g ≡ 1.
LimitU limit_U(const LanguageIndex& index, const Tail& x, std::size_t lH, std::optional<std::size_t> k = {});

/// Thue–Morse limit for δ(x) = p; 2·log(4/3) for p = 2.
double thue_morse_U(std::size_t p);

struct BirkhoffAverage {
  double value = 0;
  /// |average over n - average over n/2|.
  double spread = 0;
};

/// Birkhoff average of g along the reference word of the attractor.
BirkhoffAverage mu_K_average(const LanguageIndex& index, const CylinderFunction& g, std::size_t n);

/// Values on [0, 1] from equally spaced samples, linearly interpolated.
class SampledFunction {
 public:
  explicit SampledFunction(std::vector<double> samples);
  static SampledFunction from(const std::function<double(double)>& f, std::size_t samples);
  double operator()(double t) const;
  const std::vector<double>& samples() const noexcept { return samples_; }

 private:
  std::vector<double> samples_;
};

/// (1/n) Σ_{k=0}^{n} f(k/n) g(σ^k ω), ω the reference word.
double weighted_birkhoff(const SampledFunction& f, const CylinderFunction& g, const LanguageIndex& index,
                         std::size_t n);

enum class LimitClass { to_zero, diverges, converges, inconclusive };

const char* to_string(LimitClass c);

struct ClassifyOptions {
  double zeroTolerance = 1e-6;
  double divergenceThreshold = 1e3;
  double cauchyTolerance = 1e-4;
  std::size_t window = 3;
  /// When nonzero and α = 1, the closed form is computed with this l(H).
  std::size_t lH = 0;
  std::size_t mMin = 0;
};

struct RenormResult {
  /// values[i] = R^{mMin + i} V(x).
  std::size_t mMin = 0;
  std::vector<double> values;
  LimitClass classification = LimitClass::inconclusive;
  std::optional<double> limitEstimate;
  std::optional<double> closedForm;
  /// Ratios values[i] / values[i-1] over the last window steps.
  std::vector<double> growthRatios;
  /// Classification of values[0..i] alone, for each i.
  std::vector<LimitClass> runningClass;
};

/// Classification rules applied to a value sequence.
LimitClass classify_values(const std::vector<double>& values, double alpha, double lambda,
                           const ClassifyOptions& options);

RenormResult classify_limit(const Potential& v, const LanguageIndex& index, const Tail& x, std::size_t mMax,
                            ClassifyOptions options = {});

}  // namespace morphic
