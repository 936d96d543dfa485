#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "morphic/error.hpp"
#include "morphic/renormalization.hpp"
#include "oracles.hpp"

using namespace morphic;
using oracle::digits;

namespace {

const Tail ones = Tail::periodic("", oracle::w({1}));

/// Thue–Morse tail f·1^∞ with δ = p, f a factor ending in 11.
Tail tm_tail(const LanguageIndex& index, std::size_t p) {
  for (const auto& f : index.factors(p)) {
    if (f[p - 1] == 1 && f[p - 2] == 1) return Tail::periodic(f, digits("1"));
  }
  throw Error("no factor ending in 11");
}

/// Tails u·b^∞ where u ∈ L but u with its last letter leaves L.
std::vector<Tail> exits(const LanguageIndex& index, std::size_t n) {
  std::vector<Tail> out;
  const auto& h = index.substitution();
  for (const auto& f : index.factors(n)) {
    for (std::size_t a = 0; a < h.size(); ++a) {
      const Word u = f + static_cast<char>(a);
      if (!index.contains(u)) out.push_back(Tail::periodic(u, Word(1, static_cast<char>((a + 1) % h.size()))));
    }
  }
  return out;
}

/// σ^i of a periodic tail, i at most the prefix length.
Tail shift(const Tail& t, std::size_t i) {
  REQUIRE(i <= t.prefix().size());
  return Tail::periodic(t.prefix().substr(i), t.block());
}

double harmonic(std::size_t n) {
  double s = 0;
  for (std::size_t k = n; k >= 1; --k) s += 1.0 / static_cast<double>(k);
  return s;
}

Potential power(double alpha, CylinderFunction g = CylinderFunction::constant(1.0)) {
  Potential v;
  v.alpha = alpha;
  v.g = std::move(g);
  return v;
}

}  // namespace

TEST_CASE("cylinder functions") {
  const auto ind = CylinderFunction::indicator(digits("01"));
  CHECK(ind(digits("011")) == 1.0);
  CHECK(ind(digits("100")) == 0.0);
  CHECK_THROWS_AS(ind(digits("0")), Error);
  CHECK_THROWS_AS(CylinderFunction(2, {{digits("0"), 1.0}}, 0.0), Error);
  CHECK_THROWS_AS(CylinderFunction(1, {{digits("0"), NAN}}, 0.0), Error);
  const CylinderFunction g(1, {{digits("0"), 2.0}, {digits("1"), 3.0}}, 1.0);
  CHECK(g.min_value() == 1.0);
  CHECK(g.max_value() == 3.0);
  CHECK(CylinderFunction::constant(4.0)(Word()) == 4.0);
}

TEST_CASE("potential validation") {
  const auto index = LanguageIndex::build(oracle::thue_morse(), {8, 32});
  CHECK_NOTHROW(validate_potential(power(1.0), index));
  CHECK_THROWS_AS(validate_potential(power(0.0), index), Error);
  CHECK_THROWS_AS(validate_potential(power(-1.0), index), Error);
  CHECK_THROWS_AS(validate_potential(power(1.0, CylinderFunction(1, {{digits("0"), 0.0}}, 1.0)), index), Error);
  Potential v = power(1.0);
  v.h = CylinderFunction(3, {{digits("111"), 5.0}}, 0.0);
  CHECK_NOTHROW(validate_potential(v, index));
  v.h = CylinderFunction(3, {{digits("110"), 5.0}}, 0.0);
  CHECK_THROWS_AS(validate_potential(v, index), Error);
  CHECK_THROWS_AS(validate_potential(power(1.0, CylinderFunction(9, {}, 1.0)), index), Error);
}

TEST_CASE("potential evaluation") {
  const auto h = oracle::thue_morse();
  const auto index = LanguageIndex::build(h, {16, 64});
  CHECK(evaluate_potential(power(1.0), index, Tail::fixed_point("", 0)) == 0.0);
  CHECK(evaluate_potential(power(1.0), index, tm_tail(index, 4)) == doctest::Approx(0.25));
  Potential lf;
  lf.logForm = true;
  for (std::size_t n : {2, 3, 5, 9}) {
    CHECK(evaluate_potential(lf, index, tm_tail(index, n)) == doctest::Approx(std::log(1.0 + 1.0 / double(n))));
  }
  // A tail that agrees with the language further than the index can certify.
  CHECK_THROWS_AS(evaluate_potential(power(1.0), index, Tail::fixed_point(digits("0110100110010110"), 0)),
                  Saturation);
}

TEST_CASE("zero renormalizations give the potential itself") {
  const auto index = LanguageIndex::build(oracle::three_letter(), {16, 64});
  const Potential v = power(1.5, CylinderFunction(1, {{digits("0"), 2.0}}, 1.0));
  for (const auto& x : exits(index, 3)) {
    CHECK(renormalize(v, index, x, 0) == doctest::Approx(evaluate_potential(v, index, x)));
  }
}

TEST_CASE("renormalize matches brute-force Birkhoff sums") {
  std::mt19937 rng(5);
  for (const auto& h : {oracle::thue_morse(), oracle::three_letter(), oracle::abba_bab(), oracle::fibonacci()}) {
    const auto index = LanguageIndex::build(h, {16, 64});
    const auto sets = oracle::prefix_factors(oracle::fixed_prefix(h, 0, 1 << 15), 48);
    std::unordered_map<Word, double> table;
    for (std::size_t a = 0; a < h.size(); ++a) table[Word(1, static_cast<char>(a))] = 1.0 + double(rng() % 5);
    const CylinderFunction g(1, table, 1.0);
    for (double alpha : {0.5, 1.0, 2.0}) {
      const Potential v = power(alpha, g);
      for (const auto& x : exits(index, 2)) {
        for (std::size_t m = 0; m <= 3; ++m) {
          const std::size_t tm = h.image_length(x.materialize(h, 1), m);
          const Word y = oracle::iterate(h, x.materialize(h, 400), m);
          double want = 0;
          bool ok = true;
          for (std::size_t i = 0; i < tm && ok; ++i) {
            const auto d = oracle::delta(sets, y.substr(i));
            ok = d < 47;
            want += g(y.substr(i, 1)) / std::pow(double(d), alpha);
          }
          if (!ok) continue;
          CHECK(renormalize(v, index, x, m) == doctest::Approx(want).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("Thue-Morse iterates on 1^inf follow the closed sum") {
  const auto index = LanguageIndex::build(oracle::thue_morse(), {16, 64});
  const Potential v = power(1.0);
  for (std::size_t n = 1; n <= 14; ++n) {
    double want = 0;
    const double top = 2.0 * std::ldexp(1.0, int(n));
    for (std::size_t k = 0; k < (std::size_t{1} << (n - 1)); ++k) want += 1.0 / (top - double(k));
    CHECK(renormalize(v, index, ones, n) == doctest::Approx(2 * want).epsilon(1e-12));
  }
}

TEST_CASE("non-2-full counterexample gives harmonic numbers") {
  const auto h = oracle::abba_bab();
  const auto index = LanguageIndex::build(h, {16, 64});
  const Tail x = Tail::periodic("", oracle::w({0}));
  for (std::size_t m = 1; m <= 8; ++m) {
    const std::size_t len = h.image_length(oracle::w({0}), m);
    // δ_i = |H^m(a)| - i for every i in the block, so the sum is H_{|H^m(a)|}.
    CHECK(renormalize(power(1.0), index, x, m) == doctest::Approx(harmonic(len)).epsilon(1e-12));
  }
}

TEST_CASE("cocycle identity") {
  for (const auto& h : {oracle::thue_morse(), oracle::three_letter()}) {
    const auto index = LanguageIndex::build(h, {16, 64});
    const Potential v = power(1.0, CylinderFunction(1, {{digits("1"), 3.0}}, 1.0));
    for (const auto& x : exits(index, 3)) {
      for (std::size_t m = 0; m <= 4; ++m) {
        const Tail y = x.image(h, m);
        const std::size_t tm = first_block_length(h, x, m);
        double twice = 0;
        for (std::size_t i = 0; i < tm; ++i) twice += renormalize(v, index, shift(y, i), 1);
        CHECK(renormalize(v, index, x, m + 1) == doctest::Approx(twice).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("renormalization is additive and positively homogeneous") {
  const auto index = LanguageIndex::build(oracle::three_letter(), {16, 64});
  const CylinderFunction g1(1, {{digits("0"), 2.0}, {digits("1"), 0.5}}, 1.0);
  const CylinderFunction g2(1, {{digits("2"), 4.0}}, 0.25);
  std::unordered_map<Word, double> sum;
  for (Letter a = 0; a < 3; ++a) {
    const Word l(1, static_cast<char>(a));
    sum[l] = g1(l) + g2(l);
  }
  for (const auto& x : exits(index, 3)) {
    for (std::size_t m : {1, 3, 5}) {
      const double r1 = renormalize(power(1.3, g1), index, x, m);
      const double r2 = renormalize(power(1.3, g2), index, x, m);
      CHECK(renormalize(power(1.3, CylinderFunction(1, sum, 0.0)), index, x, m) ==
            doctest::Approx(r1 + r2).epsilon(1e-12));
      std::unordered_map<Word, double> scaled;
      for (const auto& [w, val] : g1.table()) scaled[w] = 2.5 * val;
      CHECK(renormalize(power(1.3, CylinderFunction(1, scaled, 2.5)), index, x, m) ==
            doctest::Approx(2.5 * r1).epsilon(1e-12));
    }
  }
}

TEST_CASE("Thue-Morse closed form") {
  CHECK(thue_morse_U(3) == doctest::Approx(0.4054651081).epsilon(1e-10));
  // The prefactor 1/2^{n-2} on a block of 2^{n-1} terms gives 2 ∫_0^1 dx/(4-x).
  CHECK(thue_morse_U(2) == doctest::Approx(2 * std::log(4.0 / 3.0)).epsilon(1e-12));
  CHECK_THROWS_AS(thue_morse_U(1), Error);
  CHECK_THROWS_AS(thue_morse_U(0), Error);
  for (std::size_t p = 3; p < 200; ++p) CHECK(thue_morse_U(p + 1) < thue_morse_U(p));
  CHECK(thue_morse_U(1000000) < 2e-6);
}

TEST_CASE("U extended by delta is fixed by R on Thue-Morse") {
  const auto h = oracle::thue_morse();
  const auto index = LanguageIndex::build(h, {16, 64});
  // δ(Hx) = 2p and δ(σHx) = 2p - 1 when δ(x) = p >= 3.
  auto U = [&](const Tail& t) { return thue_morse_U(orbit_window(index, t, 1).delta[0]); };
  for (std::size_t p = 3; p <= 12; ++p) {
    const Tail x = tm_tail(index, p);
    const Tail y = x.image(h, 1);
    CHECK(U(y) + U(shift(y, 1)) == doctest::Approx(U(x)).epsilon(1e-12));
  }
}

TEST_CASE("limit U from accident data") {
  const auto h = oracle::thue_morse();
  const auto index = LanguageIndex::build(h, {16, 64});
  for (std::size_t p = 2; p <= 8; ++p) {
    const Tail x = tm_tail(index, p);
    const auto u = limit_U(index, x, 3);
    CHECK(u.value == doctest::Approx(thue_morse_U(p)).epsilon(1e-12));
    CHECK(u.plainLengthValue == doctest::Approx(u.value).epsilon(1e-12));
    CHECK(u.times.front() == 0);
    CHECK(u.times.back() == first_block_length(h, x, u.k));
    CHECK(u.depths.size() + 1 == u.times.size());
    CHECK(std::abs(renormalize(power(1.0), index, x, 12) - u.value) < 1e-3);
  }
  const auto three = LanguageIndex::build(oracle::three_letter(), {16, 64});
  for (const auto& x : exits(three, 3)) {
    const auto u = limit_U(three, x, 3);
    CHECK(std::abs(renormalize(power(1.0), three, x, 12) - u.value) < 1e-3);
  }
}

TEST_CASE("Birkhoff averages along the attractor") {
  const auto h = oracle::thue_morse();
  const auto index = LanguageIndex::build(h, {16, 64});
  CHECK(mu_K_average(index, CylinderFunction::constant(1.0), 100).value == 1.0);
  CHECK(mu_K_average(index, CylinderFunction::indicator(digits("0")), 1 << 12).value == doctest::Approx(0.5));
  const std::size_t n = 1 << 16;
  const Word ref = index.reference_prefix(n + 1);
  std::size_t count = 0;
  for (std::size_t k = 0; k < n; ++k) count += ref[k] == 0 && ref[k + 1] == 1;
  CHECK(mu_K_average(index, CylinderFunction::indicator(digits("01")), n).value ==
        doctest::Approx(double(count) / double(n)).epsilon(1e-12));
  CHECK_THROWS_AS(mu_K_average(index, CylinderFunction::constant(1.0), 1), Error);

  // Letter frequencies of a non-constant-length substitution from the
  // normalized Perron vector, by power iteration on letter counts.
  const auto three = oracle::three_letter();
  const auto tindex = LanguageIndex::build(three, {16, 64});
  std::vector<double> freq{1, 0, 0};
  for (int it = 0; it < 200; ++it) {
    std::vector<double> next(3, 0);
    for (std::size_t b = 0; b < 3; ++b)
      for (char c : three.image(static_cast<Letter>(b))) next[static_cast<std::size_t>(c)] += freq[b];
    const double s = next[0] + next[1] + next[2];
    for (auto& f : next) f /= s;
    freq = next;
  }
  for (Letter a = 0; a < 3; ++a) {
    const auto avg = mu_K_average(tindex, CylinderFunction::indicator(Word(1, static_cast<char>(a))), 1 << 18);
    CHECK(avg.value == doctest::Approx(freq[a]).epsilon(2e-3));
    CHECK(avg.spread < 1e-2);
  }
}

TEST_CASE("sampled functions") {
  const SampledFunction f({0.0, 1.0, 4.0});
  CHECK(f(0.0) == 0.0);
  CHECK(f(0.25) == doctest::Approx(0.5));
  CHECK(f(0.75) == doctest::Approx(2.5));
  CHECK(f(1.0) == 4.0);
  CHECK_THROWS_AS(f(1.5), Error);
  CHECK_THROWS_AS(f(-0.1), Error);
  CHECK_THROWS_AS(SampledFunction({1.0}), Error);
  CHECK_THROWS_AS(SampledFunction({1.0, INFINITY}), Error);
  const auto g = SampledFunction::from([](double t) { return t * t; }, 1001);
  CHECK(g(0.5) == doctest::Approx(0.25).epsilon(1e-5));
}

TEST_CASE("weighted Birkhoff sums converge to products of integrals") {
  const auto index = LanguageIndex::build(oracle::thue_morse(), {16, 64});
  const std::size_t n = 1 << 16;
  const auto one = SampledFunction({1.0, 1.0});
  const auto ind0 = CylinderFunction::indicator(digits("0"));
  CHECK(weighted_birkhoff(one, ind0, index, n) == doctest::Approx(mu_K_average(index, ind0, n).value).epsilon(1e-4));
  const auto id = SampledFunction({0.0, 1.0});
  CHECK(weighted_birkhoff(id, ind0, index, n) == doctest::Approx(0.25).epsilon(1e-3));
  const auto f = SampledFunction::from([](double t) { return 1.0 / (4.0 - t); }, 4097);
  CHECK(weighted_birkhoff(f, CylinderFunction::constant(1.0), index, n) ==
        doctest::Approx(std::log(4.0 / 3.0)).epsilon(1e-4));
  CHECK_THROWS_AS(weighted_birkhoff(f, ind0, index, 0), Error);
}

TEST_CASE("perturbed Riemann sums") {
  // Σ_{k < λ^n} f((k + θ^n)/λ^n)/λ^n against ∫_0^1 f for f(t) = 1/(c - t):
  // the error shrinks like (max(θ, 1)/λ)^n.
  const double c = 4.0, lambda = 2.0;
  const double exact = std::log(c / (c - 1));
  for (double theta : {0.5, 1.0, 1.5}) {
    double prevScaled = 0;
    for (int n = 4; n <= 18; ++n) {
      const double big = std::pow(lambda, n);
      const double phi = std::pow(theta, n);
      double s = 0;
      for (double k = 0; k < big; k += 1) s += 1.0 / (c - (k + phi) / big) / big;
      const double scaled = std::abs(s - exact) / std::pow(std::max(theta, 1.0) / lambda, n);
      CHECK(scaled < 1.0);
      if (n > 4) CHECK(scaled <= prevScaled * 1.5 + 1e-9);
      prevScaled = scaled;
    }
  }
}

TEST_CASE("iterates at alpha = 1 are eventually monotone") {
  const auto index = LanguageIndex::build(oracle::thue_morse(), {16, 64});
  for (std::size_t p = 2; p <= 6; ++p) {
    const Tail x = tm_tail(index, p);
    std::vector<double> r;
    for (std::size_t m = 4; m <= 14; ++m) r.push_back(renormalize(power(1.0), index, x, m));
    int sign = 0;
    for (std::size_t i = 1; i < r.size(); ++i) {
      const double d = r[i] - r[i - 1];
      if (std::abs(d) < 1e-6) continue;
      const int s = d > 0 ? 1 : -1;
      if (sign == 0) sign = s;
      CHECK(s == sign);
    }
  }
}

TEST_CASE("classification rules on value sequences") {
  ClassifyOptions o;
  CHECK(classify_values({1.0, 0.5}, 2.0, 2.0, o) == LimitClass::inconclusive);
  CHECK(classify_values({1e-3, 1e-5, 1e-7, 1e-9}, 2.0, 2.0, o) == LimitClass::to_zero);
  CHECK(classify_values({1e-3, 1e-5, 1e-9, 1e-7}, 2.0, 2.0, o) == LimitClass::inconclusive);
  CHECK(classify_values({500, 800, 1200, 1800}, 0.5, 2.0, o) == LimitClass::diverges);
  // Growth slower than λ^{(1-α)/2} per step is not divergence.
  CHECK(classify_values({1000, 1001, 1002, 1003}, 0.5, 2.0, o) == LimitClass::inconclusive);
  CHECK(classify_values({500, 800, 1200, 1800}, 1.0, 2.0, o) == LimitClass::inconclusive);
  CHECK(classify_values({0.3, 0.2876, 0.28768, 0.287682}, 1.0, 2.0, o) == LimitClass::converges);
  CHECK(classify_values({0.3, 0.2876, 0.28768, 0.287682}, 1.5, 2.0, o) == LimitClass::inconclusive);
  CHECK(std::string(to_string(LimitClass::to_zero)) == "to-zero");
  CHECK(std::string(to_string(LimitClass::converges)) == "converges");
}

TEST_CASE("limit classification on Thue-Morse") {
  const auto index = LanguageIndex::build(oracle::thue_morse(), {16, 64});
  ClassifyOptions o;
  o.lH = 3;
  const auto zero = classify_limit(power(2.0), index, ones, 20, o);
  CHECK(zero.classification == LimitClass::to_zero);
  CHECK(zero.limitEstimate == 0.0);
  CHECK(!zero.closedForm);

  const auto div = classify_limit(power(0.5), index, ones, 21, o);
  CHECK(div.classification == LimitClass::diverges);
  for (double r : div.growthRatios) CHECK(r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-2));

  const auto conv = classify_limit(power(1.0), index, ones, 14, o);
  CHECK(conv.classification == LimitClass::converges);
  REQUIRE(conv.limitEstimate);
  REQUIRE(conv.closedForm);
  CHECK(std::abs(*conv.limitEstimate - thue_morse_U(2)) < 1e-3);
  CHECK(*conv.closedForm == doctest::Approx(thue_morse_U(2)).epsilon(1e-9));

  const std::vector<std::pair<double, const RenormResult*>> runs{{2.0, &zero}, {0.5, &div}, {1.0, &conv}};
  for (const auto& [alpha, rp] : runs) {
    const auto& r = *rp;
    REQUIRE(r.runningClass.size() == r.values.size());
    CHECK(r.runningClass.back() == r.classification);
    for (std::size_t i = 0; i < r.values.size(); ++i) {
      const std::vector<double> head(r.values.begin(), r.values.begin() + long(i) + 1);
      CHECK(r.runningClass[i] == classify_values(head, alpha, 2.0, o));
    }
  }
  CHECK_THROWS_AS(classify_limit(power(1.0), index, ones, 2, o), Error);
}
