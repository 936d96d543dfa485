#include "morphic/thermodynamics.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

namespace morphic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// (1 + 1/δ)^{-β} for every β and δ in [1, maxDelta].
class PowerTable {
 public:
  PowerTable(const std::vector<double>& betas, std::size_t maxDelta) : nb_(betas.size()), v_(nb_ * (maxDelta + 1)) {
    for (std::size_t d = 1; d <= maxDelta; ++d) {
      const double phi = std::log1p(1.0 / static_cast<double>(d));
      for (std::size_t b = 0; b < nb_; ++b) v_[d * nb_ + b] = std::exp(-betas[b] * phi);
    }
  }
  const double* row(std::size_t delta) const { return &v_[delta * nb_]; }

 private:
  std::size_t nb_;
  std::vector<double> v_;
};

std::size_t match_length(const LanguageIndex& index, WordView w) { return index.delta(w).length; }

/// Words are built right to left in the tail of a fixed buffer.
struct CefSearch {
  const LanguageIndex& index;
  const PowerTable& table;
  std::size_t nb;
  std::size_t N;
  std::size_t LMax;
  std::size_t maxM;
  Word buf;
  std::vector<std::vector<double>> prod;
  CefSum out;

  WordView suffix(std::size_t len) const { return WordView(buf).substr(LMax - len); }

  void add(std::size_t len, std::size_t M) {
    const double* p = prod[len].data();
    for (std::size_t b = 0; b < nb; ++b) {
      out.value[b] += p[b];
      out.byM[std::min(M, maxM)][b] += p[b];
      out.shells[len][b] += p[b];
    }
    ++out.words;
  }

  void multiply(std::size_t len, std::size_t delta) {
    const double* r = table.row(delta);
    for (std::size_t b = 0; b < nb; ++b) prod[len][b] = prod[len - 1][b] * r[b];
  }

  // Prepends one letter to the free part. The same letter may instead end
  // the excursion part, placed just before the first free position.
  void free_step(std::size_t len, std::size_t d) {
    if (len == LMax) return;
    const std::size_t n = len + 1;
    for (std::size_t c = 0; c < d; ++c) {
      buf[LMax - n] = static_cast<char>(c);
      const std::size_t m = match_length(index, suffix(n));
      if (m <= N) {
        // A match reaching the end of w can grow past it, but not beyond N.
        multiply(n, m == n ? N : m);
        free_step(n, d);
      }
      excursion_step(n, 1, m, 0, d);
    }
  }

  // Position 0 of the current word of length n is an excursion position
  // and e excursion letters precede the first free position.
  void excursion_step(std::size_t n, std::size_t e, std::size_t m, std::size_t M, std::size_t d) {
    const bool reachesEnd = m == n;
    if (!reachesEnd && m <= N) return;
    // After the first free position a match grows by at most N.
    multiply(n, reachesEnd ? e + N : m);
    add(n, M);
    if (n == LMax) return;
    const std::size_t next = n + 1;
    for (std::size_t c = 0; c < d; ++c) {
      buf[LMax - next] = static_cast<char>(c);
      const std::size_t mNext = match_length(index, suffix(next));
      excursion_step(next, e + 1, mNext, M + (m != mNext - 1 ? 1 : 0), d);
    }
  }
};

CefSum merge(std::vector<CefSum>& parts) {
  CefSum total = std::move(parts.front());
  for (std::size_t p = 1; p < parts.size(); ++p) {
    for (std::size_t b = 0; b < total.value.size(); ++b) {
      total.value[b] += parts[p].value[b];
      for (std::size_t M = 0; M < total.byM.size(); ++M) total.byM[M][b] += parts[p].byM[M][b];
      for (std::size_t L = 0; L < total.shells.size(); ++L) total.shells[L][b] += parts[p].shells[L][b];
    }
    total.words += parts[p].words;
  }
  return total;
}

}  // namespace

void validate_cylinder(const LanguageIndex& index, const CylinderJ& J, std::optional<std::size_t> lH) {
  if (J.wJ.empty()) throw Error("wJ must be nonempty");
  if (J.wJ.size() > index.max_len()) throw Error("wJ longer than the index maxLen");
  if (index.contains(J.wJ)) throw Error("wJ belongs to the language");
  const std::size_t m = match_length(index, J.wJ);
  if (m >= J.N) throw Error("N must exceed the longest prefix of wJ in the language");
  if (lH && J.N <= *lH) throw Error("N must exceed l(H)");
}

double a_n(std::size_t N) {
  if (N == 0) throw Error("N must be positive");
  return -std::log1p(1.0 / static_cast<double>(N));
}

std::vector<double> default_beta_grid(std::size_t points, double lo, double hi) {
  if (points < 2 || lo <= 0 || hi <= lo) throw Error("invalid β grid");
  std::vector<double> g(points);
  const double ratio = std::log(hi / lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) g[i] = lo * std::exp(ratio * static_cast<double>(i));
  g.back() = hi;
  return g;
}

double birkhoff_phi(const LanguageIndex& index, WordView u, WordView wJ, const Tail& continuation) {
  if (u.empty()) return 0.0;
  Word head(u);
  head += wJ;
  std::size_t extra = 64;
  for (;;) {
    const Word w = head + continuation.materialize(index.substitution(), extra);
    const auto qs = index.delta_all(w, u.size());
    bool grow = false;
    double s = 0;
    for (const auto& q : qs) {
      if (q.saturation == SaturationKind::index_depth) {
        throw Saturation("δ reached the certified depth along u·wJ", SaturationKind::index_depth, 0);
      }
      if (q.saturation == SaturationKind::end_of_input) grow = true;
      s += std::log1p(1.0 / static_cast<double>(q.length));
    }
    if (!grow) return s;
    if (extra >= (std::size_t{1} << 20)) {
      throw Saturation("continuation too short for δ along u·wJ", SaturationKind::end_of_input, 0);
    }
    extra *= 4;
  }
}

ReturnWord classify_free_excursion(const LanguageIndex& index, WordView u, WordView wJ, std::size_t N) {
  ReturnWord r;
  r.u = Word(u);
  const Word t = r.u + Word(wJ);
  const auto qs = index.delta_all(t, u.size());
  r.freeFlags.resize(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (qs[k].saturation == SaturationKind::index_depth) {
      throw Saturation("δ reached the certified depth along u·wJ", SaturationKind::index_depth, k);
    }
    // A match that runs to the end of u·wJ includes wJ, which is not in L.
    r.freeFlags[k] = qs[k].length <= N;
  }
  for (std::size_t k = 0; k < u.size();) {
    if (r.freeFlags[k]) {
      ++k;
      continue;
    }
    std::size_t e = k;
    while (e < u.size() && !r.freeFlags[e]) ++e;
    r.excursions.push_back({k, e});
    k = e;
  }
  std::size_t begin = 0;
  for (const auto& ex : r.excursions) {
    if (ex.begin > begin) r.blocks.push_back({begin, ex.begin});
    begin = ex.begin;
  }
  if (begin < u.size()) r.blocks.push_back({begin, u.size()});
  return r;
}

CefSum c_ef_truncated(const LanguageIndex& index, const std::vector<double>& betas, std::size_t N, std::size_t LMax) {
  if (N == 0) throw Error("N must be positive");
  const std::size_t d = index.substitution().size();
  const std::size_t nb = betas.size();
  const std::size_t maxM = 32;
  const PowerTable table(betas, LMax + N + 2);
  auto fresh = [&] {
    CefSum s;
    s.betas = betas;
    s.LMax = LMax;
    s.value.assign(nb, 0.0);
    s.byM.assign(maxM + 1, std::vector<double>(nb, 0.0));
    s.shells.assign(LMax + 1, std::vector<double>(nb, 0.0));
    return s;
  };
  if (LMax < 2) return fresh();
  // One task per last letter of w, merged in letter order.
  std::vector<std::future<CefSum>> tasks;
  for (std::size_t last = 0; last < d; ++last) {
    tasks.push_back(std::async(std::launch::async, [&, last] {
      CefSearch s{index, table, nb, N, LMax, maxM, Word(LMax, '\0'), {}, fresh()};
      s.prod.assign(LMax + 1, std::vector<double>(nb, 1.0));
      s.buf[LMax - 1] = static_cast<char>(last);
      const std::size_t m = match_length(index, s.suffix(1));
      if (m <= N) {
        s.multiply(1, m == 1 ? N : m);
        s.free_step(1, d);
      }
      return std::move(s.out);
    }));
  }
  std::vector<CefSum> parts;
  for (auto& t : tasks) parts.push_back(t.get());
  return merge(parts);
}

TransferSum induced_transfer_truncated(const LanguageIndex& index, const CylinderJ& J, const std::vector<double>& betas,
                                       double Z, std::size_t nMax, const Tail& x) {
  validate_cylinder(index, J);
  const Substitution& h = index.substitution();
  const std::size_t d = h.size();
  const std::size_t nb = betas.size();
  const std::size_t w = J.wJ.size();
  const Word xHead = x.materialize(h, w + 64);
  if (xHead.compare(0, w, J.wJ) != 0) throw Error("the tail x must start with wJ");
  const std::size_t checkUpTo = std::min<std::size_t>(nMax, 12);

  TransferSum out;
  out.betas = betas;
  out.nMax = nMax;
  out.value.assign(nb, 0.0);
  const PowerTable table(betas, nMax + w + 2);
  const double z = std::exp(-Z);

  // t = u · wJ is built right to left in the tail of buf.
  const std::size_t cap = nMax + w;
  Word buf(cap, '\0');
  std::copy(J.wJ.begin(), J.wJ.end(), buf.end() - static_cast<long>(w));
  std::vector<std::vector<double>> prod(nMax + 1, std::vector<double>(nb, 1.0));
  auto suffix = [&](std::size_t len) { return WordView(buf).substr(cap - len); };

  auto recurse = [&](auto&& self, std::size_t uLen) -> void {
    if (uLen == nMax) return;
    for (std::size_t c = 0; c < d; ++c) {
      const std::size_t n = uLen + 1;
      buf[cap - w - n] = static_cast<char>(c);
      const WordView t = suffix(n + w);
      const std::size_t m = match_length(index, t);
      const double* r = table.row(m);
      for (std::size_t b = 0; b < nb; ++b) prod[n][b] = prod[uLen][b] * r[b] * z;
      if (t.compare(0, w, J.wJ) == 0) {
        if (n <= checkUpTo) {
          const Word alt = Word(t.substr(0, n)) + xHead;
          for (std::size_t k = 0; k < n; ++k) {
            const WordView a = WordView(alt).substr(k);
            const WordView bView = t.substr(k);
            if (match_length(index, a) != match_length(index, bView)) {
              throw Error("δ along u·x depends on digits of x beyond wJ");
            }
          }
        }
        for (std::size_t b = 0; b < nb; ++b) out.value[b] += prod[n][b];
        ++out.returnWords;
        continue;
      }
      self(self, n);
    }
  };
  recurse(recurse, 0);
  return out;
}

const char* to_string(CertificateStatus s) {
  switch (s) {
    case CertificateStatus::certified:
      return "certified";
    case CertificateStatus::not_certified:
      return "not-certified";
    case CertificateStatus::geometric_divergent:
      return "geometric-divergent";
    case CertificateStatus::c_ef_too_large:
      return "c-ef-too-large";
  }
  return "not-certified";
}

namespace {

FreezingCertificate certify(const LanguageIndex& index, const CylinderJ& J, const CefSum& cef,
                            const TransferSum& transfer, std::size_t b, std::size_t nMax, std::size_t LMax) {
  FreezingCertificate c;
  c.beta = cef.betas[b];
  c.nMax = nMax;
  c.LMax = LMax;
  c.AN = a_n(J.N);
  c.cEFTruncated = cef.value[b];
  for (const auto& m : cef.byM) c.cEFByM.push_back(m[b]);
  while (c.cEFByM.size() > 1 && c.cEFByM.back() == 0.0) c.cEFByM.pop_back();
  c.operatorValue = transfer.value[b];
  c.crossCheckLower = std::exp(static_cast<double>(J.wJ.size()) * c.beta * c.AN) * c.cEFTruncated;
  c.crossCheckHolds = c.crossCheckLower <= c.operatorValue;

  // Shell ratios of the last three lengths bound the words beyond LMax.
  const auto& sh = cef.shells;
  double ratio = 0;
  for (std::size_t L = LMax; L + 3 > LMax && L >= 2; --L) {
    if (sh[L - 1][b] > 0) ratio = std::max(ratio, sh[L][b] / sh[L - 1][b]);
  }
  const double last = LMax < sh.size() ? sh[LMax][b] : 0.0;
  c.cEFTailAllowance = last == 0.0 ? 0.0 : ratio < 1.0 ? last * ratio / (1.0 - ratio) : kInf;
  c.cEF = c.cEFTruncated + c.cEFTailAllowance;

  const double q = static_cast<double>(index.substitution().size()) * std::exp(c.beta * c.AN);
  if (q >= 1.0) {
    c.freeFactor = kInf;
    c.tailBound = kInf;
    c.status = CertificateStatus::geometric_divergent;
    return c;
  }
  c.freeFactor = std::exp(c.beta * c.AN) / (1.0 - q);
  if (!(c.cEF < 1.0)) {
    c.tailBound = kInf;
    c.status = CertificateStatus::c_ef_too_large;
    return c;
  }
  const double bound = c.freeFactor / (1.0 - c.cEF);
  c.tailBound = std::max(0.0, bound - c.operatorValue);
  c.verdict = c.operatorValue <= bound && c.operatorValue + c.tailBound < 1.0;
  c.status = c.verdict ? CertificateStatus::certified : CertificateStatus::not_certified;
  return c;
}

}  // namespace

FreezingScan freezing_scan(const LanguageIndex& index, const CylinderJ& J, const std::vector<double>& betas,
                           std::size_t nMax, std::size_t LMax, const Tail& x) {
  validate_cylinder(index, J);
  const auto cef = c_ef_truncated(index, betas, J.N, LMax);
  const auto transfer = induced_transfer_truncated(index, J, betas, 0.0, nMax, x);
  FreezingScan scan;
  for (std::size_t b = 0; b < betas.size(); ++b) {
    scan.certificates.push_back(certify(index, J, cef, transfer, b, nMax, LMax));
  }
  scan.monotone = true;
  bool seen = false;
  for (const auto& c : scan.certificates) {
    if (c.verdict && !seen) {
      seen = true;
      scan.firstCertified = c.beta;
    } else if (seen && !c.verdict) {
      scan.monotone = false;
    }
  }
  return scan;
}

FreezingCertificate freezing_certificate(const LanguageIndex& index, const CylinderJ& J, double beta, std::size_t nMax,
                                         std::size_t LMax, const Tail& x) {
  return freezing_scan(index, J, {beta}, nMax, LMax, x).certificates.front();
}

PressureCurve pressure_curve(const LanguageIndex& index, const Potential& v, const std::vector<double>& betas,
                             std::size_t n) {
  if (n == 0) throw Error("pressure_curve: n must be positive");
  if (n > 26) throw BudgetExceeded("pressure_curve: |A|^n enumeration beyond n = 26");
  const std::size_t d = index.substitution().size();
  if (std::pow(static_cast<double>(d), static_cast<double>(n)) > 1e8) {
    throw BudgetExceeded("pressure_curve: more than 1e8 words of length n");
  }
  const std::size_t depth = std::max(v.g.depth(), v.h.depth());
  const double wLo = v.g.min_value() + std::min(0.0, v.h.min_value());
  const double wHi = v.g.max_value() + std::max(0.0, v.h.max_value());
  auto f = [&](std::size_t delta) {
    const auto dd = static_cast<double>(delta);
    return v.logForm ? std::log1p(1.0 / dd) : 1.0 / std::pow(dd, v.alpha);
  };

  std::vector<double> sup, inf;
  Word buf(n, '\0');
  auto recurse = [&](auto&& self, std::size_t len, double sSup, double sInf) -> void {
    if (len == n) {
      sup.push_back(sSup);
      inf.push_back(sInf);
      return;
    }
    for (std::size_t c = 0; c < d; ++c) {
      buf[n - len - 1] = static_cast<char>(c);
      const WordView s = WordView(buf).substr(n - len - 1);
      const std::size_t m = match_length(index, s);
      double lo = wLo, hi = wHi;
      if (s.size() >= depth) lo = hi = v.g(s) + v.h(s);
      if (m < s.size()) {
        self(self, len + 1, sSup - lo * f(m), sInf - hi * f(m));
      } else {
        // δ can be anything from m upward on this cylinder.
        self(self, len + 1, sSup, sInf - hi * f(m));
      }
    }
  };
  recurse(recurse, 0, 0.0, 0.0);

  PressureCurve curve;
  curve.betas = betas;
  curve.n = n;
  const auto nn = static_cast<double>(n);
  auto lse = [](const std::vector<double>& s, double beta) {
    double top = -kInf;
    for (double x : s) top = std::max(top, beta * x);
    double acc = 0;
    for (double x : s) acc += std::exp(beta * x - top);
    return top + std::log(acc);
  };
  for (double beta : betas) {
    curve.upper.push_back(lse(sup, beta) / nn);
    curve.lower.push_back(lse(inf, beta) / nn);
  }
  for (std::size_t i = 0; i < betas.size(); ++i) {
    if (curve.upper[i] <= 10.0 / nn) {
      curve.betaCStar = betas[i];
      break;
    }
  }
  return curve;
}

Xi1Transfer xi1_comparison_transfer(const LanguageIndex& index, const Potential& v, double beta0) {
  if (!v.logForm && std::abs(v.alpha - 1.0) > 1e-12) throw Error("xi1 comparison needs α = 1 or the log form");
  if (!(beta0 > 0)) throw Error("β0 must be positive");
  Xi1Transfer t;
  t.kPrime = v.g.min_value() + std::min(0.0, v.h.min_value());
  if (t.kPrime <= 0) throw Error("inf(g + h) must be positive");
  const double kSup = v.g.max_value() + std::max(0.0, v.h.max_value());
  double ratio = 1.0;
  if (!v.logForm) {
    // (1/δ) / log(1 + 1/δ) lies in [1, r(δmin)], decreasing in δ.
    const double dmin = index.is_two_full() ? 2.0 : 1.0;
    ratio = (1.0 / dmin) / std::log1p(1.0 / dmin);
  }
  t.k = kSup * ratio;
  t.threshold = beta0 / t.kPrime;
  t.thresholdOverK = beta0 / t.k;
  return t;
}

}  // namespace morphic
