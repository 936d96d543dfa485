#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "morphic/attractor.hpp"
#include "morphic/language.hpp"
#include "morphic/renormalization.hpp"

namespace morphic {

/// The cylinder [wJ] with wJ outside the language, and the free threshold N.
/// Every point of [wJ] has δ < N.
struct CylinderJ {
  Word wJ;
  std::size_t N = 0;
};

/// Throws unless wJ is outside the language, the longest prefix of wJ in
/// the language is shorter than N and, when lH is given, N > lH.
void validate_cylinder(const LanguageIndex& index, const CylinderJ& J, std::optional<std::size_t> lH = {});

/// A_N = -log(1 + 1/N).
double a_n(std::size_t N);

/// Geometric β grid on [lo, hi].
std::vector<double> default_beta_grid(std::size_t points = 32, double lo = 0.1, double hi = 200.0);

/// S_{|u|}φ along u·wJ·continuation with φ = log(1 + 1/δ).
double birkhoff_phi(const LanguageIndex& index, WordView u, WordView wJ, const Tail& continuation);

struct Segment {
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct ReturnWord {
  Word u;
  /// δ(u_k … u_{n-1} wJ) <= N.
  std::vector<bool> freeFlags;
  /// Maximal runs of non-free positions.
  std::vector<Segment> excursions;
  /// u = F_0 (E_1 F_1) … (E_k F_k): F_0 and then each E_i F_i.
  std::vector<Segment> blocks;
};

ReturnWord classify_free_excursion(const LanguageIndex& index, WordView u, WordView wJ, std::size_t N);

struct CefSum {
  std::vector<double> betas;
  /// Truncated C_EF per β.
  std::vector<double> value;
  /// byM[M][b]: words with M accidents inside E.
  std::vector<std::vector<double>> byM;
  /// shells[L][b]: words of length exactly L.
  std::vector<std::vector<double>> shells;
  std::size_t LMax = 0;
  std::size_t words = 0;
};

/// Σ e^{-β S_{|w|}φ(w)} over excursion-free words w = E F with |w| <= LMax.
/// The continuation after w is unknown, so the sum runs over every w that
/// can be excursion-free in some context, with δ bounded above from the
/// digits of w: a strict upper bound of each summand.
CefSum c_ef_truncated(const LanguageIndex& index, const std::vector<double>& betas, std::size_t N, std::size_t LMax);

struct TransferSum {
  std::vector<double> betas;
  std::vector<double> value;
  std::size_t returnWords = 0;
  std::size_t nMax = 0;
};

/// Σ over return words u with |u| <= nMax of e^{β S_{|u|}V(u·x) - |u|Z},
/// V = -φ. Positive terms, so the truncation is a lower bound. The tail x
/// must start with wJ; δ along u·x is read from u·wJ, then checked against
/// the digits of x.
TransferSum induced_transfer_truncated(const LanguageIndex& index, const CylinderJ& J, const std::vector<double>& betas,
                                       double Z, std::size_t nMax, const Tail& x);

enum class CertificateStatus { certified, not_certified, geometric_divergent, c_ef_too_large };

const char* to_string(CertificateStatus s);

struct FreezingCertificate {
  double beta = 0;
  std::size_t nMax = 0;
  std::size_t LMax = 0;
  double AN = 0;
  double cEFTruncated = 0;
  /// Geometric allowance for words longer than LMax, from the last shell ratios.
  double cEFTailAllowance = 0;
  double cEF = 0;
  std::vector<double> cEFByM;
  double operatorValue = 0;
  /// e^{βA_N} / (1 - D e^{βA_N}).
  double freeFactor = 0;
  /// Σ_k cEF^k · freeFactor - operatorValue.
  double tailBound = 0;
  /// e^{|wJ| β A_N} · C_EF, a lower bound of the full operator value.
  double crossCheckLower = 0;
  bool crossCheckHolds = false;
  CertificateStatus status = CertificateStatus::not_certified;
  bool verdict = false;
};

struct FreezingScan {
  std::vector<FreezingCertificate> certificates;
  bool monotone = false;
  std::optional<double> firstCertified;
};

FreezingCertificate freezing_certificate(const LanguageIndex& index, const CylinderJ& J, double beta, std::size_t nMax,
                                         std::size_t LMax, const Tail& x);

/// Certificates on a grid, sharing one enumeration per series.
FreezingScan freezing_scan(const LanguageIndex& index, const CylinderJ& J, const std::vector<double>& betas,
                           std::size_t nMax, std::size_t LMax, const Tail& x);

struct PressureCurve {
  std::vector<double> betas;
  std::vector<double> lower;
  std::vector<double> upper;
  std::size_t n = 0;
  /// First β with upper <= 10/n: a finite-size estimate, not β_c.
  std::optional<double> betaCStar;
};

/// (1/n) log Σ_{w in A^n} e^{β sup/inf_{[w]} S_n V}, V = -potential.
PressureCurve pressure_curve(const LanguageIndex& index, const Potential& v, const std::vector<double>& betas,
                             std::size_t n);

struct Xi1Transfer {
  /// k' φ <= -V <= k φ.
  double k = 0;
  double kPrime = 0;
  /// β0 / k', the threshold that follows from the comparison.
  double threshold = 0;
  /// β0 / k as written in the source argument.
  double thresholdOverK = 0;
};

Xi1Transfer xi1_comparison_transfer(const LanguageIndex& index, const Potential& v, double beta0);

}  // namespace morphic
