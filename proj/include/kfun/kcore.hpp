#pragma once

// Classical and k-deformed gamma/beta functions, the Pochhammer k-symbol and
// the three-parameter Mittag-Leffler k-function.

#include <memory>
#include <optional>
#include <string_view>

namespace kfun {

/// Which gamma function sits in the denominator of the Mittag-Leffler series.
enum class GammaMode {
  Classical,  ///< Gamma(pj + q)
  KDeformed,  ///< Gamma_k(pj + q)
};

std::string_view to_string(GammaMode mode);
/// Accepts "classical" / "kdeformed" (also "k"); throws DomainError otherwise.
GammaMode parse_gamma_mode(std::string_view text);

/// Parameter quadruple (k, p, q, r) of E_{k,p,q}^r plus the denominator mode.
/// All four must be finite and strictly positive.
class MLParams {
 public:
  MLParams(double k, double p, double q, double r, GammaMode mode = GammaMode::Classical);

  double k() const noexcept { return k_; }
  double p() const noexcept { return p_; }
  double q() const noexcept { return q_; }
  double r() const noexcept { return r_; }
  GammaMode mode() const noexcept { return mode_; }

  /// Same parameters under the other denominator reading.
  MLParams with_mode(GammaMode mode) const { return {k_, p_, q_, r_, mode}; }

  friend bool operator==(const MLParams&, const MLParams&) = default;

 private:
  double k_;
  double p_;
  double q_;
  double r_;
  GammaMode mode_;
};

struct SeriesConfig {
  double rel_tol = 1e-14;
  int max_terms = 500;
  /// Largest |x| accepted by the power series.
  double max_abs_argument = 50.0;
  /// Re-sum in quad precision (and beyond, via MPFR) when rounding would
  /// exceed rel_tol.
  bool extended_precision = true;
  /// For large negative x, use the algebraic large-argument expansion once it
  /// is accurate to double precision. Off by default.
  bool large_argument_expansion = false;

  void validate() const;
};

enum class SeriesMethod {
  Double,          ///< compensated double-precision sum
  Extended,        ///< quad-precision sum
  Multiprecision,  ///< MPFR sum at a precision sized to the cancellation
  Asymptotic,      ///< large-argument expansion
};

struct SeriesResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int terms = 0;
  SeriesMethod method = SeriesMethod::Double;
};

/// (r)_{k,j} = r (r + k) ... (r + (j-1)k). Throws OverflowError past DBL_MAX.
double k_pochhammer(double r, double k, int j);

/// Gamma_k(eta) = k^{eta/k - 1} Gamma(eta/k), eta > 0, k > 0.
double k_gamma(double eta, double k);

/// log Gamma_k(eta) for eta > 0.
double log_k_gamma(double eta, double k);

/// Gamma_k continued to eta <= 0 through Gamma_k(eta) = Gamma_k(eta + k) / eta.
/// Throws PoleError (factor 0) on eta = 0, -k, -2k, ...
double k_gamma_continued(double eta, double k);

/// beta_k(s, t) = B(s/k, t/k) / k.
double k_beta(double s, double t, double k);

/// 1 / Gamma(x) for any real x; zero at the poles.
double reciprocal_gamma(double x);

/// The series denominator gamma G(x) of the given mode (x > 0).
double denominator_gamma(double x, const MLParams& params);

/// Single evaluation of E_{k,p,q}^r(x) = sum_j (r)_{k,j} x^j / (G(pj+q) j!).
/// E(-m) in the integrands is mittag_leffler_k(-m, ...).
SeriesResult mittag_leffler_k(double x, const MLParams& params, const SeriesConfig& cfg = {});

/// Large-argument behaviour of E(-x) as x -> +infinity.
struct TailBehavior {
  enum class Kind {
    Algebraic,    ///< E(-x) ~ c x^{-exponent}
    Exponential,  ///< every algebraic coefficient vanishes
    Unknown,      ///< p/k (or p) >= 2: no algebraic expansion available
  };
  Kind kind = Kind::Unknown;
  double exponent = 0.0;
};

/// Reusable evaluator for E_{k,p,q}^r with precomputed series coefficients.
///
/// Writing E = C * E^gamma_{alpha,beta}(lambda x) in the Prabhakar normalization,
///   Classical: alpha = p,   beta = q,   gamma = r/k, C = 1,             lambda = k
///   KDeformed: alpha = p/k, beta = q/k, gamma = r/k, C = k^{1 - q/k},   lambda = k^{1 - p/k}
/// which gives the large-argument expansion and the tail exponent.
///
/// Immutable after construction and safe to share between threads.
class MittagLefflerK {
 public:
  /// `argument_bound` caps the |x| the coefficient table is sized for; by
  /// default cfg.max_abs_argument.
  explicit MittagLefflerK(const MLParams& params, const SeriesConfig& cfg = {},
                          std::optional<double> argument_bound = std::nullopt);

  SeriesResult evaluate(double x) const;
  double operator()(double x) const { return evaluate(x).value; }

  const MLParams& params() const noexcept;
  const SeriesConfig& config() const noexcept;

  struct Prabhakar {
    double alpha;
    double beta;
    double gamma;
    double scale;           ///< C
    double argument_scale;  ///< lambda
  };
  Prabhakar prabhakar() const noexcept;

  TailBehavior tail_behavior() const noexcept;

  /// Smallest x > 0 from which the large-argument expansion of E(-x) meets
  /// double precision; +inf when it never does.
  double asymptotic_onset() const noexcept;

 private:
  struct State;
  std::shared_ptr<const State> state_;
};

}  // namespace kfun
