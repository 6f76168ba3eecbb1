#include "kfun/kcore.hpp"

#include <mpfr.h>
#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <string>
#include <vector>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/sin_pi.hpp>

#include "kfun/errors.hpp"

namespace kfun {

namespace {

using quad = __float128;

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kLogMax = 709.78;
constexpr int kAsymptoticTerms = 64;

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// Log of the denominator gamma at x > 0.
double log_denominator_gamma(double x, const MLParams& params) {
  if (params.mode() == GammaMode::Classical) return std::lgamma(x);
  return log_k_gamma(x, params.k());
}

quad log_denominator_gamma_q(quad x, const MLParams& params) {
  if (params.mode() == GammaMode::Classical) return lgammaq(x);
  const quad k = params.k();
  return (x / k - 1) * logq(k) + lgammaq(x / k);
}

// G(a) / G(a + p), accurate even when both gammas overflow.
double denominator_gamma_ratio(double a, const MLParams& params) {
  const double p = params.p();
  if (params.mode() == GammaMode::Classical) return boost::math::tgamma_delta_ratio(a, p);
  const double k = params.k();
  return std::pow(k, -p / k) * boost::math::tgamma_delta_ratio(a / k, p / k);
}

}  // namespace

std::string_view to_string(GammaMode mode) {
  return mode == GammaMode::Classical ? "classical" : "kdeformed";
}

GammaMode parse_gamma_mode(std::string_view text) {
  if (text == "classical") return GammaMode::Classical;
  if (text == "kdeformed" || text == "k") return GammaMode::KDeformed;
  throw DomainError("unknown gamma mode '" + std::string(text) + "' (expected classical|kdeformed)");
}

MLParams::MLParams(double k, double p, double q, double r, GammaMode mode)
    : k_(k), p_(p), q_(q), r_(r), mode_(mode) {
  if (!positive_finite(k) || !positive_finite(p) || !positive_finite(q) || !positive_finite(r)) {
    throw DomainError("Mittag-Leffler parameters must be positive: k=" + num(k) + " p=" + num(p) +
                      " q=" + num(q) + " r=" + num(r));
  }
}

void SeriesConfig::validate() const {
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw DomainError("series rel_tol must lie in (0, 1)");
  if (max_terms < 1) throw DomainError("series max_terms must be >= 1");
  if (!(max_abs_argument > 0.0)) throw DomainError("series max_abs_argument must be positive");
}

double k_pochhammer(double r, double k, int j) {
  if (!(r > 0.0) || !(k > 0.0) || j < 0) {
    throw DomainError("k_pochhammer requires r > 0, k > 0, j >= 0");
  }
  double product = 1.0;
  for (int i = 0; i < j; ++i) product *= r + i * k;
  if (std::isfinite(product)) return product;
  double log_value = 0.0;
  for (int i = 0; i < j; ++i) log_value += std::log(r + i * k);
  throw OverflowError("k_pochhammer overflows double range", log_value);
}

double log_k_gamma(double eta, double k) {
  if (!(eta > 0.0) || !(k > 0.0)) throw DomainError("log_k_gamma requires eta > 0 and k > 0");
  const double x = eta / k;
  return (x - 1.0) * std::log(k) + boost::math::lgamma(x);
}

double k_gamma(double eta, double k) {
  if (!(eta > 0.0) || !(k > 0.0) || !std::isfinite(eta) || !std::isfinite(k)) {
    throw DomainError("k_gamma requires eta > 0 and k > 0 (eta=" + num(eta) + ", k=" + num(k) + ")");
  }
  const double x = eta / k;
  if (x < 170.0) {
    const double value = boost::math::tgamma(x) * std::pow(k, x - 1.0);
    if (std::isfinite(value) && value > 0.0) return value;
  }
  const double log_value = log_k_gamma(eta, k);
  if (log_value > kLogMax) throw OverflowError("k_gamma overflows double range", log_value);
  return std::exp(log_value);
}

double k_gamma_continued(double eta, double k) {
  if (!(k > 0.0)) throw DomainError("k_gamma_continued requires k > 0");
  if (eta > 0.0) return k_gamma(eta, k);
  const double steps = -eta / k;
  if (std::abs(steps - std::round(steps)) <= 1e-12 * std::max(1.0, steps)) {
    throw PoleError("Gamma_k pole at eta=" + num(eta) + " (nonpositive multiple of k)", 0);
  }
  // Shift right until positive, dividing by each visited argument.
  double divisor = 1.0;
  double shifted = eta;
  while (shifted <= 0.0) {
    divisor *= shifted;
    shifted += k;
  }
  return k_gamma(shifted, k) / divisor;
}

double k_beta(double s, double t, double k) {
  if (!(s > 0.0) || !(t > 0.0) || !(k > 0.0)) {
    throw DomainError("k_beta requires s, t, k > 0 (s=" + num(s) + ", t=" + num(t) + ", k=" + num(k) + ")");
  }
  return boost::math::beta(s / k, t / k) / k;
}

double reciprocal_gamma(double x) {
  if (x > 0.0) {
    if (x > 171.7) return 0.0;
    return 1.0 / boost::math::tgamma(x);
  }
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-14 * std::max(1.0, std::abs(x))) return 0.0;
  // Reflection: 1/Gamma(x) = sin(pi x) Gamma(1 - x) / pi.
  const double one_minus = 1.0 - x;
  if (one_minus > 171.0) {
    const double log_mag = boost::math::lgamma(one_minus) - std::log(M_PI);
    const double s = boost::math::sin_pi(x);
    return s * std::exp(std::min(log_mag, kLogMax));
  }
  return boost::math::sin_pi(x) * boost::math::tgamma(one_minus) / M_PI;
}

double denominator_gamma(double x, const MLParams& params) {
  if (params.mode() == GammaMode::Classical) {
    if (!(x > 0.0)) throw DomainError("denominator gamma requires a positive argument");
    return boost::math::tgamma(x);
  }
  return k_gamma(x, params.k());
}

// ---------------------------------------------------------------------------

struct MittagLefflerK::State {
  MLParams params;
  SeriesConfig cfg;
  double bound = 0.0;

  double c0 = 0.0;
  std::vector<double> ratio;  // c_{j+1} / c_j
  std::size_t length = 0;     // number of series terms in the table
  bool table_capped = false;  // length hit cfg.max_terms

  Prabhakar form{};
  std::vector<double> asym;  // large-argument coefficients a_n
  int asym_end = 0;          // one past the last nonzero a_n
  TailBehavior tail{};
  double onset = std::numeric_limits<double>::infinity();

  double log_peak = 0.0;  // log of the largest |term| at |x| = bound

  mutable std::once_flag quad_once;
  mutable std::vector<quad> log_coeff;  // log c_j in quad precision
  mutable std::vector<quad> quad_ratio; // c_{j+1} / c_j in quad precision

  mutable std::once_flag mp_once;
  mutable mpfr_prec_t mp_bits = 0;
  mutable std::vector<__mpfr_struct> mp_coeff;  // c_j at mp_bits

  ~State() {
    for (auto& c : mp_coeff) mpfr_clear(&c);
  }

  State(const MLParams& p, const SeriesConfig& c) : params(p), cfg(c) {}

  void build_table();
  void build_expansion();
  void ensure_quad() const;
  void ensure_mp() const;

  SeriesResult sum_double(double x, double& rounding) const;
  SeriesResult sum_extended(double x) const;
  SeriesResult sum_multiprecision(double x) const;

  struct Expansion {
    double value;
    double error;
    int terms;
    bool accepted;
  };
  Expansion expansion(double z) const;
};

void MittagLefflerK::State::build_table() {
  const double k = params.k();
  const double p = params.p();
  const double q = params.q();
  const double r = params.r();

  c0 = params.mode() == GammaMode::Classical ? reciprocal_gamma(q) : 1.0 / k_gamma(q, k);

  // Size the table from log-magnitudes at |x| = bound.
  const double log_bound = std::log(std::max(bound, 1e-300));
  double log_c = -log_denominator_gamma(q, params);
  double peak = log_c;
  double previous = log_c;
  std::size_t n = 1;
  const auto cap = static_cast<std::size_t>(cfg.max_terms);
  while (n < cap) {
    const double j = static_cast<double>(n - 1);
    log_c += std::log(r + j * k) - std::log(j + 1.0) -
             (log_denominator_gamma(p * (j + 1.0) + q, params) - log_denominator_gamma(p * j + q, params));
    const double log_term = log_c + static_cast<double>(n) * log_bound;
    ++n;
    peak = std::max(peak, log_term);
    // Deep enough for results as small as e^{-peak} (exponential kernels).
    if (log_term < previous && log_term < std::min(peak - 92.0, -peak - 40.0)) break;
    previous = log_term;
  }
  length = n;
  table_capped = (n >= cap);
  log_peak = peak;

  ratio.resize(length > 0 ? length - 1 : 0);
  for (std::size_t i = 0; i + 1 < length; ++i) {
    const double j = static_cast<double>(i);
    ratio[i] = (r + j * k) / (j + 1.0) * denominator_gamma_ratio(p * j + q, params);
  }
}

void MittagLefflerK::State::build_expansion() {
  const double k = params.k();
  if (params.mode() == GammaMode::Classical) {
    form = {params.p(), params.q(), params.r() / k, 1.0, k};
  } else {
    form = {params.p() / k, params.q() / k, params.r() / k, std::pow(k, 1.0 - params.q() / k),
            std::pow(k, 1.0 - params.p() / k)};
  }
  if (form.alpha >= 2.0) {
    tail = {TailBehavior::Kind::Unknown, 0.0};
    return;
  }

  // E^g_{a,b}(-z) ~ sum_n (-1)^n (g)_n / n! / Gamma(b - a(g + n)) z^{-g-n}
  asym.resize(kAsymptoticTerms);
  double rising = 1.0;  // (g)_n / n!
  for (int n = 0; n < kAsymptoticTerms; ++n) {
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    asym[n] = sign * rising * reciprocal_gamma(form.beta - form.alpha * (form.gamma + n));
    rising *= (form.gamma + n) / (n + 1.0);
  }

  for (int n = 0; n < kAsymptoticTerms; ++n) {
    if (asym[n] != 0.0) asym_end = n + 1;
  }

  const bool unit_alpha = std::abs(form.alpha - 1.0) <= 1e-14;
  const double gap = form.beta - form.gamma;
  const bool nonpositive_integer_gap =
      gap <= 1e-12 && std::abs(gap - std::round(gap)) <= 1e-12 * std::max(1.0, std::abs(gap));
  if (unit_alpha && nonpositive_integer_gap) {
    tail = {TailBehavior::Kind::Exponential, 0.0};
  } else {
    tail = {TailBehavior::Kind::Unknown, 0.0};
    for (int n = 0; n < kAsymptoticTerms; ++n) {
      if (asym[n] != 0.0) {
        tail = {TailBehavior::Kind::Algebraic, form.gamma + n};
        break;
      }
    }
  }

  // Onset: first z of a geometric scan where two consecutive points pass.
  int passes = 0;
  for (double z = 4.0; z < 1e9; z *= 1.05) {
    if (expansion(z).accepted) {
      if (++passes == 2) {
        onset = z / form.argument_scale;
        break;
      }
    } else {
      passes = 0;
    }
  }
}

MittagLefflerK::State::Expansion MittagLefflerK::State::expansion(double z) const {
  Expansion out{0.0, std::numeric_limits<double>::infinity(), 0, false};
  if (asym.empty() || !(z > 0.0)) return out;

  const double scale = form.scale;
  double power = std::pow(z, -form.gamma);
  const double reference = std::abs(scale) * power;
  const double inv = 1.0 / z;
  double sum = 0.0;
  double last = std::numeric_limits<double>::infinity();
  double error = 0.0;
  bool stopped = false;
  for (int n = 0; n < kAsymptoticTerms; ++n, power *= inv) {
    if (asym[n] == 0.0) continue;
    const double term = scale * asym[n] * power;
    if (std::abs(term) > last) {
      error = last;  // optimal truncation: smallest term bounds the remainder
      stopped = true;
      break;
    }
    sum += term;
    last = std::abs(term);
    ++out.terms;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) {
      error = std::abs(term);
      stopped = true;
      break;
    }
  }
  if (!stopped) {
    // A terminating expansion (all later coefficients vanish) is exact up to
    // the exponentially small part.
    const bool terminating = asym_end + 8 <= kAsymptoticTerms;
    error = terminating || !std::isfinite(last) ? 0.0 : last;
  }

  if (form.alpha >= 1.0 - 1e-12) {
    // Exponentially small pieces from the poles of (s^alpha + z)^{-gamma}.
    const double zeta = std::pow(z, 1.0 / form.alpha);
    const double c = std::cos(M_PI / form.alpha);
    const double power_exp = std::abs(1.0 - form.beta) + form.alpha * std::abs(form.gamma - 1.0) + 1.0;
    const double amp = std::max(1.0, std::abs(reciprocal_gamma(form.gamma)));
    const double log_bound =
        std::log(std::abs(scale) / form.alpha * amp) + power_exp * std::log(zeta) + c * zeta;
    error += std::exp(std::min(log_bound, kLogMax));
  }

  out.value = sum;
  out.error = error;
  const double target = (sum != 0.0 ? std::abs(sum) : reference);
  out.accepted = std::isfinite(error) && error <= 1e-15 * target;
  return out;
}

void MittagLefflerK::State::ensure_quad() const {
  std::call_once(quad_once, [this] {
    const quad k = params.k();
    const quad p = params.p();
    const quad q = params.q();
    const quad r = params.r();
    log_coeff.resize(length);
    quad log_poch = 0;
    for (std::size_t j = 0; j < length; ++j) {
      const quad jq = static_cast<quad>(j);
      log_coeff[j] = log_poch - log_denominator_gamma_q(p * jq + q, params) - lgammaq(jq + 1);
      log_poch += logq(r + jq * k);
    }
    quad_ratio.resize(length);
    for (std::size_t j = 0; j + 1 < length; ++j) quad_ratio[j] = expq(log_coeff[j + 1] - log_coeff[j]);
  });
}

SeriesResult MittagLefflerK::State::sum_double(double x, double& rounding) const {
  // Neumaier-compensated running sum.
  double sum = c0;
  double comp = 0.0;
  double term = c0;
  double abs_sum = std::abs(c0);
  int small = 0;
  std::size_t used = 1;
  bool converged = false;
  for (std::size_t i = 0; i + 1 < length; ++i) {
    term *= x * ratio[i];
    const double t = sum + term;
    comp += (std::abs(sum) >= std::abs(term)) ? (sum - t) + term : (term - t) + sum;
    sum = t;
    abs_sum += std::abs(term);
    ++used;
    const double total = sum + comp;
    if (std::abs(term) <= cfg.rel_tol * std::abs(total) || term == 0.0) {
      if (++small >= 2) {
        converged = true;
        break;
      }
    } else {
      small = 0;
    }
  }
  const double value = sum + comp;
  if (!converged) {
    if (table_capped) throw ConvergenceError("Mittag-Leffler series did not converge within max_terms", value);
    if (used == 1 && length == 1) converged = true;
  }
  rounding = 2.0 * kEps * abs_sum;
  SeriesResult out;
  out.value = value;
  out.error_estimate = std::abs(term) + rounding;
  out.terms = static_cast<int>(used);
  out.method = SeriesMethod::Double;
  return out;
}

SeriesResult MittagLefflerK::State::sum_extended(double x) const {
  ensure_quad();
  if (x == 0.0) return {c0, 0.0, 1, SeriesMethod::Extended};
  const quad log_x = logq(static_cast<quad>(std::abs(x)));
  const bool alternating = x < 0.0;
  quad sum = 0;
  quad abs_sum = 0;
  quad last = 0;
  int small = 0;
  std::size_t used = 0;
  bool converged = false;
  const quad abs_x = fabsq(static_cast<quad>(x));
  quad magnitude = 0;
  for (std::size_t j = 0; j < length; ++j) {
    // Ratio recurrence, re-anchored on the log-coefficients every 32 terms so
    // that rounding stays within a few dozen quad ulps.
    magnitude = j % 32 == 0 ? expq(log_coeff[j] + static_cast<quad>(j) * log_x)
                            : magnitude * abs_x * quad_ratio[j - 1];
    quad term = magnitude;
    if (alternating && (j % 2 == 1)) term = -term;
    sum += term;
    abs_sum += fabsq(term);
    last = fabsq(term);
    ++used;
    if (j > 0 && last <= static_cast<quad>(cfg.rel_tol) * 1e-3 * fabsq(sum)) {
      if (++small >= 2) {
        converged = true;
        break;
      }
    } else {
      small = 0;
    }
  }
  const double value = static_cast<double>(sum);
  if (!converged && table_capped) {
    throw ConvergenceError("Mittag-Leffler series did not converge within max_terms", value);
  }
  SeriesResult out;
  out.value = value;
  out.error_estimate = static_cast<double>(last + abs_sum * 1e-32) + kEps * std::abs(value);
  out.terms = static_cast<int>(used);
  out.method = SeriesMethod::Extended;
  return out;
}

void MittagLefflerK::State::ensure_mp() const {
  std::call_once(mp_once, [this] {
    // Terms reach e^{log_peak} while the value can be as small as
    // e^{-log_peak} for exponential kernels, so those carry twice the peak in
    // bits. Algebraic kernels only decay like a power; the rounding term in the
    // error estimate still flags an unexpectedly small value.
    const double peak_bits = std::max(0.0, log_peak) / std::log(2.0);
    mp_bits = static_cast<mpfr_prec_t>(tail.kind != TailBehavior::Kind::Algebraic ? 96.0 + 2.0 * peak_bits
                                                                                     : 160.0 + peak_bits);
    mpfr_t k, p, q, r, a, lg, acc;
    for (auto* v : {&k, &p, &q, &r, &a, &lg, &acc}) mpfr_init2(*v, mp_bits);
    mpfr_set_d(k, params.k(), MPFR_RNDN);
    mpfr_set_d(p, params.p(), MPFR_RNDN);
    mpfr_set_d(q, params.q(), MPFR_RNDN);
    mpfr_set_d(r, params.r(), MPFR_RNDN);
    const bool kdeformed = params.mode() == GammaMode::KDeformed;
    mpfr_t log_k;
    mpfr_init2(log_k, mp_bits);
    mpfr_log(log_k, k, MPFR_RNDN);

    mp_coeff.resize(length);
    mpfr_set_zero(acc, 1);  // log (r)_{k,j} - log j!
    for (std::size_t j = 0; j < length; ++j) {
      // a = p j + q
      mpfr_mul_ui(a, p, j, MPFR_RNDN);
      mpfr_add(a, a, q, MPFR_RNDN);
      int sign = 0;
      if (kdeformed) {
        // log Gamma_k(a) = (a/k - 1) log k + lgamma(a/k)
        mpfr_div(a, a, k, MPFR_RNDN);
        mpfr_lgamma(lg, &sign, a, MPFR_RNDN);
        mpfr_sub_ui(a, a, 1, MPFR_RNDN);
        mpfr_mul(a, a, log_k, MPFR_RNDN);
        mpfr_add(lg, lg, a, MPFR_RNDN);
      } else {
        mpfr_lgamma(lg, &sign, a, MPFR_RNDN);
      }
      mpfr_init2(&mp_coeff[j], mp_bits);
      mpfr_sub(&mp_coeff[j], acc, lg, MPFR_RNDN);
      mpfr_exp(&mp_coeff[j], &mp_coeff[j], MPFR_RNDN);
      // acc += log(r + j k) - log(j + 1)
      mpfr_mul_ui(a, k, j, MPFR_RNDN);
      mpfr_add(a, a, r, MPFR_RNDN);
      mpfr_log(a, a, MPFR_RNDN);
      mpfr_add(acc, acc, a, MPFR_RNDN);
      mpfr_set_ui(a, j + 1, MPFR_RNDN);
      mpfr_log(a, a, MPFR_RNDN);
      mpfr_sub(acc, acc, a, MPFR_RNDN);
    }
    for (auto* v : {&k, &p, &q, &r, &a, &lg, &acc, &log_k}) mpfr_clear(*v);
  });
}

SeriesResult MittagLefflerK::State::sum_multiprecision(double x) const {
  ensure_mp();
  if (x == 0.0) return {c0, 0.0, 1, SeriesMethod::Multiprecision};
  // Terms can exceed the double range, so all bookkeeping stays in MPFR.
  mpfr_t sum, power, term, abs_sum, bar;
  for (auto* v : {&sum, &power, &term, &abs_sum, &bar}) mpfr_init2(*v, mp_bits);
  mpfr_set_zero(sum, 1);
  mpfr_set_zero(abs_sum, 1);
  mpfr_set_ui(power, 1, MPFR_RNDN);
  int small = 0;
  std::size_t used = 0;
  bool converged = false;
  for (std::size_t j = 0; j < length; ++j) {
    mpfr_mul(term, &mp_coeff[j], power, MPFR_RNDN);
    mpfr_add(sum, sum, term, MPFR_RNDN);
    mpfr_mul_d(power, power, x, MPFR_RNDN);
    mpfr_abs(term, term, MPFR_RNDN);
    mpfr_add(abs_sum, abs_sum, term, MPFR_RNDN);
    ++used;
    mpfr_mul_d(bar, sum, cfg.rel_tol * 1e-3, MPFR_RNDN);
    if (j > 0 && mpfr_cmpabs(term, bar) <= 0) {
      if (++small >= 2) {
        converged = true;
        break;
      }
    } else {
      small = 0;
    }
  }
  const double value = mpfr_get_d(sum, MPFR_RNDN);
  const double last = mpfr_get_d(term, MPFR_RNDN);
  mpfr_mul_2si(abs_sum, abs_sum, -static_cast<long>(mp_bits) + 4, MPFR_RNDN);
  const double rounding = mpfr_get_d(abs_sum, MPFR_RNDN);
  for (auto* v : {&sum, &power, &term, &abs_sum, &bar}) mpfr_clear(*v);
  if (!converged && table_capped) {
    throw ConvergenceError("Mittag-Leffler series did not converge within max_terms", value);
  }
  SeriesResult out;
  out.value = value;
  out.error_estimate = last + rounding + kEps * std::abs(value);
  out.terms = static_cast<int>(used);
  out.method = SeriesMethod::Multiprecision;
  return out;
}

MittagLefflerK::MittagLefflerK(const MLParams& params, const SeriesConfig& cfg,
                               std::optional<double> argument_bound) {
  cfg.validate();
  auto state = std::make_shared<State>(params, cfg);
  state->bound = argument_bound ? std::min(std::abs(*argument_bound), cfg.max_abs_argument)
                                : cfg.max_abs_argument;
  state->build_table();
  state->build_expansion();
  state_ = std::move(state);
}

const MLParams& MittagLefflerK::params() const noexcept { return state_->params; }
const SeriesConfig& MittagLefflerK::config() const noexcept { return state_->cfg; }
MittagLefflerK::Prabhakar MittagLefflerK::prabhakar() const noexcept { return state_->form; }
TailBehavior MittagLefflerK::tail_behavior() const noexcept { return state_->tail; }
double MittagLefflerK::asymptotic_onset() const noexcept { return state_->onset; }

SeriesResult MittagLefflerK::evaluate(double x) const {
  const State& s = *state_;
  if (!std::isfinite(x)) throw DomainError("Mittag-Leffler argument must be finite");
  if (x < 0.0 && s.cfg.large_argument_expansion && -x >= s.onset) {
    const auto e = s.expansion(-x * s.form.argument_scale);
    if (e.accepted) return {e.value, e.error, e.terms, SeriesMethod::Asymptotic};
  }
  if (std::abs(x) > s.cfg.max_abs_argument) {
    throw ArgumentRangeError("|x| = " + num(std::abs(x)) + " exceeds the series guard " +
                                 num(s.cfg.max_abs_argument) +
                                 "; reduce the argument range or raise working precision",
                             x);
  }
  if (std::abs(x) > s.bound * (1.0 + 1e-12)) {
    throw ArgumentRangeError("|x| = " + num(std::abs(x)) + " exceeds the evaluator's table bound " +
                                 num(s.bound),
                             x);
  }
  double rounding = 0.0;
  SeriesResult out = s.sum_double(x, rounding);
  // Cancellation: fall back to quad precision when rounding dominates.
  // Overflowed sums (inf, or NaN from inf - inf) escalate as well.
  const auto settled = [&](double err) {
    return std::isfinite(out.value) && err <= s.cfg.rel_tol * std::abs(out.value);
  };
  if (s.cfg.extended_precision && !settled(rounding)) {
    out = s.sum_extended(x);
    if (!settled(out.error_estimate)) out = s.sum_multiprecision(x);
  }
  return out;
}

SeriesResult mittag_leffler_k(double x, const MLParams& params, const SeriesConfig& cfg) {
  if (std::abs(x) > cfg.max_abs_argument && !(cfg.large_argument_expansion && x < 0.0)) {
    throw ArgumentRangeError("|x| = " + num(std::abs(x)) + " exceeds the series guard " +
                                 num(cfg.max_abs_argument) +
                                 "; reduce the argument range or raise working precision",
                             x);
  }
  const MittagLefflerK evaluator(params, cfg, std::abs(x));
  return evaluator.evaluate(x);
}

}  // namespace kfun
