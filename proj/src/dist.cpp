#include "kfun/dist.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "kfun/errors.hpp"

namespace kfun {

namespace {

constexpr int kGrid = 1024;
constexpr double kQuantileTol = 1e-10;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

MittagLefflerK make_kernel(double s, double t, double v, const MLParams& params) {
  ExtBetaArgs{s, t, v}.validate();
  const SeriesConfig cfg;
  const double bound = v / std::pow(4.0, params.k());
  if (bound > cfg.max_abs_argument) {
    throw DomainError("density needs E at -v/4^k = -" + num(bound) + ", beyond the series guard " +
                      num(cfg.max_abs_argument));
  }
  return MittagLefflerK(params, cfg, bound);
}

// beta(s + ds, t + dt) with the distribution's kernel.
double shifted_beta(const DistParams& d, double ds, double dt) {
  const EvalResult r = extended_beta_k({d.s() + ds, d.t() + dt, d.v()}, d.kernel(), d.quad());
  if (!r.converged) throw ConvergenceError("extended beta did not converge", r.value);
  return r.value;
}

}  // namespace

QuadConfig DistParams::default_quad() {
  QuadConfig q;
  q.rel_tol = 1e-12;
  q.abs_tol = 1e-14;
  return q;
}

DistParams::DistParams(double s, double t, double v, double l, double p, double q, double k, GammaMode mode,
                       const QuadConfig& qcfg)
    : s_(s), t_(t), v_(v), kernel_(make_kernel(s, t, v, MLParams(k, p, q, l, mode))), qcfg_(qcfg) {
  qcfg_.validate();
  const EvalResult norm = extended_beta_k({s, t, v}, kernel_, qcfg_);
  normalizer_ = norm.value;
  if (!norm.converged || !(normalizer_ > 0.0) || !std::isfinite(normalizer_)) {
    throw DomainError("normalizer beta(s, t) = " + num(normalizer_) + " is not a positive finite number");
  }
  // The kernel factor alone decides the sign.
  for (int i = 0; i < kGrid; ++i) {
    const double x = (i + 0.5) / kGrid;
    const double e = kernel_(-v * std::pow(x * (1.0 - x), k));
    if (e < 0.0) {
      throw DomainError("density is negative at x = " + num(x) + " (Mittag-Leffler factor " + num(e) +
                        "); v = " + num(v) + " is too large for these kernel parameters");
    }
  }
}

double pdf(double x, const DistParams& d) {
  if (!(x > 0.0 && x < 1.0)) return 0.0;
  const double k = d.kernel_params().k();
  const double xc = 1.0 - x;
  const double e = d.kernel()(-d.v() * std::pow(x * xc, k));
  return std::pow(x, d.s() / k - 1.0) * std::pow(xc, d.t() / k - 1.0) * e / (k * d.normalizer());
}

double moment(double r, const DistParams& d) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("moment order must be finite and >= 0");
  if (r == 0.0) return 1.0;
  return shifted_beta(d, r * d.kernel_params().k(), 0.0) / d.normalizer();
}

double mean(const DistParams& d) { return moment(1.0, d); }

double variance(const DistParams& d) {
  const double k = d.kernel_params().k();
  const double b0 = d.normalizer();
  const double b1 = shifted_beta(d, k, 0.0);
  const double b2 = shifted_beta(d, 2.0 * k, 0.0);
  const double var = (b2 * b0 - b1 * b1) / (b0 * b0);
  if (var >= 0.0) return var;
  if (var > -1e-12) return 0.0;
  throw Error("variance " + num(var) + " is negative beyond round-off");
}

double mgf(double y, const DistParams& d, int max_terms) {
  if (!(std::abs(y) <= 20.0)) throw DomainError("mgf needs |y| <= 20 (y=" + num(y) + ")");
  if (y == 0.0) return 1.0;
  // For y < 0 expand e^{yX} = e^y e^{-y(1-X)}: 1 - X has s and t swapped, and
  // all terms are positive instead of alternating.
  const bool reflect = y < 0.0;
  const double z = std::abs(y);
  const double k = d.kernel_params().k();
  double sum = 1.0;
  double power = 1.0;  // z^f / f!
  for (int f = 1; f <= max_terms; ++f) {
    power *= z / f;
    const double b = reflect ? shifted_beta(d, 0.0, f * k) : shifted_beta(d, f * k, 0.0);
    const double term = power * b / d.normalizer();
    sum += term;
    if (term <= 1e-15 * sum) return reflect ? std::exp(y) * sum : sum;
  }
  throw ConvergenceError("mgf series did not converge in " + std::to_string(max_terms) + " terms", sum);
}

double cdf(double y, const DistParams& d) {
  if (!(y > 0.0)) return 0.0;
  if (y >= 1.0) return 1.0;
  const ExtBetaArgs args{d.s(), d.t(), d.v()};
  double value;
  // Integrate over the shorter side so that the result keeps its precision
  // near both ends.
  if (y <= 0.5) {
    value = incomplete_extended_beta_k(y, args, d.kernel(), d.quad()).value / d.normalizer();
  } else {
    value = 1.0 - upper_extended_beta_k(y, args, d.kernel(), d.quad()).value / d.normalizer();
  }
  return std::clamp(value, 0.0, 1.0);
}

double quantile(double u, const DistParams& d) {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("quantile needs 0 < u < 1 (u=" + num(u) + ")");
  // Newton steps that stay inside the bracket, bisection otherwise.
  double lo = 0.0, hi = 1.0, x = 0.5;
  for (int it = 0; it < 200; ++it) {
    const double F = cdf(x, d) - u;
    if (std::abs(F) <= kQuantileTol) return x;
    (F < 0.0 ? lo : hi) = x;
    const double f = pdf(x, d);
    double next = f > 0.0 ? x - F / f : lo;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == x) break;
    x = next;
  }
  throw ConvergenceError("quantile bisection did not reach 1e-10 at u=" + num(u), x);
}

std::vector<double> sample(std::size_t n, std::uint64_t seed, const DistParams& d) {
  std::mt19937_64 gen(seed);
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    // 53 random bits centred in their cell: u in (0, 1), identical everywhere.
    const double u = (static_cast<double>(gen() >> 11) + 0.5) * 0x1p-53;
    out.push_back(quantile(u, d));
  }
  return out;
}

}  // namespace kfun
