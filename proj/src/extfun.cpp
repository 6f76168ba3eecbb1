#include "kfun/extfun.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <string>
#include <tuple>

#include "kfun/errors.hpp"

namespace kfun {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// 1 - u for a node of an interval [a, b] inside [0, 1], accurate at both ends.
double complement(const Point& pt, double b) {
  return pt.from_lower <= pt.to_upper ? 1.0 - pt.x : (1.0 - b) + pt.to_upper;
}

MittagLefflerK beta_kernel(const ExtBetaArgs& args, const MLParams& params) {
  const SeriesConfig cfg;
  const double bound = args.v / std::pow(4.0, params.k());
  if (bound > cfg.max_abs_argument) {
    throw ArgumentRangeError("extended beta needs E at -v/4^k = -" + num(bound) +
                                 ", beyond the series guard " + num(cfg.max_abs_argument),
                             -bound);
  }
  return MittagLefflerK(params, cfg, bound);
}

}  // namespace

void ExtBetaArgs::validate() const {
  if (!(s > 0.0) || !(t > 0.0) || !(v >= 0.0) || !std::isfinite(s) || !std::isfinite(t) ||
      !std::isfinite(v)) {
    throw DomainError("extended beta requires s > 0, t > 0, v >= 0 (s=" + num(s) + ", t=" + num(t) +
                      ", v=" + num(v) + ")");
  }
}

MittagLefflerK half_line_evaluator(const MLParams& params, double rel_tol) {
  // Small-alpha kernels need multiprecision tables that take seconds to build;
  // repeated gamma and Mellin evaluations share them.
  using Key = std::tuple<double, double, double, double, int, double>;
  static std::mutex mutex;
  static std::map<Key, MittagLefflerK> cache;
  const Key key{params.k(), params.p(), params.q(), params.r(), static_cast<int>(params.mode()), rel_tol};
  {
    const std::lock_guard lock(mutex);
    if (const auto it = cache.find(key); it != cache.end()) return it->second;
  }

  SeriesConfig cfg;
  cfg.large_argument_expansion = true;
  const MittagLefflerK probe(params, cfg);
  const double onset = probe.asymptotic_onset();
  if (!std::isfinite(onset)) {
    throw DomainError("no large-argument expansion for this kernel (p/k or p >= 2); E(-m) is "
                      "unavailable on the whole half line");
  }
  cfg.max_terms = 20000;
  cfg.rel_tol = rel_tol;
  // The series only has to reach the onset; sizing it for more costs
  // e^{x^{1/alpha}} cancellation for small alpha.
  cfg.max_abs_argument = onset * 1.001;
  MittagLefflerK kernel(params, cfg);

  const std::lock_guard lock(mutex);
  if (cache.size() >= 256) cache.clear();
  return cache.emplace(key, std::move(kernel)).first->second;
}

double extended_gamma_strip_upper(const MLParams& params) {
  const TailBehavior tail = MittagLefflerK(params, SeriesConfig{}, 1.0).tail_behavior();
  switch (tail.kind) {
    case TailBehavior::Kind::Exponential:
      return std::numeric_limits<double>::infinity();
    case TailBehavior::Kind::Algebraic:
      return tail.exponent;
    case TailBehavior::Kind::Unknown:
      break;
  }
  throw DomainError("decay of E(-m) is unknown for this kernel; pass an explicit tail-decay override");
}

EvalResult extended_gamma_k(const ExtGammaArgs& args, const MLParams& params, const QuadConfig& qcfg,
                            const ExtGammaOptions& options) {
  const double s = args.s;
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("extended gamma requires s > 0");

  if (options.tail_decay_override) {
    const double d = *options.tail_decay_override;
    if (!(s < d)) {
      throw DomainError("s=" + num(s) + " outside the strip 0 < s < " + num(d) + " of the given tail decay");
    }
    SeriesConfig cfg;
    cfg.max_abs_argument = std::max(cfg.max_abs_argument, 2.0 * qcfg.semi_infinite_cutoff);
    const MittagLefflerK kernel(params, cfg);
    return integrate_0inf([&](double m) { return kernel(-m); }, qcfg,
                          TailHint{d - s + 1.0, TailModel::PowerLaw}, s - 1.0);
  }

  const double upper = extended_gamma_strip_upper(params);
  if (!(s < upper)) {
    throw DomainError("s=" + num(s) + " outside the convergence strip 0 < s < " + num(upper));
  }
  const MittagLefflerK kernel = half_line_evaluator(params);
  TailHint hint;
  if (std::isfinite(upper)) hint.decay_exponent = upper - s + 1.0;
  return integrate_0inf([&](double m) { return kernel(-m); }, qcfg, hint, s - 1.0);
}

double extended_gamma_closed_form_claimed(double s, const MLParams& params) {
  const double k = params.k();
  const double p = params.p();
  const double args[4] = {s + 1.0, 1.0 - (s + 1.0), params.r() - p * (1.0 + s), params.q() - p * (1.0 + s)};
  double g[4];
  for (int i = 0; i < 4; ++i) {
    try {
      g[i] = k_gamma_continued(args[i], k);
    } catch (const PoleError&) {
      throw PoleError("claimed closed form: gamma factor " + std::to_string(i) + " has a pole at " +
                          num(args[i]),
                      i);
    }
  }
  return g[0] * g[1] / (g[2] * g[3]);
}

EvalResult extended_beta_k(const ExtBetaArgs& args, const MLParams& params, const QuadConfig& qcfg) {
  args.validate();
  return extended_beta_k(args, beta_kernel(args, params), qcfg);
}

EvalResult extended_beta_k(const ExtBetaArgs& args, const MittagLefflerK& kernel, const QuadConfig& qcfg) {
  args.validate();
  const double k = kernel.params().k();
  const double v = args.v;
  EvalResult out = integrate_01_singular(
      PointIntegrand([&](const Point& pt) { return kernel(-v * std::pow(pt.from_lower * pt.to_upper, k)); }),
      args.s / k - 1.0, args.t / k - 1.0, qcfg);
  out *= 1.0 / k;
  return out;
}

EvalResult incomplete_extended_beta_k(double y, const ExtBetaArgs& args, const MLParams& params,
                                      const QuadConfig& qcfg) {
  args.validate();
  return incomplete_extended_beta_k(y, args, beta_kernel(args, params), qcfg);
}

EvalResult incomplete_extended_beta_k(double y, const ExtBetaArgs& args, const MittagLefflerK& kernel,
                                      const QuadConfig& qcfg) {
  args.validate();
  if (!(y >= 0.0 && y <= 1.0)) throw DomainError("incomplete beta needs 0 <= y <= 1 (y=" + num(y) + ")");
  if (y == 0.0) return EvalResult{0.0, 0.0, 0, true, {}};
  if (y == 1.0) return extended_beta_k(args, kernel, qcfg);
  const double k = kernel.params().k();
  const double v = args.v;
  const double b = args.t / k - 1.0;
  EvalResult out = integrate_interval(
      PointIntegrand([&](const Point& pt) {
        const double u = pt.from_lower;
        const double uc = complement(pt, y);
        return std::pow(uc, b) * kernel(-v * std::pow(u * uc, k));
      }),
      0.0, y, args.s / k - 1.0, 0.0, qcfg);
  out *= 1.0 / k;
  return out;
}

EvalResult upper_extended_beta_k(double y, const ExtBetaArgs& args, const MittagLefflerK& kernel,
                                 const QuadConfig& qcfg) {
  args.validate();
  if (!(y >= 0.0 && y <= 1.0)) throw DomainError("incomplete beta needs 0 <= y <= 1 (y=" + num(y) + ")");
  if (y == 1.0) return EvalResult{0.0, 0.0, 0, true, {}};
  if (y == 0.0) return extended_beta_k(args, kernel, qcfg);
  const double k = kernel.params().k();
  const double v = args.v;
  const double a = args.s / k - 1.0;
  EvalResult out = integrate_interval(
      PointIntegrand([&](const Point& pt) {
        const double u = pt.x;
        const double uc = pt.to_upper;
        return std::pow(u, a) * kernel(-v * std::pow(u * uc, k));
      }),
      y, 1.0, 0.0, args.t / k - 1.0, qcfg);
  out *= 1.0 / k;
  return out;
}

}  // namespace kfun
