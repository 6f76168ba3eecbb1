#include "kfun/quad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kfun/errors.hpp"

namespace kfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kStep0 = 0.5;
constexpr int kMinLevels = 3;
constexpr int kMaxLevels = 12;
constexpr double kMaxT = 9.0;

// f(x, 1 - x) with both arguments accurate.
using UnitIntegrand = std::function<double(double, double)>;

struct Node {
  double x;
  double xc;
  double log_weight;  // log of pi cosh t * x^{alpha+1} * xc^{beta+1}
};

Node node_at(double t, double alpha, double beta) {
  const double s = M_PI * std::sinh(std::abs(t));
  const double e = std::exp(-s);
  const double small = e / (1.0 + e);
  const double big = 1.0 / (1.0 + e);
  const double log_small = -s - std::log1p(e);
  const double log_big = -std::log1p(e);
  Node n{};
  double log_x = 0.0;
  double log_xc = 0.0;
  if (t >= 0.0) {
    n.x = big;
    n.xc = small;
    log_x = log_big;
    log_xc = log_small;
  } else {
    n.x = small;
    n.xc = big;
    log_x = log_small;
    log_xc = log_big;
  }
  n.log_weight = std::log(M_PI * std::cosh(t)) + (alpha + 1.0) * log_x + (beta + 1.0) * log_xc;
  return n;
}

double term_at(const UnitIntegrand& f, double t, double alpha, double beta) {
  const Node n = node_at(t, alpha, beta);
  const double w = std::exp(n.log_weight);
  if (w == 0.0) return 0.0;
  return w * f(n.x, n.xc);
}

// Walk outward from the origin on the coarsest grid until the terms are
// negligible; returns the number of steps on that side.
int side_extent(const UnitIntegrand& f, double sign, double alpha, double beta, double& sum,
                double& l1) {
  const int max_steps = static_cast<int>(kMaxT / kStep0);
  int quiet = 0;
  int steps = 0;
  for (int i = 1; i <= max_steps; ++i) {
    const double t = sign * i * kStep0;
    const Node n = node_at(t, alpha, beta);
    const double w = std::exp(n.log_weight);
    steps = i;
    if (w == 0.0) break;
    const double term = w * f(n.x, n.xc);
    sum += term;
    l1 += std::abs(term);
    const double scale = std::max(l1, std::numeric_limits<double>::min());
    if (std::abs(term) <= 1e-18 * scale && n.log_weight <= std::log(scale) - 40.0) {
      if (++quiet >= 2) break;
    } else {
      quiet = 0;
    }
  }
  return steps;
}

EvalResult tanh_sinh(const UnitIntegrand& f, double alpha, double beta, const QuadConfig& cfg) {
  if (!(alpha > -1.0) || !(beta > -1.0)) {
    throw NonIntegrableError("endpoint exponents must exceed -1 (alpha=" + std::to_string(alpha) +
                             ", beta=" + std::to_string(beta) + ")");
  }
  cfg.validate();

  double sum = term_at(f, 0.0, alpha, beta);
  double l1 = std::abs(sum);
  const int right = side_extent(f, 1.0, alpha, beta, sum, l1);
  const int left = side_extent(f, -1.0, alpha, beta, sum, l1);
  const double t_hi = right * kStep0;
  const double t_lo = -left * kStep0;

  double h = kStep0;
  double estimate = h * sum;
  double previous = estimate;
  double diff = std::numeric_limits<double>::infinity();
  const int levels = std::min(cfg.max_subdivisions, kMaxLevels);

  EvalResult out;
  for (int level = 1; level <= levels; ++level) {
    h *= 0.5;
    // New nodes are the odd multiples of h inside [t_lo, t_hi].
    const long first = static_cast<long>(std::ceil(t_lo / h));
    const long last = static_cast<long>(std::floor(t_hi / h));
    for (long i = first; i <= last; ++i) {
      if ((i & 1L) == 0) continue;
      const double term = term_at(f, i * h, alpha, beta);
      sum += term;
      l1 += std::abs(term);
    }
    previous = estimate;
    estimate = h * sum;
    diff = std::abs(estimate - previous);
    out.subdivisions_used = level;
    const double floor = 8.0 * kEps * h * l1;
    const double err = std::max(diff, floor);
    if (!std::isfinite(estimate)) break;
    if (level >= kMinLevels && err <= cfg.tolerance_for(estimate)) {
      out.value = estimate;
      out.error_estimate = err;
      out.converged = true;
      return out;
    }
  }
  out.value = estimate;
  out.error_estimate = std::max(diff, 8.0 * kEps * h * l1);
  out.converged = false;
  if (!std::isfinite(estimate)) {
    out.diagnostics.emplace_back("non-finite-integrand");
  } else if (8.0 * kEps * h * l1 > cfg.tolerance_for(estimate)) {
    out.diagnostics.emplace_back("roundoff-limited");
  } else {
    out.diagnostics.emplace_back("max-subdivisions");
  }
  return out;
}

}  // namespace

void QuadConfig::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw DomainError("quadrature tolerances must be positive");
  if (max_subdivisions < 1) throw DomainError("max_subdivisions must be >= 1");
  if (!(semi_infinite_cutoff > 0.0)) throw DomainError("semi_infinite_cutoff must be positive");
}

double QuadConfig::tolerance_for(double value) const {
  return std::max(abs_tol, rel_tol * std::abs(value));
}

EvalResult& EvalResult::operator+=(const EvalResult& other) {
  value += other.value;
  error_estimate += other.error_estimate;
  subdivisions_used = std::max(subdivisions_used, other.subdivisions_used);
  converged = converged && other.converged;
  diagnostics.insert(diagnostics.end(), other.diagnostics.begin(), other.diagnostics.end());
  return *this;
}

EvalResult& EvalResult::operator*=(double factor) {
  value *= factor;
  error_estimate *= std::abs(factor);
  return *this;
}

EvalResult integrate_01_singular(const PointIntegrand& f, double alpha, double beta,
                                 const QuadConfig& cfg) {
  return tanh_sinh([&f](double x, double xc) { return f(Point{x, x, xc}); }, alpha, beta, cfg);
}

EvalResult integrate_01_singular(const Integrand& f, double alpha, double beta, const QuadConfig& cfg) {
  return tanh_sinh([&f](double x, double) { return f(x); }, alpha, beta, cfg);
}

EvalResult integrate_interval(const PointIntegrand& f, double a, double b, double alpha, double beta,
                              const QuadConfig& cfg) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("integrate_interval requires finite a < b");
  }
  const double width = b - a;
  EvalResult out = tanh_sinh(
      [&](double x, double xc) {
        const double from_a = width * x;
        const double to_b = width * xc;
        const double u = x <= 0.5 ? a + from_a : b - to_b;
        return f(Point{u, from_a, to_b});
      },
      alpha, beta, cfg);
  out *= std::pow(width, 1.0 + alpha + beta);
  return out;
}

EvalResult integrate_interval(const Integrand& f, double a, double b, double alpha, double beta,
                              const QuadConfig& cfg) {
  return integrate_interval(PointIntegrand([&f](const Point& p) { return f(p.x); }), a, b, alpha, beta,
                            cfg);
}

EvalResult integrate_0inf(const Integrand& g, const QuadConfig& cfg, const TailHint& tail,
                          double origin_exponent) {
  cfg.validate();
  const double a = origin_exponent;
  if (!(a > -1.0)) throw NonIntegrableError("origin exponent must exceed -1");
  const double A = cfg.semi_infinite_cutoff;
  const auto f = [&](double m) {
    const double gm = g(m);
    return (a == 0.0 || gm == 0.0) ? gm : std::pow(m, a) * gm;
  };

  // Decay exponent: from the hint, else from samples at A and 2A.
  const double fa = f(A);
  const double f2a = f(2.0 * A);
  std::optional<double> decay = tail.decay_exponent;
  if (!decay && fa != 0.0 && f2a != 0.0 && (fa > 0.0) == (f2a > 0.0)) {
    decay = std::log2(fa / f2a);
  }
  if (decay && !(*decay > 1.0)) {
    throw DivergenceError("integrand decays like m^-" + std::to_string(*decay) +
                          " at infinity; need exponent > 1");
  }
  // f(2A) == 0 means decay faster than any power; anything else without an
  // exponent is a sign change or growth we cannot model.
  if (!decay && f2a != 0.0) {
    throw DivergenceError("integrand does not decay between the tail samples");
  }

  EvalResult head = tanh_sinh([&](double x, double) { return A * g(A * x); }, a, 0.0, cfg);
  head *= std::pow(A, a);

  EvalResult rest;
  if (tail.model == TailModel::PowerLaw) {
    rest.converged = true;
    rest.diagnostics.emplace_back("tail-model");
    if (decay) {
      const double d = *decay;
      const double c = fa * std::pow(A, d);
      const double c2 = f2a * std::pow(2.0 * A, d);
      const double span = std::pow(A, 1.0 - d) / (d - 1.0);
      rest.value = c * span;
      rest.error_estimate = std::abs(c - c2) * span + std::abs(rest.value) / A;
    }
  } else {
    // m = A / w maps [A, inf) onto (0, 1]; w^{d-2} is absorbed into the weight.
    const double singular = (decay && *decay < 2.0) ? *decay - 2.0 : 0.0;
    rest = tanh_sinh(
        [&](double w, double) {
          if (w <= 0.0) return 0.0;
          const double m = A / w;
          if (!std::isfinite(m)) return 0.0;
          // A f(m) w^{-2-singular}, ordered so that f(m) = 0 never meets an overflow.
          const double fm = f(m);
          if (fm == 0.0) return 0.0;
          return A * (fm * (m / A)) * std::pow(m / A, 1.0 + singular);
        },
        singular, 0.0, cfg);
  }
  head += rest;
  return head;
}

}  // namespace kfun
