#pragma once

// Beta-type distribution on (0, 1) whose density is the integrand of the
// extended beta k-function, normalized by its value.

#include <cstdint>
#include <vector>

#include "kfun/extfun.hpp"

namespace kfun {

/// Immutable once constructed; safe to share across threads.
class DistParams {
 public:
  /// l is the upper index of the Mittag-Leffler kernel E_{k,p,q}^l. Throws
  /// DomainError for bad parameters, a nonpositive normalizer, or a density
  /// that goes negative on a 1024-point grid over (0, 1).
  DistParams(double s, double t, double v, double l, double p, double q, double k,
             GammaMode mode = GammaMode::Classical, const QuadConfig& qcfg = default_quad());

  double s() const noexcept { return s_; }
  double t() const noexcept { return t_; }
  double v() const noexcept { return v_; }
  const MLParams& kernel_params() const noexcept { return kernel_.params(); }
  const MittagLefflerK& kernel() const noexcept { return kernel_; }
  const QuadConfig& quad() const noexcept { return qcfg_; }
  /// The extended beta k-function at (s, t, v).
  double normalizer() const noexcept { return normalizer_; }

  /// Tighter than the library default: the normalizer has to carry 1e-10.
  static QuadConfig default_quad();

 private:
  double s_, t_, v_;
  MittagLefflerK kernel_;
  QuadConfig qcfg_;
  double normalizer_ = 0.0;
};

double pdf(double x, const DistParams& d);
/// E[X^r] = beta(s + r k, t) / beta(s, t).
double moment(double r, const DistParams& d);
double mean(const DistParams& d);
double variance(const DistParams& d);
/// Sum_f E[X^f] y^f / f!, |y| <= 20. Throws ConvergenceError after max_terms.
double mgf(double y, const DistParams& d, int max_terms = 200);
double cdf(double y, const DistParams& d);
/// Solves cdf(x) = u to 1e-10 inside a shrinking bracket.
double quantile(double u, const DistParams& d);
/// Inverse-CDF draws from a seeded mt19937_64 stream.
std::vector<double> sample(std::size_t n, std::uint64_t seed, const DistParams& d);

}  // namespace kfun
