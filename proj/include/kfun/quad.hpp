#pragma once

// Deterministic double-exponential (tanh-sinh) quadrature for integrals with
// algebraic endpoint singularities, plus a semi-infinite driver.

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace kfun {

struct QuadConfig {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  /// Maximum number of step-halving refinements of the trapezoidal grid.
  /// Values above 12 are clamped; each refinement doubles the node count.
  int max_subdivisions = 200;
  /// Split point A of integrals over [0, inf).
  double semi_infinite_cutoff = 50.0;

  void validate() const;
  double tolerance_for(double value) const;
};

struct EvalResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int subdivisions_used = 0;
  bool converged = false;
  std::vector<std::string> diagnostics;

  /// Sum of two independent results; diagnostics are concatenated.
  EvalResult& operator+=(const EvalResult& other);
  EvalResult& operator*=(double factor);
};

/// A quadrature node given with its exact distances to both interval ends, so
/// that integrands can evaluate endpoint factors without cancellation.
struct Point {
  double x;           ///< abscissa in the original coordinates
  double from_lower;  ///< x - a, to full relative precision
  double to_upper;    ///< b - x, to full relative precision
};

using Integrand = std::function<double(double)>;
using PointIntegrand = std::function<double(const Point&)>;

/// Int_0^1 x^alpha (1-x)^beta f(x) dx with alpha, beta > -1.
EvalResult integrate_01_singular(const PointIntegrand& f, double alpha, double beta,
                                 const QuadConfig& cfg = {});
EvalResult integrate_01_singular(const Integrand& f, double alpha, double beta,
                                 const QuadConfig& cfg = {});

/// Int_a^b (u-a)^alpha (b-u)^beta f(u) du via the affine map onto [0, 1].
EvalResult integrate_interval(const PointIntegrand& f, double a, double b, double alpha, double beta,
                              const QuadConfig& cfg = {});
EvalResult integrate_interval(const Integrand& f, double a, double b, double alpha, double beta,
                              const QuadConfig& cfg = {});

enum class TailModel {
  /// Integrate [A, inf) exactly via m = A / w on (0, 1]; f must be evaluable
  /// at arbitrarily large m.
  Quadrature,
  /// Replace [A, inf) by c m^{-d} with c fitted at A and 2A.
  PowerLaw,
};

struct TailHint {
  /// d with f(m) = O(m^{-d}); estimated from f(A), f(2A) when absent.
  std::optional<double> decay_exponent;
  TailModel model = TailModel::Quadrature;
};

/// Int_0^inf m^a f(m) dm split at cfg.semi_infinite_cutoff, a = origin_exponent
/// > -1. Throws DivergenceError when the (given or sampled) decay exponent of
/// the whole integrand is <= 1.
EvalResult integrate_0inf(const Integrand& f, const QuadConfig& cfg = {}, const TailHint& tail = {},
                          double origin_exponent = 0.0);

}  // namespace kfun
