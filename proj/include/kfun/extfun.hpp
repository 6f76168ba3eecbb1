#pragma once

// Extended gamma and beta k-functions built on the Mittag-Leffler k-function,
// and the incomplete extended beta k-function.

#include <optional>

#include "kfun/kcore.hpp"
#include "kfun/quad.hpp"

namespace kfun {

struct ExtBetaArgs {
  double s;
  double t;
  double v;

  /// s > 0, t > 0, v >= 0, all finite.
  void validate() const;
};

struct ExtGammaArgs {
  double s;
};

/// Evaluator for E_{k,p,q}^r(-x) on the whole half line x >= 0: the series up
/// to the onset of the large-argument expansion, the expansion beyond it.
/// `rel_tol` is the series target (SeriesConfig::rel_tol). Throws DomainError
/// when no expansion exists (p/k or p at least 2).
MittagLefflerK half_line_evaluator(const MLParams& params, double rel_tol = 1e-14);

/// Range 0 < s < upper in which Int_0^inf m^{s-1} E(-m) dm converges.
/// upper = the algebraic decay exponent of E(-m), +inf for exponential
/// kernels. Throws DomainError when the decay is unknown.
double extended_gamma_strip_upper(const MLParams& params);

struct ExtGammaOptions {
  /// Bypass the strip check: integrate [0, A] by series and model the tail as
  /// c m^{-d} with this d. For kernels without a known expansion.
  std::optional<double> tail_decay_override;
};

/// Int_0^inf m^{s-1} E_{k,p,q}^r(-m) dm.
EvalResult extended_gamma_k(const ExtGammaArgs& args, const MLParams& params, const QuadConfig& qcfg = {},
                            const ExtGammaOptions& options = {});

/// The closed form printed for the extended gamma function, evaluated as is:
///   Gamma_k(s+1) Gamma_k(1-(s+1)) / (Gamma_k(r-p(1+s)) Gamma_k(q-p(1+s))).
/// Not a trusted evaluator. Throws PoleError with the factor index 0..3 in the
/// order written (two numerator factors, then two denominator factors).
double extended_gamma_closed_form_claimed(double s, const MLParams& params);

/// (1/k) Int_0^1 m^{s/k-1} (1-m)^{t/k-1} E_{k,p,q}^r(-v m^k (1-m)^k) dm.
EvalResult extended_beta_k(const ExtBetaArgs& args, const MLParams& params, const QuadConfig& qcfg = {});
/// Same, with a caller-supplied evaluator that must cover |x| <= v / 4^k.
EvalResult extended_beta_k(const ExtBetaArgs& args, const MittagLefflerK& kernel,
                           const QuadConfig& qcfg = {});

/// (1/k) Int_0^y u^{s/k-1} (1-u)^{t/k-1} E(-v u^k (1-u)^k) du, 0 <= y <= 1.
EvalResult incomplete_extended_beta_k(double y, const ExtBetaArgs& args, const MLParams& params,
                                      const QuadConfig& qcfg = {});
EvalResult incomplete_extended_beta_k(double y, const ExtBetaArgs& args, const MittagLefflerK& kernel,
                                      const QuadConfig& qcfg = {});

/// (1/k) Int_y^1 of the same integrand; accurate when y is close to 1.
EvalResult upper_extended_beta_k(double y, const ExtBetaArgs& args, const MittagLefflerK& kernel,
                                 const QuadConfig& qcfg = {});

}  // namespace kfun
