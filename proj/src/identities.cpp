#include "kfun/identities.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

#include <boost/math/special_functions/gamma.hpp>
#include <json.hpp>

#include "kfun/errors.hpp"

namespace kfun {

namespace {

// One side of an identity: value with its error, or the reason it is missing.
struct Side {
  double value = std::numeric_limits<double>::quiet_NaN();
  double error = 0.0;
  bool converged = false;
  std::string failure;
};

Side from(const EvalResult& r) {
  Side s{r.value, r.error_estimate, r.converged, {}};
  if (!r.converged) s.failure = r.diagnostics.empty() ? "quadrature did not converge" : r.diagnostics.front();
  return s;
}

Side exact(double value) { return Side{value, 0.0, std::isfinite(value), std::isfinite(value) ? "" : "non-finite"}; }

template <class F>
Side attempt(F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    Side s;
    s.failure = e.what();
    return s;
  }
}

std::map<std::string, InputValue> param_inputs(const MLParams& p) {
  return {{"k", p.k()}, {"p", p.p()}, {"q", p.q()}, {"r", p.r()}, {"mode", std::string(to_string(p.mode()))}};
}

std::map<std::string, InputValue> beta_inputs(const ExtBetaArgs& a, const MLParams& p) {
  auto in = param_inputs(p);
  in["s"] = a.s;
  in["t"] = a.t;
  in["v"] = a.v;
  return in;
}

// Absolute level below which a value counts as zero when both sides are.
constexpr double kZeroFloor = 1e-11;

IdentityReport finish(IdentityReport rep, const Side& lhs, const Side& rhs, double tol) {
  rep.lhs = lhs.value;
  rep.rhs = rhs.value;
  rep.lhs_error = lhs.error;
  rep.rhs_error = rhs.error;
  rep.tolerance = tol;
  rep.abs_diff = std::abs(lhs.value - rhs.value);
  const double scale = std::max(std::abs(lhs.value), std::abs(rhs.value));
  rep.rel_diff = scale == 0.0 ? 0.0 : rep.abs_diff / scale;
  if (!lhs.failure.empty()) rep.notes.push_back("lhs: " + lhs.failure);
  if (!rhs.failure.empty()) rep.notes.push_back("rhs: " + rhs.failure);
  if (!lhs.converged || !rhs.converged || !std::isfinite(rep.rel_diff)) {
    rep.verdict = Verdict::Inconclusive;
  } else if (rep.rel_diff <= tol) {
    rep.verdict = Verdict::Holds;
  } else if (scale <= kZeroFloor + 10.0 * (lhs.error + rhs.error)) {
    // Both sides are zero to within their errors (e.g. a 1/Gamma at a pole):
    // the relative difference of two round-off residues carries no signal.
    rep.verdict = rep.abs_diff <= kZeroFloor + 10.0 * (lhs.error + rhs.error) ? Verdict::Holds : Verdict::Fails;
    rep.notes.push_back("both sides vanish; judged on the absolute difference");
  } else {
    rep.verdict = Verdict::Fails;
  }
  return rep;
}

IdentityReport make(IdentityId id, std::map<std::string, InputValue> inputs, std::string lhs_source,
                    std::string rhs_source, bool asserted = true) {
  IdentityReport r;
  r.id = id;
  r.inputs = std::move(inputs);
  r.lhs_source = std::move(lhs_source);
  r.rhs_source = std::move(rhs_source);
  r.asserted = asserted;
  return r;
}

// Kernel covering |x| <= v / 4^k, shared by every beta evaluation at one v.
MittagLefflerK beta_kernel(double v, const MLParams& params) {
  const SeriesConfig cfg;
  const double bound = v / std::pow(4.0, params.k());
  if (bound > cfg.max_abs_argument) {
    throw ArgumentRangeError("E needed at -v/4^k beyond the series guard", -bound);
  }
  return MittagLefflerK(params, cfg, bound);
}

// Checks against a lazily constructed shared kernel (construction may throw).
struct BetaPoint {
  ExtBetaArgs args;
  MLParams params;
  QuadConfig qcfg;
  std::optional<MittagLefflerK> kernel;
  std::string kernel_failure;

  BetaPoint(const ExtBetaArgs& a, const MLParams& p, const QuadConfig& q) : args(a), params(p), qcfg(q) {
    try {
      a.validate();
      kernel.emplace(beta_kernel(a.v, p));
    } catch (const std::exception& e) {
      kernel_failure = e.what();
    }
  }

  template <class F>
  Side run(F&& f) const {
    if (!kernel) {
      Side s;
      s.failure = kernel_failure;
      return s;
    }
    return attempt([&] { return from(f(*kernel)); });
  }

  Side beta(double s, double t) const {
    return run([&](const MittagLefflerK& E) { return extended_beta_k({s, t, args.v}, E, qcfg); });
  }
};

IdentityReport functional_relation(const BetaPoint& pt, double shift, IdentityId id, double tol) {
  const auto& a = pt.args;
  const bool literal = id == IdentityId::FunctionalRelationPaperLiteral;
  auto rep = make(id, beta_inputs(a, pt.params),
                  literal ? "beta(s, t+1) + beta(s+1, t) by quadrature" : "beta(s, t+k) + beta(s+k, t) by quadrature",
                  "beta(s, t) by quadrature", !literal);
  const Side x = pt.beta(a.s, a.t + shift), y = pt.beta(a.s + shift, a.t), z = pt.beta(a.s, a.t);
  Side lhs;
  lhs.value = x.value + y.value;
  lhs.error = x.error + y.error;
  lhs.converged = x.converged && y.converged;
  lhs.failure = !x.failure.empty() ? x.failure : y.failure;
  return finish(std::move(rep), lhs, z, tol);
}

IdentityReport symmetry(const BetaPoint& pt, double tol) {
  auto rep = make(IdentityId::Symmetry, beta_inputs(pt.args, pt.params), "beta(s, t) by quadrature",
                  "beta(t, s) by quadrature");
  return finish(std::move(rep), pt.beta(pt.args.s, pt.args.t), pt.beta(pt.args.t, pt.args.s), tol);
}

std::map<std::string, InputValue> repr_inputs(const Representation& r, const BetaPoint& pt) {
  auto in = beta_inputs(pt.args, pt.params);
  for (const auto& [key, value] : representation_payload(r)) in[key] = value;
  return in;
}

IdentityReport representation(const Representation& r, const BetaPoint& pt, const Side& direct, double tol) {
  auto rep = make(IdentityId::ReprEquivalence, repr_inputs(r, pt), "corrected representation by quadrature",
                  "defining integral by quadrature");
  rep.subject = representation_name(r);
  const Side lhs = pt.run([&](const MittagLefflerK& E) { return eval_representation(r, pt.args, E, pt.qcfg); });
  return finish(std::move(rep), lhs, direct, tol);
}

IdentityReport invariance(const Representation& r, const Representation& reference, const BetaPoint& pt,
                          const Side& ref_side, double tol) {
  auto in = repr_inputs(r, pt);
  for (const auto& [key, value] : representation_payload(reference)) in["ref_" + key] = value;
  auto rep = make(IdentityId::ReprParameterInvariance, std::move(in), "representation at the free parameters",
                  "same representation at the ref_* parameters");
  rep.subject = representation_name(r);
  const Side lhs = pt.run([&](const MittagLefflerK& E) { return eval_representation(r, pt.args, E, pt.qcfg); });
  return finish(std::move(rep), lhs, ref_side, tol);
}

IdentityReport literal_representation(const Representation& r, const BetaPoint& pt, const Side& direct,
                                      double tol) {
  auto rep = make(IdentityId::ReprPaperLiteral, repr_inputs(r, pt), "printed representation by quadrature",
                  "defining integral by quadrature", false);
  rep.subject = representation_name(r);
  const Side lhs = attempt([&] { return from(paper_literal_representation(r, pt.args, pt.params, pt.qcfg)); });
  return finish(std::move(rep), lhs, direct, tol);
}

// Free-parameter sweeps: the first entry of each list is the reference.
std::vector<std::vector<Representation>> invariance_families() {
  return {
      {rep::Power{1}, rep::Power{2}, rep::Power{3}, rep::Power{5}},
      {rep::ScaledInterval{1}, rep::ScaledInterval{0.5}, rep::ScaledInterval{4}},
      {rep::RationalMap{1}, rep::RationalMap{0.25}, rep::RationalMap{3}},
      {rep::ScaledHalfLine{1, 1}, rep::ScaledHalfLine{2, 3}, rep::ScaledHalfLine{0.5, 5}},
      {rep::TanSquared{1, 1}, rep::TanSquared{2, 3}, rep::TanSquared{0.5, 5}},
      {rep::TwoParameter{1, 1}, rep::TwoParameter{2, 3}, rep::TwoParameter{0.5, 5}},
      {rep::ShiftedTwoParameter{1, 0}, rep::ShiftedTwoParameter{2, -1.5}, rep::ShiftedTwoParameter{0.5, 4}},
      {rep::Interval{0, 1}, rep::Interval{-1, 1}, rep::Interval{2, 7}},
  };
}

// Catalog with one representative payload per variant.
std::vector<Representation> catalog() {
  return {rep::Direct{},       rep::Trig{},         rep::Power{2},
          rep::ScaledInterval{2}, rep::RationalMap{0.5}, rep::HalfLine{},
          rep::SymmetrizedHalfLine{}, rep::ScaledHalfLine{2, 3}, rep::TanSquared{2, 3},
          rep::TwoParameter{2, 3}, rep::ShiftedTwoParameter{2, 1}, rep::Interval{-1, 2},
          rep::SymmetricInterval{}};
}

std::vector<IdentityReport> beta_point_checks(const ExtBetaArgs& a, const MLParams& p, const QuadConfig& q,
                                              bool representations) {
  const BetaPoint pt(a, p, q);
  std::vector<IdentityReport> out;
  out.push_back(symmetry(pt, 1e-10));
  out.push_back(functional_relation(pt, p.k(), IdentityId::FunctionalRelation, 1e-9));
  out.push_back(functional_relation(pt, 1.0, IdentityId::FunctionalRelationPaperLiteral, 1e-9));
  if (!representations) return out;
  const Side direct = pt.beta(a.s, a.t);
  for (const auto& r : catalog()) out.push_back(representation(r, pt, direct, 1e-7));
  for (const auto& family : invariance_families()) {
    const Side ref =
        pt.run([&](const MittagLefflerK& E) { return eval_representation(family.front(), a, E, q); });
    for (std::size_t i = 1; i < family.size(); ++i) out.push_back(invariance(family[i], family.front(), pt, ref, 1e-8));
  }
  for (const auto& r : catalog()) {
    if (!std::holds_alternative<rep::Direct>(r)) out.push_back(literal_representation(r, pt, direct, 1e-7));
  }
  return out;
}

// Two-parameter series sum_j (1)_{k,j} x^j / (Gamma(pj + 1) j!), summed on its
// own (log-space terms, no shared code with the library's evaluator).
Side two_parameter_series(double x, double k, double p) {
  if (x == 0.0) return Side{1.0, 0.0, true, {}};
  const double lg0 = std::lgamma(1.0 / k);
  double sum = 0.0, comp = 0.0, peak = 0.0;
  for (int j = 0; j < 2000; ++j) {
    double term = 1.0;
    if (j > 0) {
      const double lt = j * std::log(std::abs(x) * k) + std::lgamma(1.0 / k + j) - lg0 - std::lgamma(p * j + 1.0) -
                        std::lgamma(j + 1.0);
      term = std::exp(lt) * ((x < 0 && j % 2) ? -1.0 : 1.0);
    }
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    peak = std::max(peak, std::abs(term));
    if (j > 4 && std::abs(term) < 1e-17 * std::abs(sum)) {
      return Side{sum, 4 * std::numeric_limits<double>::epsilon() * peak * j, true, {}};
    }
  }
  Side s;
  s.failure = "two-parameter series did not converge";
  return s;
}

}  // namespace

std::string_view to_string(IdentityId id) {
  switch (id) {
    case IdentityId::FunctionalRelation: return "FunctionalRelation";
    case IdentityId::FunctionalRelationPaperLiteral: return "FunctionalRelationPaperLiteral";
    case IdentityId::Symmetry: return "Symmetry";
    case IdentityId::MellinPaperLiteral: return "MellinPaperLiteral";
    case IdentityId::MellinCorrected: return "MellinCorrected";
    case IdentityId::Lemma23PaperLiteral: return "Lemma23PaperLiteral";
    case IdentityId::Remark22: return "Remark22";
    case IdentityId::Remark25: return "Remark25";
    case IdentityId::ReprEquivalence: return "ReprEquivalence";
    case IdentityId::ReprParameterInvariance: return "ReprParameterInvariance";
    case IdentityId::ReprPaperLiteral: return "ReprPaperLiteral";
  }
  return "?";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "Holds";
    case Verdict::Fails: return "Fails";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::string IdentityReport::label() const {
  std::string out(to_string(id));
  if (!subject.empty()) out += "(" + subject + ")";
  return out;
}

IdentityReport check_functional_relation(const ExtBetaArgs& args, const MLParams& params, double tol,
                                         const QuadConfig& qcfg) {
  return functional_relation(BetaPoint(args, params, qcfg), params.k(), IdentityId::FunctionalRelation, tol);
}

IdentityReport check_functional_relation_literal(const ExtBetaArgs& args, const MLParams& params, double tol,
                                                 const QuadConfig& qcfg) {
  return functional_relation(BetaPoint(args, params, qcfg), 1.0, IdentityId::FunctionalRelationPaperLiteral, tol);
}

IdentityReport check_symmetry(const ExtBetaArgs& args, const MLParams& params, double tol, const QuadConfig& qcfg) {
  return symmetry(BetaPoint(args, params, qcfg), tol);
}

IdentityReport check_representation(const Representation& rep, const ExtBetaArgs& args, const MLParams& params,
                                    double tol, const QuadConfig& qcfg) {
  const BetaPoint pt(args, params, qcfg);
  return representation(rep, pt, pt.beta(args.s, args.t), tol);
}

IdentityReport check_representation_invariance(const Representation& rep, const Representation& reference,
                                               const ExtBetaArgs& args, const MLParams& params, double tol,
                                               const QuadConfig& qcfg) {
  const BetaPoint pt(args, params, qcfg);
  const Side ref = pt.run([&](const MittagLefflerK& E) { return eval_representation(reference, args, E, qcfg); });
  return invariance(rep, reference, pt, ref, tol);
}

IdentityReport check_representation_literal(const Representation& rep, const ExtBetaArgs& args,
                                            const MLParams& params, double tol, const QuadConfig& qcfg) {
  const BetaPoint pt(args, params, qcfg);
  return literal_representation(rep, pt, pt.beta(args.s, args.t), tol);
}

EvalResult mellin_transform_numeric(const ExtBetaArgs& args, double g, const MLParams& params,
                                    const QuadConfig& qcfg) {
  const double k = params.k(), s = args.s, t = args.t;
  if (!(g > 0.0) || !(s - k * k * g > 0.0) || !(t - k * k * g > 0.0)) {
    throw DomainError("Mellin transform needs g > 0, s > k^2 g and t > k^2 g");
  }
  const double upper = extended_gamma_strip_upper(params);
  if (!(g < upper)) throw DomainError("Mellin transform diverges: g outside the strip of the kernel");
  const MittagLefflerK kernel = half_line_evaluator(params, 1e-12);

  // beta(s, t, v) decays like v^{-d}: d from the kernel tail or from the
  // endpoint layers of width v^{-1/k}.
  const double decay = std::min({upper, s / (k * k), t / (k * k)});
  QuadConfig inner = qcfg;
  inner.rel_tol = std::min(qcfg.rel_tol, 1e-10);
  inner.abs_tol = std::min(qcfg.abs_tol, 1e-15);
  const TailHint hint{decay - g + 1.0, TailModel::Quadrature};
  // Inner results by v; the error integral below revisits the same nodes.
  std::map<double, EvalResult> memo;
  auto inner_beta = [&](double v) -> const EvalResult& {
    auto it = memo.find(v);
    if (it == memo.end()) it = memo.emplace(v, extended_beta_k({s, t, v}, kernel, inner)).first;
    return it->second;
  };
  EvalResult out = integrate_0inf([&](double v) { return inner_beta(v).value; }, qcfg, hint, g - 1.0);

  // Propagated inner error: Int v^{g-1} err(v) dv, to one digit.
  QuadConfig rough = qcfg;
  rough.rel_tol = 0.1;
  rough.abs_tol = 1e-300;
  const EvalResult propagated =
      integrate_0inf([&](double v) { return inner_beta(v).error_estimate; }, rough, hint, g - 1.0);
  out.error_estimate += std::abs(propagated.value) + propagated.error_estimate;
  for (const auto& [v, r] : memo) {
    if (!r.converged) {
      out.converged = false;
      out.diagnostics.push_back("inner extended-beta quadrature did not converge");
      break;
    }
  }
  return out;
}

MellinReports check_mellin(const ExtBetaArgs& args, const MellinQuery& query, const MLParams& params, double tol,
                           const QuadConfig& qcfg) {
  const double k = params.k(), g = query.g;
  auto inputs = param_inputs(params);
  inputs["s"] = args.s;
  inputs["t"] = args.t;
  inputs["g"] = g;

  const Side oracle = attempt([&] { return from(mellin_transform_numeric(args, g, params, qcfg)); });
  const Side beta = attempt([&] { return exact(k_beta(args.s - k * k * g, args.t - k * k * g, k)); });
  auto times = [&](double s_gamma) {
    if (!beta.failure.empty()) return beta;
    Side gam = attempt([&] { return from(extended_gamma_k({s_gamma}, params, qcfg)); });
    gam.value *= beta.value;
    gam.error *= beta.value;
    return gam;
  };

  MellinReports out;
  out.literal = make(IdentityId::MellinPaperLiteral, inputs, "nested quadrature of the Mellin transform in v",
                     "beta_k(s - k^2 g, t - k^2 g) * extended gamma at s", false);
  out.literal = finish(std::move(out.literal), oracle, times(args.s), tol);
  out.corrected = make(IdentityId::MellinCorrected, inputs, "nested quadrature of the Mellin transform in v",
                       "beta_k(s - k^2 g, t - k^2 g) * extended gamma at g");
  out.corrected.notes.push_back("gamma factor at g is a hypothesis under test, not a printed claim");
  out.corrected = finish(std::move(out.corrected), oracle, times(g), tol);
  return out;
}

IdentityReport check_lemma_closed_form(double s, const MLParams& params, double tol, const QuadConfig& qcfg) {
  auto in = param_inputs(params);
  in["s"] = s;
  auto rep = make(IdentityId::Lemma23PaperLiteral, std::move(in), "extended gamma by quadrature",
                  "printed closed form Gamma_k(s+1) Gamma_k(-s) / (Gamma_k(r-p(1+s)) Gamma_k(q-p(1+s)))", false);
  const Side lhs = attempt([&] { return from(extended_gamma_k({s}, params, qcfg)); });
  const Side rhs = attempt([&] { return exact(extended_gamma_closed_form_claimed(s, params)); });
  return finish(std::move(rep), lhs, rhs, tol);
}

IdentityReport check_gamma_reduction(int part, double s, const MLParams& params, double tol,
                                     const QuadConfig& qcfg) {
  auto in = param_inputs(params);
  in["s"] = s;
  in["part"] = static_cast<double>(part);
  const double k = params.k(), p = params.p();
  const bool classical = params.mode() == GammaMode::Classical;
  IdentityReport rep;
  Side rhs;
  if (part == 1) {
    rep = make(IdentityId::Remark22, std::move(in), "extended gamma by quadrature",
               "Mellin-Barnes closed form of the q = r = 1 classical-denominator series", classical);
    rhs = attempt([&]() -> Side {
      if (params.q() != 1.0 || params.r() != 1.0) throw DomainError("reduction needs q = r = 1");
      // E(-m) = E^{1/k}_{p,1}(-k m): Mellin transform
      // k^{-s} Gamma(s) Gamma(1/k - s) / (Gamma(1/k) Gamma(1 - p s)).
      const double g = 1.0 / k;
      return exact(std::pow(k, -s) * boost::math::tgamma(s) * boost::math::tgamma(g - s) / boost::math::tgamma(g) *
                   reciprocal_gamma(1.0 - p * s));
    });
  } else {
    rep = make(IdentityId::Remark22, std::move(in), "extended gamma by quadrature", "Gamma_k(s)",
               classical && k == 1.0);
    if (k != 1.0) rep.notes.push_back("E_{k,1,1}^1(-m) is not exp(-m^k/k) for k != 1");
    rhs = attempt([&]() -> Side {
      if (p != 1.0 || params.q() != 1.0 || params.r() != 1.0) throw DomainError("reduction needs p = q = r = 1");
      return exact(k_gamma(s, k));
    });
  }
  const Side lhs = attempt([&] { return from(extended_gamma_k({s}, params, qcfg)); });
  return finish(std::move(rep), lhs, rhs, tol);
}

IdentityReport check_beta_reduction(int part, const ExtBetaArgs& args, const MLParams& params, double tol,
                                    const QuadConfig& qcfg) {
  const double k = params.k(), p = params.p();
  const bool classical = params.mode() == GammaMode::Classical;
  ExtBetaArgs a = args;
  if (part != 1) a.v = 0.0;
  auto in = beta_inputs(a, params);
  in["part"] = static_cast<double>(part);
  const BetaPoint pt(a, params, qcfg);
  IdentityReport rep;
  Side rhs;
  if (part == 1) {
    rep = make(IdentityId::Remark25, std::move(in), "extended beta by quadrature",
               "two-parameter beta: own series, half-line quadrature", classical);
    rhs = attempt([&]() -> Side {
      if (params.q() != 1.0 || params.r() != 1.0) throw DomainError("reduction needs q = r = 1");
      const double sa = a.s / k, tb = a.t / k;
      bool ok = true;
      EvalResult r = integrate_0inf(
          [&](double u) {
            const double w = u / ((1 + u) * (1 + u));
            const Side e = two_parameter_series(-a.v * std::pow(w, k), k, p);
            ok = ok && e.converged;
            return std::pow(1 + u, -sa - tb) * e.value;
          },
          qcfg, TailHint{tb + 1.0, TailModel::Quadrature}, sa - 1.0);
      r *= 1.0 / k;
      if (!ok) r.converged = false;
      return from(r);
    });
  } else {
    rep = make(IdentityId::Remark25, std::move(in), "extended beta by quadrature at v = 0", "beta_k(s, t)",
               classical);
    rhs = attempt([&]() -> Side {
      if (p != 1.0 || params.q() != 1.0 || params.r() != 1.0) throw DomainError("reduction needs p = q = r = 1");
      return exact(k_beta(a.s, a.t, k));
    });
  }
  return finish(std::move(rep), pt.beta(a.s, a.t), rhs, tol);
}

namespace {

// Parameter sets of a grid in fixed order.
template <class F>
void for_each_params(const std::vector<double>& ks, const std::vector<double>& ps, const std::vector<double>& qs,
                     const std::vector<double>& rs, const std::vector<GammaMode>& modes, F&& f) {
  for (double k : ks)
    for (double p : ps)
      for (double q : qs)
        for (double r : rs)
          for (GammaMode m : modes) f(MLParams(k, p, q, r, m));
}

std::vector<IdentityReport> reductions_for(const MLParams& P, const std::vector<double>& s_values,
                                           const std::vector<double>& t_values, const std::vector<double>& v_values,
                                           const std::vector<double>& gamma_s, const QuadConfig& qcfg) {
  std::vector<IdentityReport> out;
  if (P.q() != 1.0 || P.r() != 1.0) return out;
  const bool unit_p = P.p() == 1.0;
  double upper = 0.0;
  try {
    upper = extended_gamma_strip_upper(P);
  } catch (const DomainError&) {
  }
  for (double s : gamma_s) {
    if (!(s < upper)) continue;  // outside the strip: not an evaluation point
    out.push_back(check_gamma_reduction(1, s, P, 1e-8, qcfg));
    if (unit_p) out.push_back(check_gamma_reduction(2, s, P, 1e-8, qcfg));
  }
  for (double s : s_values)
    for (double t : t_values) {
      for (double v : v_values) out.push_back(check_beta_reduction(1, {s, t, v}, P, 1e-10, qcfg));
      if (unit_p) out.push_back(check_beta_reduction(2, {s, t, 0.0}, P, 1e-10, qcfg));
    }
  return out;
}

}  // namespace

std::vector<IdentityReport> check_reductions(const ParamGrid& grid, const std::vector<double>& s_values,
                                             const std::vector<double>& t_values,
                                             const std::vector<double>& v_values, const QuadConfig& qcfg) {
  std::vector<IdentityReport> out;
  for_each_params(grid.k, grid.p, grid.q, grid.r, grid.modes, [&](const MLParams& P) {
    auto part = reductions_for(P, s_values, t_values, v_values, s_values, qcfg);
    out.insert(out.end(), part.begin(), part.end());
  });
  return out;
}

AuditGrid AuditGrid::default_grid() {
  AuditGrid g;
  g.k = {0.5, 1, 2};
  g.s = {0.6, 1, 2.5};
  g.t = {0.6, 1, 2.5};
  g.v = {0, 0.5, 2};
  g.p = g.q = g.r = {0.75, 1, 1.5};
  g.modes = {GammaMode::Classical, GammaMode::KDeformed};
  g.mellin_k = {1};
  g.mellin_st = {2, 3};
  g.mellin_g = {0.25, 0.5};
  g.gamma_s = {0.25, 0.5, 0.9};
  return g;
}

AuditGrid AuditGrid::empty_grid() { return AuditGrid{}; }

AuditGrid AuditGrid::smoke_grid() {
  AuditGrid g;
  g.k = {0.5, 1};
  g.s = {0.6, 2.5};
  g.t = {1};
  g.v = {0, 2};
  g.p = {1, 1.5};
  g.q = {1};
  g.r = {1};
  g.modes = {GammaMode::Classical, GammaMode::KDeformed};
  g.mellin_k = {1};
  g.mellin_st = {2};
  g.mellin_g = {0.5};
  g.gamma_s = {0.5};
  return g;
}

AuditResult run_audit(const AuditGrid& grid, const AuditOptions& options) {
  const QuadConfig& q = options.qcfg;
  q.validate();
  using Job = std::function<std::vector<IdentityReport>()>;
  std::vector<Job> jobs;

  for_each_params(grid.k, grid.p, grid.q, grid.r, grid.modes, [&](const MLParams& P) {
    for (double s : grid.s)
      for (double t : grid.t)
        for (double v : grid.v)
          jobs.push_back([=, &grid] { return beta_point_checks({s, t, v}, P, q, grid.representations); });
  });
  for_each_params(grid.k, grid.p, grid.q, grid.r, grid.modes, [&](const MLParams& P) {
    jobs.push_back([=, &grid] { return reductions_for(P, grid.s, grid.t, grid.v, grid.gamma_s, q); });
  });
  for_each_params(grid.k, grid.p, grid.q, grid.r, grid.modes, [&](const MLParams& P) {
    for (double s : grid.gamma_s) jobs.push_back([=] { return std::vector{check_lemma_closed_form(s, P, 1e-8, q)}; });
  });
  for (double k : grid.mellin_k)
    for (double p : grid.p)
      for (double qq : grid.q)
        for (double r : grid.r)
          for (double s : grid.mellin_st)
            for (double t : grid.mellin_st)
              for (double g : grid.mellin_g)
                jobs.push_back([=, &grid] {
                  // At k = 1 both denominator readings are the same function;
                  // the nested quadrature is done once and relabelled.
                  std::vector<IdentityReport> out;
                  std::optional<MellinReports> unit_k;
                  for (GammaMode mode : grid.modes) {
                    const MLParams P(k, p, qq, r, mode);
                    MellinReports m;
                    if (k == 1.0 && unit_k) {
                      m = *unit_k;
                      for (auto* rep : {&m.literal, &m.corrected}) {
                        rep->inputs["mode"] = std::string(to_string(mode));
                        rep->notes.push_back("k = 1: same function under both denominator modes; values shared");
                      }
                    } else {
                      m = check_mellin({s, t, 0.0}, {g}, P, 1e-6, q);
                      if (k == 1.0) unit_k = m;
                    }
                    out.push_back(std::move(m.literal));
                    out.push_back(std::move(m.corrected));
                  }
                  return out;
                });

  // Results land in per-job slots, so the order never depends on scheduling.
  std::vector<std::vector<IdentityReport>> slots(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) slots[i] = jobs[i]();
  };
  unsigned n = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  n = static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs.size(), 1)));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  AuditResult result;
  for (auto& slot : slots)
    for (auto& r : slot) result.checks.push_back(std::move(r));

  for (const auto& r : result.checks) {
    auto& c = result.summary.per_identity[std::string(to_string(r.id))];
    switch (r.verdict) {
      case Verdict::Holds: ++c.holds; break;
      case Verdict::Fails: ++c.fails; break;
      case Verdict::Inconclusive: ++c.inconclusive; break;
    }
    ++result.summary.total;
    if (r.asserted && r.verdict != Verdict::Holds) ++result.summary.asserted_failures;
  }
  // An identity counts as asserted if any of its reports is.
  for (auto& [name, c] : result.summary.per_identity) c.asserted = false;
  for (const auto& r : result.checks)
    if (r.asserted) result.summary.per_identity[std::string(to_string(r.id))].asserted = true;
  return result;
}

namespace {

nlohmann::ordered_json input_json(const std::map<std::string, InputValue>& inputs) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [key, value] : inputs) {
    std::visit([&](const auto& x) { j[key] = x; }, value);
  }
  return j;
}

std::string csv_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string audit_json(const AuditGrid& grid, const AuditOptions& options, const AuditResult& result) {
  using json = nlohmann::ordered_json;
  json modes = json::array();
  for (GammaMode m : grid.modes) modes.push_back(std::string(to_string(m)));
  json doc;
  doc["config"] = {
      {"grid",
       {{"k", grid.k},
        {"s", grid.s},
        {"t", grid.t},
        {"v", grid.v},
        {"p", grid.p},
        {"q", grid.q},
        {"r", grid.r},
        {"modes", modes},
        {"mellin_k", grid.mellin_k},
        {"mellin_st", grid.mellin_st},
        {"mellin_g", grid.mellin_g},
        {"gamma_s", grid.gamma_s},
        {"representations", grid.representations}}},
      {"quadrature",
       {{"abs_tol", options.qcfg.abs_tol},
        {"rel_tol", options.qcfg.rel_tol},
        {"max_subdivisions", options.qcfg.max_subdivisions},
        {"semi_infinite_cutoff", options.qcfg.semi_infinite_cutoff}}},
  };
  json checks = json::array();
  for (const auto& r : result.checks) {
    checks.push_back({{"identity_id", r.label()},
                      {"inputs", input_json(r.inputs)},
                      {"lhs", r.lhs},
                      {"rhs", r.rhs},
                      {"abs_diff", r.abs_diff},
                      {"rel_diff", r.rel_diff},
                      {"verdict", std::string(to_string(r.verdict))},
                      {"lhs_error", r.lhs_error},
                      {"rhs_error", r.rhs_error},
                      {"tolerance", r.tolerance},
                      {"asserted", r.asserted},
                      {"lhs_source", r.lhs_source},
                      {"rhs_source", r.rhs_source},
                      {"notes", r.notes}});
  }
  doc["checks"] = std::move(checks);
  json per = json::object();
  for (const auto& [name, c] : result.summary.per_identity) {
    per[name] = {{"holds", c.holds}, {"fails", c.fails}, {"inconclusive", c.inconclusive}, {"asserted", c.asserted}};
  }
  doc["summary"] = {{"total", result.summary.total},
                    {"asserted_failures", result.summary.asserted_failures},
                    {"per_identity", per}};
  return doc.dump(2) + "\n";
}

std::string audit_csv(const AuditResult& result) {
  std::set<std::string> keys;
  for (const auto& r : result.checks)
    for (const auto& [key, value] : r.inputs) keys.insert(key);
  std::ostringstream os;
  os << "identity_id";
  for (const auto& key : keys) os << ',' << key;
  os << ",lhs,rhs,abs_diff,rel_diff,verdict\n";
  for (const auto& r : result.checks) {
    os << r.label();
    for (const auto& key : keys) {
      os << ',';
      const auto it = r.inputs.find(key);
      if (it == r.inputs.end()) continue;
      if (const auto* d = std::get_if<double>(&it->second)) os << csv_number(*d);
      else os << std::get<std::string>(it->second);
    }
    os << ',' << csv_number(r.lhs) << ',' << csv_number(r.rhs) << ',' << csv_number(r.abs_diff) << ','
       << csv_number(r.rel_diff) << ',' << to_string(r.verdict) << '\n';
  }
  return os.str();
}

}  // namespace kfun
