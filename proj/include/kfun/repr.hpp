#pragma once

// Alternative integral representations of the extended beta k-function, each
// obtained from the defining integral by a change of variables. Every one is
// evaluated by its own quadrature so that they can cross-check each other.

#include <map>
#include <string>
#include <variant>

#include "kfun/extfun.hpp"

namespace kfun::rep {

struct Direct {};
/// m = cos^2 j on [0, pi/2].
struct Trig {};
/// m = u^n.
struct Power {
  int n;
};
/// m = u / eta on [0, eta].
struct ScaledInterval {
  double eta;
};
/// m = (1 + eta) u / (u + eta).
struct RationalMap {
  double eta;
};
/// m = u / (1 + u) on [0, inf).
struct HalfLine {};
/// Mean of HalfLine at (s, t) and at (t, s).
struct SymmetrizedHalfLine {};
/// HalfLine with u -> eta u / zeta.
struct ScaledHalfLine {
  double eta;
  double zeta;
};
/// ScaledHalfLine with u = tan^2 j.
struct TanSquared {
  double eta;
  double zeta;
};
/// m = zeta u / (eta + (zeta - eta) u) on [0, 1].
struct TwoParameter {
  double eta;
  double zeta;
};
/// TwoParameter with the roles swapped and eta = zeta + xi.
struct ShiftedTwoParameter {
  double zeta;
  double xi;
};
/// m = (u - eta) / (zeta - eta) on [eta, zeta].
struct Interval {
  double eta;
  double zeta;
};
/// Interval on [-1, 1].
struct SymmetricInterval {};

}  // namespace kfun::rep

namespace kfun {

using Representation =
    std::variant<rep::Direct, rep::Trig, rep::Power, rep::ScaledInterval, rep::RationalMap, rep::HalfLine,
                 rep::SymmetrizedHalfLine, rep::ScaledHalfLine, rep::TanSquared, rep::TwoParameter,
                 rep::ShiftedTwoParameter, rep::Interval, rep::SymmetricInterval>;

/// Stable name of the variant, e.g. "ScaledHalfLine".
std::string representation_name(const Representation& rep);
/// Payload values keyed by symbol name ("n", "eta", "zeta", "xi").
std::map<std::string, double> representation_payload(const Representation& rep);
/// Parses a name plus payload (as produced above). Throws DomainError.
Representation make_representation(const std::string& name, const std::map<std::string, double>& payload);
/// Throws DomainError when the payload violates its constraints.
void validate(const Representation& rep);

/// Corrected representation; equals extended_beta_k for every variant.
EvalResult eval_representation(const Representation& rep, const ExtBetaArgs& args, const MLParams& params,
                               const QuadConfig& qcfg = {});
/// Same with a shared evaluator covering |x| <= v / 4^k.
EvalResult eval_representation(const Representation& rep, const ExtBetaArgs& args, const MittagLefflerK& kernel,
                               const QuadConfig& qcfg = {});

/// The formula as printed, with only the minimal completion needed to make it
/// evaluable. Used to measure each misprint, never as a trusted value.
EvalResult paper_literal_representation(const Representation& rep, const ExtBetaArgs& args,
                                        const MLParams& params, const QuadConfig& qcfg = {});

}  // namespace kfun
