#pragma once

// Numerical audit of the relations claimed for the extended functions: each
// check evaluates both sides independently and records the discrepancy.

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "kfun/extfun.hpp"
#include "kfun/repr.hpp"

namespace kfun {

enum class IdentityId {
  FunctionalRelation,              ///< beta(s, t+k) + beta(s+k, t) = beta(s, t)
  FunctionalRelationPaperLiteral,  ///< the printed shift by 1 (probe)
  Symmetry,
  MellinPaperLiteral,              ///< gamma factor at s (probe)
  MellinCorrected,                 ///< gamma factor at g (hypothesis under test)
  Lemma23PaperLiteral,             ///< printed closed form of the extended gamma (probe)
  Remark22,                        ///< extended gamma reductions
  Remark25,                        ///< extended beta reductions
  ReprEquivalence,                 ///< corrected representation vs the defining integral
  ReprParameterInvariance,         ///< same representation, different free parameters
  ReprPaperLiteral,                ///< printed representation vs the defining integral (probe)
};

std::string_view to_string(IdentityId id);

enum class Verdict { Holds, Fails, Inconclusive };
std::string_view to_string(Verdict v);

using InputValue = std::variant<double, std::string>;

struct IdentityReport {
  IdentityId id = IdentityId::Symmetry;
  /// Representation name for the Repr* identities, empty otherwise.
  std::string subject;
  std::map<std::string, InputValue> inputs;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_diff = 0.0;
  double rel_diff = 0.0;
  double lhs_error = 0.0;
  double rhs_error = 0.0;
  double tolerance = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  /// True for relations the library stands behind; false for probes of
  /// printed formulas whose failure is itself the finding.
  bool asserted = true;
  std::string lhs_source;
  std::string rhs_source;
  std::vector<std::string> notes;

  /// "ReprEquivalence(Power)" style label.
  std::string label() const;
};

struct MellinQuery {
  double g;
};

IdentityReport check_functional_relation(const ExtBetaArgs& args, const MLParams& params, double tol = 1e-9,
                                         const QuadConfig& qcfg = {});
/// The printed shift-by-one relation; a probe that holds only at k = 1.
IdentityReport check_functional_relation_literal(const ExtBetaArgs& args, const MLParams& params,
                                                 double tol = 1e-9, const QuadConfig& qcfg = {});
IdentityReport check_symmetry(const ExtBetaArgs& args, const MLParams& params, double tol = 1e-10,
                              const QuadConfig& qcfg = {});

/// Nested-quadrature Mellin transform in v of the extended beta function
/// against beta_k(s - k^2 g, t - k^2 g) times the extended gamma at s (printed)
/// and at g (corrected). args.v is ignored.
struct MellinReports {
  IdentityReport literal;
  IdentityReport corrected;
};
MellinReports check_mellin(const ExtBetaArgs& args, const MellinQuery& query, const MLParams& params,
                           double tol = 1e-6, const QuadConfig& qcfg = {});
/// Only the nested-quadrature side (throws DomainError outside the strip).
EvalResult mellin_transform_numeric(const ExtBetaArgs& args, double g, const MLParams& params,
                                    const QuadConfig& qcfg = {});

IdentityReport check_lemma_closed_form(double s, const MLParams& params, double tol = 1e-8,
                                       const QuadConfig& qcfg = {});

IdentityReport check_representation(const Representation& rep, const ExtBetaArgs& args, const MLParams& params,
                                    double tol = 1e-7, const QuadConfig& qcfg = {});
IdentityReport check_representation_invariance(const Representation& rep, const Representation& reference,
                                               const ExtBetaArgs& args, const MLParams& params,
                                               double tol = 1e-8, const QuadConfig& qcfg = {});
IdentityReport check_representation_literal(const Representation& rep, const ExtBetaArgs& args,
                                            const MLParams& params, double tol = 1e-7,
                                            const QuadConfig& qcfg = {});

/// Extended-gamma reductions: (1) at q = r = 1 the extended gamma equals the Mittag-Leffler
/// gamma of the classical-denominator series, evaluated from its Mellin-Barnes
/// closed form; (2) at p = q = r = 1 it equals Gamma_k(s).
IdentityReport check_gamma_reduction(int part, double s, const MLParams& params, double tol = 1e-8,
                                     const QuadConfig& qcfg = {});
/// Extended-beta reductions: (1) at q = r = 1 the extended beta equals the two-parameter
/// beta built on the classical-denominator series, evaluated by its own series
/// and quadrature; (2) at p = q = r = 1, v = 0 it equals beta_k(s, t).
IdentityReport check_beta_reduction(int part, const ExtBetaArgs& args, const MLParams& params, double tol = 1e-10,
                                    const QuadConfig& qcfg = {});

/// Runs both reduction checks over the applicable points of a grid.
struct ParamGrid {
  std::vector<double> k, p, q, r;
  std::vector<GammaMode> modes;
};
std::vector<IdentityReport> check_reductions(const ParamGrid& grid, const std::vector<double>& s_values,
                                             const std::vector<double>& t_values,
                                             const std::vector<double>& v_values, const QuadConfig& qcfg = {});

struct AuditGrid {
  std::vector<double> k, s, t, v, p, q, r;
  std::vector<GammaMode> modes;
  /// Mellin checks: k values, s = t values and transform variables g.
  std::vector<double> mellin_k, mellin_st, mellin_g;
  /// Extended-gamma points for the closed-form probe and the gamma reductions.
  std::vector<double> gamma_s;
  bool representations = true;

  static AuditGrid default_grid();
  static AuditGrid empty_grid();
  /// A few points of every kind; for smoke tests.
  static AuditGrid smoke_grid();
};

struct AuditSummary {
  struct Counts {
    int holds = 0;
    int fails = 0;
    int inconclusive = 0;
    bool asserted = true;
  };
  /// Keyed by IdentityId name (Repr* identities aggregated over subjects).
  std::map<std::string, Counts> per_identity;
  int total = 0;
  /// Asserted reports that did not hold.
  int asserted_failures = 0;
};

struct AuditResult {
  std::vector<IdentityReport> checks;
  AuditSummary summary;
};

struct AuditOptions {
  QuadConfig qcfg;
  /// Worker threads; 0 = hardware concurrency. Output does not depend on it.
  unsigned threads = 0;
};

/// Every check over the grid, in a fixed order.
AuditResult run_audit(const AuditGrid& grid, const AuditOptions& options = {});

std::string audit_json(const AuditGrid& grid, const AuditOptions& options, const AuditResult& result);
std::string audit_csv(const AuditResult& result);

}  // namespace kfun
