#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <json.hpp>

#include "kfun/errors.hpp"
#include "kfun/identities.hpp"

using namespace kfun;

namespace {

const MLParams kUnit{1, 1, 1, 1};

bool has_note(const IdentityReport& r, const std::string& fragment) {
  for (const auto& n : r.notes)
    if (n.find(fragment) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("functional relation and symmetry") {
  // B(1,2) + B(2,1) = B(1,1) = 1.
  auto r = check_functional_relation({1, 1, 0}, kUnit);
  CHECK(r.verdict == Verdict::Holds);
  CHECK(r.lhs == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(check_functional_relation({1, 1, 1}, kUnit).verdict == Verdict::Holds);
  CHECK(check_functional_relation({0.6, 2.5, 2}, MLParams(2, 0.75, 1.5, 1.5, GammaMode::KDeformed)).verdict ==
        Verdict::Holds);
  CHECK(check_symmetry({2, 3, 1}, kUnit).verdict == Verdict::Holds);
  CHECK(check_symmetry({0.6, 2.5, 2}, MLParams(0.5, 1.5, 0.75, 1)).verdict == Verdict::Holds);

  // E at -v/4^k beyond the series guard: reported, not thrown.
  const auto g = check_functional_relation({1, 1, 1e4}, kUnit);
  CHECK(g.verdict == Verdict::Inconclusive);
  CHECK(!g.notes.empty());
}

TEST_CASE("printed shift holds only at k = 1") {
  CHECK(check_functional_relation_literal({1, 2, 1}, kUnit).verdict == Verdict::Holds);
  const auto r = check_functional_relation_literal({1, 2, 1}, MLParams(2, 1, 1, 1));
  CHECK(r.verdict == Verdict::Fails);
  CHECK_FALSE(r.asserted);
}

TEST_CASE("Mellin transform") {
  const auto m = check_mellin({2, 2, 0}, {0.5}, kUnit);
  const double spot = std::tgamma(0.5) * std::tgamma(1.5) * std::tgamma(1.5) / std::tgamma(3.0);
  CHECK(m.corrected.verdict == Verdict::Holds);
  CHECK(m.corrected.lhs == doctest::Approx(spot).epsilon(1e-6));
  CHECK(m.corrected.rhs == doctest::Approx(spot).epsilon(1e-10));
  CHECK(m.literal.verdict != Verdict::Holds);
  CHECK_FALSE(m.literal.asserted);

  CHECK(check_mellin({3, 2, 0}, {1}, kUnit).corrected.verdict == Verdict::Holds);

  // t = k^2 g: the transform diverges.
  const auto bad = check_mellin({2, 2, 0}, {2}, kUnit);
  CHECK(bad.corrected.verdict == Verdict::Inconclusive);
  CHECK_THROWS_AS(mellin_transform_numeric({2, 2, 0}, 2, kUnit), DomainError);
}

TEST_CASE("both sides vanish") {
  // q - p g = 0: the gamma factor carries 1/Gamma(0) = 0.
  const auto m = check_mellin({2, 2, 0}, {0.5}, MLParams(1, 1.5, 0.75, 0.75));
  CHECK(m.corrected.verdict == Verdict::Holds);
  CHECK(std::abs(m.corrected.lhs) < 1e-9);
  CHECK(has_note(m.corrected, "vanish"));
}

TEST_CASE("printed closed form of the extended gamma") {
  // Gamma(3/2) Gamma(-1/2) / Gamma(-1/2)^2 = -1/4 against Gamma(1/2).
  const auto r = check_lemma_closed_form(0.5, kUnit);
  CHECK(r.verdict == Verdict::Fails);
  CHECK(r.lhs == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-9));
  CHECK(r.rhs == doctest::Approx(-0.25).epsilon(1e-12));
  CHECK_FALSE(r.asserted);
  CHECK(check_lemma_closed_form(1.0, kUnit).verdict == Verdict::Inconclusive);
}

TEST_CASE("reductions") {
  const auto b = check_beta_reduction(2, {2, 3, 0}, kUnit);
  CHECK(b.verdict == Verdict::Holds);
  CHECK(b.rhs == doctest::Approx(1.0 / 12).epsilon(1e-14));

  // beta_2(2, 2) = B(1, 1) / 2.
  const auto b2 = check_beta_reduction(2, {2, 2, 0}, MLParams(2, 1, 1, 1));
  CHECK(b2.verdict == Verdict::Holds);
  CHECK(b2.rhs == doctest::Approx(0.5).epsilon(1e-14));
  // Gamma_2(1) != 1 in the denominator.
  const auto b3 = check_beta_reduction(2, {2, 2, 0}, MLParams(2, 1, 1, 1, GammaMode::KDeformed));
  CHECK(b3.verdict == Verdict::Fails);
  CHECK_FALSE(b3.asserted);

  CHECK(check_beta_reduction(1, {0.6, 2.5, 2}, MLParams(0.5, 0.75, 1, 1)).verdict == Verdict::Holds);
  CHECK(check_beta_reduction(1, {1, 1, 0}, MLParams(2, 1.5, 1, 1)).verdict == Verdict::Holds);
  CHECK(check_gamma_reduction(1, 0.5, MLParams(0.5, 0.75, 1, 1)).verdict == Verdict::Holds);
  CHECK(check_gamma_reduction(2, 0.5, kUnit).verdict == Verdict::Holds);
  // At k = 2 the kernel decays like m^{-1/2}: s = 0.5 is on the strip edge.
  CHECK(check_gamma_reduction(2, 0.5, MLParams(2, 1, 1, 1)).verdict == Verdict::Inconclusive);
  const auto g2 = check_gamma_reduction(2, 0.25, MLParams(2, 1, 1, 1));
  CHECK(g2.verdict == Verdict::Fails);
  CHECK_FALSE(g2.asserted);

  // Not applicable: q != 1.
  CHECK(check_beta_reduction(1, {1, 1, 1}, MLParams(1, 1, 2, 1)).verdict == Verdict::Inconclusive);
}

TEST_CASE("empty grid") {
  const auto r = run_audit(AuditGrid::empty_grid());
  CHECK(r.checks.empty());
  CHECK(r.summary.total == 0);
  CHECK(r.summary.asserted_failures == 0);
}

TEST_CASE("smoke audit: asserted identities hold, output is deterministic") {
  const auto grid = AuditGrid::smoke_grid();
  AuditOptions one;
  one.threads = 1;
  AuditOptions many;
  many.threads = 4;
  const auto a = run_audit(grid, one);
  const auto b = run_audit(grid, many);
  CHECK(a.summary.total > 0);
  CHECK(a.summary.asserted_failures == 0);
  for (const auto& c : a.checks) {
    if (c.asserted && c.verdict != Verdict::Holds) FAIL_CHECK(c.label());
  }
  const std::string ja = audit_json(grid, one, a);
  CHECK(ja == audit_json(grid, one, b));
  CHECK(audit_csv(a) == audit_csv(b));

  const auto doc = nlohmann::json::parse(ja);
  CHECK(doc["checks"].size() == a.checks.size());
  CHECK(doc["summary"]["total"] == a.summary.total);
  for (const char* key : {"identity_id", "inputs", "lhs", "rhs", "abs_diff", "rel_diff", "verdict"})
    CHECK(doc["checks"][0].contains(key));

  const std::string csv = audit_csv(a);
  CHECK(csv.rfind("identity_id,", 0) == 0);
  const std::string header = csv.substr(0, csv.find('\n'));
  CHECK(header.ends_with(",lhs,rhs,abs_diff,rel_diff,verdict"));
}
