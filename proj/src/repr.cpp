#include "kfun/repr.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kfun/errors.hpp"

namespace kfun {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// Everything an integrand needs: exponents a = s/k, b = t/k and E(-v w^k).
struct Ctx {
  const MittagLefflerK& kernel;
  double k, a, b, v;
  const QuadConfig& qcfg;

  double E(double w) const { return kernel(-v * std::pow(w, k)); }
};

// sin(x) / x, and cos(j) / (pi/2 - j) given c = pi/2 - j.
double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

// Int_0^{pi/2} sin^{2A-1} j cos^{2B-1} j g(sin j, cos j) dj.
EvalResult quarter_turn(const std::function<double(double, double)>& g, double A, double B, const QuadConfig& q) {
  return integrate_interval(
      PointIntegrand([&](const Point& pt) {
        const double sj = std::sin(pt.from_lower), cj = std::sin(pt.to_upper);
        return std::pow(sinc(pt.from_lower), 2 * A - 1) * std::pow(sinc(pt.to_upper), 2 * B - 1) * g(sj, cj);
      }),
      0.0, kHalfPi, 2 * A - 1, 2 * B - 1, q);
}

// Int_0^1 u^{A-1} (1-u)^{B-1} g(u, 1-u) du.
EvalResult unit(const std::function<double(double, double)>& g, double A, double B, const QuadConfig& q) {
  return integrate_01_singular(PointIntegrand([&](const Point& pt) { return g(pt.from_lower, pt.to_upper); }),
                               A - 1, B - 1, q);
}

// 1 - u^n from u and 1 - u without cancellation.
double one_minus_pow(double u, double uc, int n) {
  return u <= 0.5 ? 1.0 - std::pow(u, n) : -std::expm1(n * std::log1p(-uc));
}

EvalResult half_line(const Ctx& c, double a, double b) {
  return integrate_0inf([&](double u) { return std::pow(1 + u, -a - b) * c.E(u / ((1 + u) * (1 + u))); }, c.qcfg,
                        TailHint{b + 1.0, TailModel::Quadrature}, a - 1.0);
}

EvalResult scaled(EvalResult r, double factor) {
  r *= factor;
  return r;
}

EvalResult corrected(const Representation& rep, const ExtBetaArgs& args, const Ctx& c) {
  const double k = c.k, a = c.a, b = c.b;
  return std::visit(
      overloaded{
          [&](const rep::Direct&) { return extended_beta_k(args, c.kernel, c.qcfg); },
          [&](const rep::Trig&) {
            // m = cos^2 j: cos carries the s exponent, sin the t exponent.
            return scaled(quarter_turn([&](double sj, double cj) { return c.E(sj * sj * cj * cj); }, b, a, c.qcfg),
                          2.0 / k);
          },
          [&](const rep::Power& p) {
            const int n = p.n;
            return scaled(integrate_01_singular(
                              PointIntegrand([&](const Point& pt) {
                                const double u = pt.from_lower, uc = pt.to_upper;
                                const double w = one_minus_pow(u, uc, n);
                                return std::pow(w / uc, b - 1) * c.E(std::pow(u, n) * w);
                              }),
                              n * a - 1, b - 1, c.qcfg),
                          n / k);
          },
          [&](const rep::ScaledInterval& p) {
            const double eta = p.eta;
            return scaled(integrate_interval(PointIntegrand([&](const Point& pt) {
                                               return c.E(pt.from_lower * pt.to_upper / (eta * eta));
                                             }),
                                             0.0, eta, a - 1, b - 1, c.qcfg),
                          std::pow(eta, 1 - a - b) / k);
          },
          [&](const rep::RationalMap& p) {
            const double eta = p.eta;
            return scaled(unit(
                              [&](double u, double uc) {
                                const double d = u + eta;
                                return std::pow(d, -a - b) * c.E(eta * (1 + eta) * u * uc / (d * d));
                              },
                              a, b, c.qcfg),
                          std::pow(1 + eta, a) * std::pow(eta, b) / k);
          },
          [&](const rep::HalfLine&) { return scaled(half_line(c, a, b), 1.0 / k); },
          [&](const rep::SymmetrizedHalfLine&) {
            EvalResult r = half_line(c, a, b);
            r += half_line(c, b, a);
            return scaled(r, 0.5 / k);
          },
          [&](const rep::ScaledHalfLine& p) {
            const double eta = p.eta, zeta = p.zeta;
            return scaled(integrate_0inf(
                              [&](double u) {
                                const double d = zeta + eta * u;
                                return std::pow(d, -a - b) * c.E(eta * zeta * u / (d * d));
                              },
                              c.qcfg, TailHint{b + 1.0, TailModel::Quadrature}, a - 1.0),
                          std::pow(eta, a) * std::pow(zeta, b) / k);
          },
          [&](const rep::TanSquared& p) {
            const double eta = p.eta, zeta = p.zeta;
            return scaled(quarter_turn(
                              [&](double sj, double cj) {
                                const double d = zeta * cj * cj + eta * sj * sj;
                                return std::pow(d, -a - b) * c.E(eta * zeta * sj * sj * cj * cj / (d * d));
                              },
                              a, b, c.qcfg),
                          2.0 * std::pow(eta, a) * std::pow(zeta, b) / k);
          },
          [&](const rep::TwoParameter& p) {
            // m = zeta u / D with D = eta + (zeta - eta) u, so 1 - m = eta (1-u) / D.
            const double eta = p.eta, zeta = p.zeta;
            return scaled(unit(
                              [&](double u, double uc) {
                                const double d = eta + (zeta - eta) * u;
                                return std::pow(d, -a - b) * c.E(eta * zeta * u * uc / (d * d));
                              },
                              a, b, c.qcfg),
                          std::pow(zeta, a) * std::pow(eta, b) / k);
          },
          [&](const rep::ShiftedTwoParameter& p) {
            const double zeta = p.zeta, xi = p.xi, eta = zeta + xi;
            return scaled(unit(
                              [&](double u, double uc) {
                                const double d = zeta + xi * u;
                                return std::pow(d, -a - b) * c.E(eta * zeta * u * uc / (d * d));
                              },
                              a, b, c.qcfg),
                          std::pow(eta, a) * std::pow(zeta, b) / k);
          },
          [&](const rep::Interval& p) {
            const double eta = p.eta, zeta = p.zeta, len = zeta - eta;
            return scaled(integrate_interval(PointIntegrand([&](const Point& pt) {
                                               return c.E(pt.from_lower * pt.to_upper / (len * len));
                                             }),
                                             eta, zeta, a - 1, b - 1, c.qcfg),
                          std::pow(len, 1 - a - b) / k);
          },
          [&](const rep::SymmetricInterval&) {
            return scaled(integrate_interval(PointIntegrand([&](const Point& pt) {
                                               return c.E(pt.from_lower * pt.to_upper / 4.0);
                                             }),
                                             -1.0, 1.0, a - 1, b - 1, c.qcfg),
                          std::pow(2.0, 1 - a - b) / k);
          },
      },
      rep);
}

// Largest w on [0, 1] of the printed RationalMap argument, which is not the
// bounded m(1-m) of the corrected form.
double printed_rational_peak(double eta) {
  double peak = 0.25;
  for (int i = 1; i < 4096; ++i) {
    const double u = i / 4096.0;
    peak = std::max(peak, eta * (1 + eta) * u * (1 - u) / (u + eta * eta));
  }
  return peak * 1.01;
}

EvalResult literal(const Representation& rep, const ExtBetaArgs& args, const Ctx& c) {
  const double k = c.k, a = c.a, b = c.b;
  return std::visit(
      overloaded{
          [&](const rep::Power& p) {
            // No u^{n-1} Jacobian.
            const int n = p.n;
            return scaled(integrate_01_singular(
                              PointIntegrand([&](const Point& pt) {
                                const double u = pt.from_lower, uc = pt.to_upper;
                                const double w = one_minus_pow(u, uc, n);
                                return std::pow(w / uc, b - 1) * c.E(std::pow(u, n) * w);
                              }),
                              n * (a - 1), b - 1, c.qcfg),
                          n / k);
          },
          [&](const rep::RationalMap& p) {
            // Exponents -1 on the prefactors, the beta parameter t in the
            // denominator, and (u + eta^2) inside E.
            const double eta = p.eta;
            return scaled(unit([&](double u, double uc) { return c.E(eta * (1 + eta) * u * uc / (u + eta * eta)); },
                               a, b, c.qcfg),
                          std::pow(1 + eta, a - 1) * std::pow(eta, b - 1) * std::pow(args.t + eta, -a - b) / k);
          },
          [&](const rep::SymmetrizedHalfLine&) {
            // The printed single integral of (u^{a-1} + u^{b-1}) / (1+u)^{a+b}.
            const double lo = std::min(a, b), gap = std::abs(a - b);
            return scaled(integrate_0inf(
                              [&](double u) {
                                return (1 + std::pow(u, gap)) * std::pow(1 + u, -a - b) *
                                       c.E(u / ((1 + u) * (1 + u)));
                              },
                              c.qcfg, TailHint{lo + 1.0, TailModel::Quadrature}, lo - 1.0),
                          0.5 / k);
          },
          [&](const rep::TanSquared& p) {
            // Denominator cos^2 + eta sin^2; the stray u inside E set to 1.
            const double eta = p.eta, zeta = p.zeta;
            return scaled(quarter_turn(
                              [&](double sj, double cj) {
                                const double d = cj * cj + eta * sj * sj;
                                const double e = zeta * cj * cj + eta * sj * sj;
                                return std::pow(d, -a - b) * c.E(eta * zeta * sj * sj * cj * cj / (e * e));
                              },
                              a, b, c.qcfg),
                          2.0 * std::pow(eta, a) * std::pow(zeta, b) / k);
          },
          [&](const rep::TwoParameter& p) {
            const double eta = p.eta, zeta = p.zeta;
            return scaled(unit(
                              [&](double u, double uc) {
                                const double d = zeta + (eta - zeta) * u;
                                return std::pow(d, -a - b) * c.E(eta * zeta * u * uc / (d * d));
                              },
                              a, b, c.qcfg),
                          std::pow(zeta, a) * std::pow(eta, b) / k);
          },
          [&](const rep::ShiftedTwoParameter& p) {
            // No 1/k; (eta - xi u)^2 inside E with eta = zeta + xi.
            const double zeta = p.zeta, xi = p.xi, eta = zeta + xi;
            return scaled(unit(
                              [&](double u, double uc) {
                                const double d = zeta + xi * u, e = eta - xi * u;
                                return std::pow(d, -a - b) * c.E(eta * zeta * u * uc / (e * e));
                              },
                              a, b, c.qcfg),
                          std::pow(eta, a) * std::pow(zeta, b));
          },
          [&](const rep::Interval& p) {
            // (eta - u)^{b-1} with u > eta is real only for integer b - 1,
            // where it is (-1)^{b-1} (u - eta)^{b-1}. No 1/k.
            const double eta = p.eta, zeta = p.zeta, len = zeta - eta;
            const double n = b - 1;
            if (n != std::round(n)) {
              throw DomainError("printed interval form takes (eta-u)^" + num(n) +
                                " of a negative number; undefined unless t/k - 1 is an integer");
            }
            const double sign = std::fmod(std::abs(n), 2.0) == 1.0 ? -1.0 : 1.0;
            return scaled(integrate_interval(PointIntegrand([&](const Point& pt) {
                                               return c.E(pt.from_lower * pt.to_upper / (len * len));
                                             }),
                                             eta, zeta, a + n - 1, 0.0, c.qcfg),
                          sign * std::pow(len, 1 - a - b));
          },
          [&](const rep::SymmetricInterval&) {
            // As corrected, without 1/k.
            return scaled(corrected(rep, args, c), k);
          },
          // Printed correctly, or completed to the corrected form (the
          // trigonometric form only lacks the argument j).
          [&](const auto&) { return corrected(rep, args, c); },
      },
      rep);
}

MittagLefflerK guarded_kernel(const ExtBetaArgs& args, const MLParams& params, double peak) {
  const SeriesConfig cfg;
  const double bound = args.v * std::pow(peak, params.k());
  if (bound > cfg.max_abs_argument) {
    throw ArgumentRangeError("representation needs E at -" + num(bound) + ", beyond the series guard " +
                                 num(cfg.max_abs_argument),
                             -bound);
  }
  return MittagLefflerK(params, cfg, bound);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

std::string representation_name(const Representation& rep) {
  static const char* const names[] = {"Direct",        "Trig",           "Power",
                                      "ScaledInterval", "RationalMap",   "HalfLine",
                                      "SymmetrizedHalfLine", "ScaledHalfLine", "TanSquared",
                                      "TwoParameter",  "ShiftedTwoParameter", "Interval",
                                      "SymmetricInterval"};
  return names[rep.index()];
}

std::map<std::string, double> representation_payload(const Representation& rep) {
  return std::visit(overloaded{
                        [](const rep::Power& p) { return std::map<std::string, double>{{"n", p.n}}; },
                        [](const rep::ScaledInterval& p) { return std::map<std::string, double>{{"eta", p.eta}}; },
                        [](const rep::RationalMap& p) { return std::map<std::string, double>{{"eta", p.eta}}; },
                        [](const rep::ScaledHalfLine& p) {
                          return std::map<std::string, double>{{"eta", p.eta}, {"zeta", p.zeta}};
                        },
                        [](const rep::TanSquared& p) {
                          return std::map<std::string, double>{{"eta", p.eta}, {"zeta", p.zeta}};
                        },
                        [](const rep::TwoParameter& p) {
                          return std::map<std::string, double>{{"eta", p.eta}, {"zeta", p.zeta}};
                        },
                        [](const rep::ShiftedTwoParameter& p) {
                          return std::map<std::string, double>{{"xi", p.xi}, {"zeta", p.zeta}};
                        },
                        [](const rep::Interval& p) {
                          return std::map<std::string, double>{{"eta", p.eta}, {"zeta", p.zeta}};
                        },
                        [](const auto&) { return std::map<std::string, double>{}; },
                    },
                    rep);
}

Representation make_representation(const std::string& name, const std::map<std::string, double>& payload) {
  std::vector<std::string> used;
  auto get = [&](const char* key) {
    const auto it = payload.find(key);
    if (it == payload.end()) throw DomainError("representation " + name + " needs " + key);
    used.emplace_back(key);
    return it->second;
  };
  Representation rep = rep::Direct{};
  if (name == "Direct") rep = rep::Direct{};
  else if (name == "Trig") rep = rep::Trig{};
  else if (name == "Power") {
    const double n = get("n");
    if (n != std::round(n) || !(n >= 1 && n <= 1e6)) throw DomainError("Power needs an integer n >= 1");
    rep = rep::Power{static_cast<int>(n)};
  } else if (name == "ScaledInterval") rep = rep::ScaledInterval{get("eta")};
  else if (name == "RationalMap") rep = rep::RationalMap{get("eta")};
  else if (name == "HalfLine") rep = rep::HalfLine{};
  else if (name == "SymmetrizedHalfLine") rep = rep::SymmetrizedHalfLine{};
  else if (name == "ScaledHalfLine") rep = rep::ScaledHalfLine{get("eta"), get("zeta")};
  else if (name == "TanSquared") rep = rep::TanSquared{get("eta"), get("zeta")};
  else if (name == "TwoParameter") rep = rep::TwoParameter{get("eta"), get("zeta")};
  else if (name == "ShiftedTwoParameter") rep = rep::ShiftedTwoParameter{get("zeta"), get("xi")};
  else if (name == "Interval") rep = rep::Interval{get("eta"), get("zeta")};
  else if (name == "SymmetricInterval") rep = rep::SymmetricInterval{};
  else throw DomainError("unknown representation '" + name + "'");
  for (const auto& [key, value] : payload) {
    if (std::find(used.begin(), used.end(), key) == used.end()) {
      throw DomainError("representation " + name + " takes no parameter '" + key + "'");
    }
  }
  validate(rep);
  return rep;
}

void validate(const Representation& rep) {
  std::visit(overloaded{
                 [](const rep::Power& p) { require(p.n >= 1, "Power needs n >= 1"); },
                 [](const rep::ScaledInterval& p) { require(finite_positive(p.eta), "ScaledInterval needs eta > 0"); },
                 [](const rep::RationalMap& p) { require(finite_positive(p.eta), "RationalMap needs eta > 0"); },
                 [](const rep::ScaledHalfLine& p) {
                   require(finite_positive(p.eta) && finite_positive(p.zeta), "ScaledHalfLine needs eta, zeta > 0");
                 },
                 [](const rep::TanSquared& p) {
                   require(finite_positive(p.eta) && finite_positive(p.zeta), "TanSquared needs eta, zeta > 0");
                 },
                 [](const rep::TwoParameter& p) {
                   require(finite_positive(p.eta) && finite_positive(p.zeta), "TwoParameter needs eta, zeta > 0");
                 },
                 [](const rep::ShiftedTwoParameter& p) {
                   require(finite_positive(p.zeta) && std::isfinite(p.xi) && p.zeta + p.xi > 0,
                           "ShiftedTwoParameter needs zeta > 0 and zeta + xi > 0");
                 },
                 [](const rep::Interval& p) {
                   require(std::isfinite(p.eta) && std::isfinite(p.zeta) && p.eta < p.zeta,
                           "Interval needs finite eta < zeta");
                 },
                 [](const auto&) {},
             },
             rep);
}

EvalResult eval_representation(const Representation& rep, const ExtBetaArgs& args, const MLParams& params,
                               const QuadConfig& qcfg) {
  validate(rep);
  args.validate();
  return eval_representation(rep, args, guarded_kernel(args, params, 0.25), qcfg);
}

EvalResult eval_representation(const Representation& rep, const ExtBetaArgs& args, const MittagLefflerK& kernel,
                               const QuadConfig& qcfg) {
  validate(rep);
  args.validate();
  const double k = kernel.params().k();
  return corrected(rep, args, Ctx{kernel, k, args.s / k, args.t / k, args.v, qcfg});
}

EvalResult paper_literal_representation(const Representation& rep, const ExtBetaArgs& args,
                                        const MLParams& params, const QuadConfig& qcfg) {
  validate(rep);
  args.validate();
  double peak = 0.25;
  if (const auto* p = std::get_if<rep::RationalMap>(&rep)) peak = printed_rational_peak(p->eta);
  const MittagLefflerK kernel = guarded_kernel(args, params, peak);
  const double k = params.k();
  return literal(rep, args, Ctx{kernel, k, args.s / k, args.t / k, args.v, qcfg});
}

}  // namespace kfun
