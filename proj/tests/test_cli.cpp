#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kfun/cli.hpp"

using namespace kfun;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::vector<std::string> kUnitDist = {"--s", "2", "--t", "2", "--v", "1", "--l", "1", "--p", "1", "--q", "1",
                                            "--k", "1"};

std::vector<std::string> with(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

TEST_CASE("eval") {
  auto r = run({"eval", "--fn", "k_gamma", "--eta", "5", "--k", "1"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.rfind("value          24\n", 0) == 0);

  r = run({"eval", "--fn", "extended_beta_k", "--s", "2", "--t", "2", "--v", "0", "--k", "1", "--p", "1", "--q", "1",
           "--r", "1", "--mode", "classical", "--format", "json"});
  CHECK(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["value"].get<double>() == doctest::Approx(1.0 / 6).epsilon(1e-12));
  CHECK(j["converged"] == true);

  r = run({"eval", "--fn", "k_gamma", "--eta", "-1", "--k", "1"});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("eta > 0") != std::string::npos);
}

TEST_CASE("eval: human output has 12 significant digits") {
  const auto r = run({"eval", "--fn", "k_beta", "--s", "1", "--t", "2", "--k", "3"});
  CHECK(r.code == kExitOk);
  // beta_3(1, 2) = B(1/3, 2/3) / 3 = (pi / sin(pi/3)) / 3.
  CHECK(r.out.rfind("value          1.20919957616\n", 0) == 0);
}

TEST_CASE("eval: bindings are checked") {
  CHECK(run({"eval", "--fn", "k_gamma", "--eta", "5"}).code == kExitUsage);                     // missing k
  CHECK(run({"eval", "--fn", "k_gamma", "--eta", "5", "--k", "1", "--s", "2"}).code == kExitUsage);  // extra
  CHECK(run({"eval", "--fn", "k_gamma", "--eta", "5", "--eta", "6", "--k", "1"}).code == kExitUsage);
  CHECK(run({"eval", "--fn", "k_gamma", "--eta", "5", "--k", "1", "--bogus", "1"}).code == kExitUsage);
  CHECK(run({"eval", "--fn", "nope", "--k", "1"}).code == kExitUsage);
  CHECK(run({"eval", "--fn", "k_gamma", "--eta", "5", "--k", "1", "--mode", "kdeformed"}).code == kExitUsage);
  CHECK(run({"eval", "--fn", "eval_representation", "--s", "1", "--t", "1", "--v", "0", "--k", "1", "--p", "1",
             "--q", "1", "--r", "1"})
            .code == kExitUsage);  // no --repr
  CHECK(run({}).code == kExitUsage);
}

TEST_CASE("eval: representations and non-convergence") {
  auto r = run({"eval", "--fn", "eval_representation", "--repr", "Power", "--n", "2", "--s", "2", "--t", "2", "--v",
                "0", "--k", "1", "--p", "1", "--q", "1", "--r", "1"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.rfind("value          0.166666666667\n", 0) == 0);
  r = run({"eval", "--fn", "eval_representation", "--repr", "Power", "--n", "2", "--printed", "--s", "2", "--t", "2",
           "--v", "0", "--k", "1", "--p", "1", "--q", "1", "--r", "1"});
  CHECK(r.out.rfind("value          0.266666666667\n", 0) == 0);

  // A relative tolerance below double rounding cannot be met.
  r = run({"eval", "--fn", "extended_beta_k", "--s", "0.3", "--t", "0.4", "--v", "1", "--k", "1", "--p", "1", "--q",
           "1", "--r", "1", "--rel-tol", "1e-16", "--abs-tol", "1e-300"});
  CHECK(r.code == kExitNotConverged);
  CHECK(r.out.find("converged      false") != std::string::npos);
}

TEST_CASE("table") {
  const auto r = run({"table", "--fn", "mittag_leffler_k", "--var", "x", "--from", "-1", "--to", "0", "--steps", "2",
                      "--k", "1", "--p", "1", "--q", "1", "--r", "1"});
  CHECK(r.code == kExitOk);
  std::istringstream in(r.out);
  std::string header, row;
  std::getline(in, header);
  CHECK(header == "x,value,error_estimate,converged,note");
  std::getline(in, row);
  CHECK(row.rfind("-1,0.36787944117144", 0) == 0);
  CHECK(run({"table", "--fn", "k_gamma", "--var", "s", "--k", "1"}).code == kExitUsage);
  CHECK(run({"table", "--fn", "k_gamma", "--var", "eta", "--eta", "1", "--k", "1"}).code == kExitUsage);
}

TEST_CASE("dist") {
  auto r = run({"dist", "--query", "mean", "--s", "1", "--t", "1", "--v", "0", "--l", "1", "--p", "1", "--q", "1",
                "--k", "1"});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "0.5\n");
  r = run({"dist", "--query", "variance", "--s", "2", "--t", "2", "--v", "0", "--l", "1", "--p", "1", "--q", "1",
           "--k", "1"});
  CHECK(r.out == "0.05\n");

  const auto a = run(with({"dist", "--query", "sample", "--n", "3", "--seed", "42"}, kUnitDist));
  const auto b = run(with({"dist", "--query", "sample", "--n", "3", "--seed", "42"}, kUnitDist));
  CHECK(a.code == kExitOk);
  CHECK(a.out == b.out);
  CHECK(std::count(a.out.begin(), a.out.end(), '\n') == 3);

  CHECK(run(with({"dist", "--query", "sample", "--n", "3"}, kUnitDist)).code == kExitUsage);
  CHECK(run(with({"dist", "--query", "pdf"}, kUnitDist)).code == kExitUsage);  // needs --x
  CHECK(run(with({"dist", "--query", "pdf", "--x", "0.5"}, kUnitDist)).out == "1.42476163281\n");

  // cos(sqrt x) kernel: the density goes negative.
  r = run({"dist", "--query", "mean", "--s", "1", "--t", "1", "--v", "50", "--l", "1", "--p", "2", "--q", "1", "--k",
           "1"});
  CHECK(r.code == kExitUsage);
  CHECK(!r.err.empty());
}

TEST_CASE("audit") {
  auto r = run({"audit", "--grid", "empty"});
  CHECK(r.code == kExitOk);
  CHECK(nlohmann::json::parse(r.out)["summary"]["total"] == 0);

  CHECK(run({"audit", "--grid", "empty", "--out", "/nonexistent/dir/x.json"}).code == kExitIo);
  CHECK(run({"audit", "--grid", "huge"}).code == kExitUsage);
  CHECK(run({"audit", "--grid", "empty", "--axis", "w=1"}).code == kExitUsage);

  // A tiny grid through the file path, twice.
  const std::vector<std::string> args = {"audit",      "--grid",    "empty",   "--axis", "k=1",    "--axis",
                                         "s=1,2",      "--axis",    "t=1.5",   "--axis", "v=0,1",  "--axis",
                                         "p=1",        "--axis",    "q=1",     "--axis", "r=1",    "--axis",
                                         "mode=classical", "--format", "csv"};
  const std::string p1 = "test_cli_audit_1.csv", p2 = "test_cli_audit_2.csv";
  CHECK(run(with(args, {"--out", p1})).code == kExitOk);
  CHECK(run(with(args, {"--out", p2, "--threads", "3"})).code == kExitOk);
  const std::string c1 = slurp(p1);
  CHECK(!c1.empty());
  CHECK(c1 == slurp(p2));
  CHECK(c1.rfind("identity_id,eta,k,mode,n,p,part,q,r,", 0) == 0);
  std::remove(p1.c_str());
  std::remove(p2.c_str());
}

TEST_CASE("show-config") {
  const auto r = run({"--show-config"});
  CHECK(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["mode"] == "classical");
  CHECK(j["grids"]["default"]["k"].size() == 3);
  CHECK(j["quadrature"]["rel_tol"] == 1e-10);
}
