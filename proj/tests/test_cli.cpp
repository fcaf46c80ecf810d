#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "flagkit/einstein.hpp"

using namespace flagkit;
using json = nlohmann::ordered_json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_config(const std::string& name, const std::string& text) {
  const std::string path = (std::filesystem::temp_directory_path() / ("flagkit_cli_" + name + ".conf")).string();
  std::ofstream(path) << text;
  return path;
}

size_t count_lines(const std::string& s, const std::string& needle) {
  size_t n = 0;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) n += line.find(needle) != std::string::npos;
  return n;
}

}  // namespace

TEST_CASE("roots of A1 and G2") {
  auto r = run({"roots", "--type", "A1", "--format", "json"});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["tool"] == "flagkit");
  CHECK(j["command"] == "roots");
  CHECK(j["results"]["positive_roots"].size() == 1);
  CHECK(!j.contains("timing_ms"));
  r = run({"roots", "--type", "G2", "--format", "json"});
  CHECK(json::parse(r.out)["results"]["positive_roots"].size() == 6);
}

TEST_CASE("ke prints six rows and twelve integrable structures") {
  auto r = run({"ke", "--type", "G2"});
  REQUIRE(r.code == 0);
  CHECK(count_lines(r.out, "  J ") == 6);
  CHECK(r.out.find("(3,1,4,5,6,9)") != std::string::npos);
  CHECK(r.out.find("12 of 64") != std::string::npos);
  r = run({"ke", "--type", "G2", "--all-structures", "--format", "json"});
  auto j = json::parse(r.out);
  CHECK(j["results"]["metrics"].size() == 12);
  CHECK(j["results"]["metrics"][0]["lambda"]["1,0"] == "3");
  CHECK(j["results"]["metrics"][0]["residual"] == "0");
}

TEST_CASE("equi pair example") {
  auto r = run({"equi", "pair", "--type", "G2", "--roots", "0,1;2,3"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("true") != std::string::npos);
  r = run({"equi", "pair", "--type", "G2", "--roots", "1,0;0,1", "--format", "json"});
  auto j = json::parse(r.out);
  CHECK(j["results"]["equigeodesic"] == false);
  CHECK(j["results"]["bracket_agrees"] == true);
}

TEST_CASE("equi check reports a witness") {
  auto r = run({"equi", "check", "--type", "G2", "--parabolic", "1", "--roots", "0,1;1,3", "--coeffs", "1;2",
                "--format", "json"});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["results"]["equigeodesic"] == false);
  CHECK(j["results"]["witness"]["root"] == "1,2");
  r = run({"equi", "check", "--type", "G2", "--parabolic", "1", "--roots", "0,1;1,1", "--coeffs", "1;1:2"});
  CHECK(r.code == 0);
  CHECK(r.out.find("equigeodesic: true") != std::string::npos);
}

TEST_CASE("equi check accepts a JSON vector") {
  const std::vector<std::string> base = {"equi", "check", "--type", "G2", "--parabolic", "1", "--format", "json",
                                         "--vector"};
  auto with = [&](const std::string& v) {
    auto args = base;
    args.push_back(v);
    return run(args);
  };
  auto exact = with(R"({"0,1": [1, 0], "1,3": ["2", 0]})");
  auto numeric = with(R"({"0,1": [1.0, 0.0], "1,3": [2.0, 0.0]})");
  REQUIRE(exact.code == 0);
  REQUIRE(numeric.code == 0);
  const auto je = json::parse(exact.out)["results"], jn = json::parse(numeric.out)["results"];
  CHECK(je["equigeodesic"] == false);
  CHECK(je["family"] == jn["family"]);
  CHECK(je["witness"]["root"] == jn["witness"]["root"]);
  CHECK(json::parse(with(R"({"0,1": [1, 0], "1,1": [0, 2]})").out)["results"]["equigeodesic"] == true);
  CHECK(with(R"({"0,1": [1]})").code == 1);
  CHECK(with(R"({"1,0": [1, 0]})").code == 1);
  CHECK(with("not json").code == 1);
}

TEST_CASE("exit codes") {
  CHECK(run({"--help"}).code == 0);
  CHECK(run({}).code == 1);
  CHECK(run({"roots"}).code == 1);
  CHECK(run({"roots", "--type", "Q7"}).code == 1);
  CHECK(run({"roots", "--type", "A2", "--format", "xml"}).code == 1);
  CHECK(run({"roots", "--type", "A2", "--format", "csv"}).code == 1);
  CHECK(run({"flag", "--type", "A2", "--parabolic", "5"}).code == 1);
  CHECK(run({"equi", "pair", "--type", "G2", "--parabolic", "1", "--roots", "0,1;1,2"}).code == 1);
  CHECK(run({"equi", "pair", "--type", "G2", "--roots", "3,3;0,1"}).code == 1);
  CHECK(run({"einstein", "check", "--type", "G2", "--metric", "1,2"}).code == 1);
  CHECK(run({"einstein", "check", "--type", "G2", "--metric", "1,2,3,4,5,-6"}).code == 1);
  CHECK(run({"einstein", "solve", "--type", "G2", "--parabolic", "1", "--tol", "0"}).code == 1);
  CHECK(run({"einstein", "solve", "--type", "G2", "--parabolic", "1", "--tol", "1e-300", "--starts", "3"}).code == 2);
}

TEST_CASE("einstein check and solve") {
  auto r = run({"einstein", "check", "--type", "G2", "--metric", "3,1,4,5,6,9", "--format", "json"});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["results"]["einstein"] == true);
  CHECK(j["results"]["residual"].get<double>() < 1e-10);
  r = run({"einstein", "check", "--type", "G2", "--parabolic", "2", "--metric", "1,1"});
  CHECK(r.out.find("einstein: false") != std::string::npos);

  r = run({"einstein", "solve", "--type", "G2", "--parabolic", "1", "--starts", "60", "--format", "json"});
  REQUIRE(r.code == 0);
  j = json::parse(r.out);
  const auto& sols = j["results"]["solutions"];
  CHECK(sols.size() == 3);
  size_t kahler = 0;
  for (const auto& s : sols) {
    CHECK(s["c"].get<double>() > 0);
    CHECK(s["residual"].get<double>() <= 1e-10);
    kahler += !s["kahler_for"].is_null();
  }
  CHECK(kahler == 1);
}

TEST_CASE("csv output") {
  auto r = run({"einstein", "solve", "--type", "G2", "--parabolic", "2", "--starts", "30", "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("index,t_root,dim,lambda,residual\n", 0) == 0);
  CHECK(count_lines(r.out, ",") == 1 + 2 * 2);
  r = run({"flag", "--type", "G2", "--format", "csv"});
  CHECK(r.out.find("1,\"1,0\",2,,\n") != std::string::npos);
}

TEST_CASE("config precedence and errors") {
  const auto empty = temp_config("empty", "");
  auto r = run({"roots", "--type", "A1", "--config", empty});
  CHECK(r.code == 0);
  CHECK(r.err.empty());

  std::vector<std::string> warnings;
  auto o = cli::load_config(temp_config("tol", "# comment\n\ntol = 1e-12\n"), {}, warnings);
  CHECK(o.tol == doctest::Approx(1e-12).epsilon(1e-15));
  CHECK(warnings.empty());

  o = cli::load_config(temp_config("dup", "seed=1\nseed=2\n"), {}, warnings);
  CHECK(o.seed == 2);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find(":2:") != std::string::npos);

  CHECK_THROWS_AS(cli::load_config(temp_config("bad", "seed 4\n"), {}, warnings), cli::ConfigError);
  CHECK_THROWS_AS(cli::load_config(temp_config("unknown", "color=red\n"), {}, warnings), cli::ConfigError);
  CHECK_THROWS_AS(cli::load_config(temp_config("value", "starts=ten\n"), {}, warnings), cli::ConfigError);
  CHECK_THROWS_AS(cli::load_config("no/such/file.conf", {}, warnings), cli::ConfigError);
  try {
    cli::load_config(temp_config("line", "seed=1\n\nfoo\n"), {}, warnings);
    FAIL("expected ConfigError");
  } catch (const cli::ConfigError& e) {
    CHECK(std::string(e.what()).find(":3:") != std::string::npos);
  }
  CHECK(run({"roots", "--type", "A1", "--config", temp_config("bad", "seed 4\n")}).code == 1);

  const auto fmt = temp_config("fmt", "format=json\n");
  r = run({"roots", "--type", "A1", "--config", fmt});
  CHECK(json::parse(r.out)["command"] == "roots");
  r = run({"roots", "--type", "A1", "--config", fmt, "--format", "table"});
  CHECK(r.out.rfind("A1", 0) == 0);
}

TEST_CASE("json output is deterministic") {
  const std::vector<std::string> args = {"einstein", "solve", "--type", "G2", "--parabolic", "1", "--starts", "40",
                                         "--seed", "7", "--format", "json"};
  auto a = run(args);
  auto b = run(args);
  CHECK(a.out == b.out);
  auto threads = args;
  threads.insert(threads.end(), {"--threads", "1"});
  CHECK(run(threads).out == a.out);
  CHECK(run({"ke", "--type", "G2", "--format", "json"}).out == run({"ke", "--type", "G2", "--format", "json"}).out);
}

TEST_CASE("timing only on request") {
  auto r = run({"roots", "--type", "A2", "--format", "json", "--timing"});
  CHECK(json::parse(r.out).contains("timing_ms"));
  r = run({"roots", "--type", "A2", "--timing"});
  CHECK(r.out.find("time: ") != std::string::npos);
}

TEST_CASE("metric json round trip") {
  const auto f = build_flag(build_root_system(LieType::parse("G2")), {});
  auto r = run({"ke", "--type", "G2", "--all-structures", "--format", "json"});
  for (const auto& m : json::parse(r.out)["results"]["metrics"]) {
    const ExactMetric x = cli::exact_metric_from_json(f, m["lambda"]);
    const ComplexStructure j{m["kahler_for"].get<std::vector<int>>()};
    CHECK(x.lambdas == integer_rescaled(kahler_einstein_metric(f, j).raw).lambdas);
  }

  const auto f1 = build_flag(build_root_system(LieType::parse("G2")), {0});
  r = run({"einstein", "solve", "--type", "G2", "--parabolic", "1", "--starts", "40", "--format", "json"});
  const CTensor c = c_tensor(f1, assign_signs(f1.root_system()));
  for (const auto& s : json::parse(r.out)["results"]["solutions"]) {
    const NumericMetric m = cli::numeric_metric_from_json(f1, s["lambda"]);
    CHECK(best_einstein_residual(f1, c, m).max_residual <= 1e-10);
  }
  json bad = {{"0,1", 1.0}};
  CHECK_THROWS_AS(cli::numeric_metric_from_json(f1, bad), std::invalid_argument);
  json wrong = {{"0,1", "1"}, {"1,2", 2}, {"1,3", "3"}};
  CHECK_THROWS_AS(cli::exact_metric_from_json(f1, wrong), std::invalid_argument);
}

TEST_CASE("verify subcommand") {
  auto r = run({"verify", "--starts", "40"});
  CHECK(r.code == 0);
  CHECK(count_lines(r.out, "PASS") == 11);
}
