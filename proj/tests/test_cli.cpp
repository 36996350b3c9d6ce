#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"
#include "fraclap/errors.hpp"
#include "fraclap/parallel.hpp"
#include "schema.hpp"

namespace fs = std::filesystem;
using fraclap::cli::run;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "fraclap");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("fraclap_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("constants subcommand") {
  const Outcome r = invoke({"constants", "--n", "1", "--s", "0.5"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["c"].get<double>() == doctest::Approx(0.3183098861837907).epsilon(1e-12));
  CHECK(j["b"].is_null());
  const Outcome csv = invoke({"constants", "--n", "3", "--s", "0.25", "--format", "csv"});
  CHECK(csv.code == 0);
  CHECK(csv.out.rfind("key,value\n", 0) == 0);
  CHECK(csv.out.find("\nb,") != std::string::npos);
}

TEST_CASE("usage and configuration errors exit with 2 and leave no output") {
  const std::string out = (scratch() / "never.json").string();
  const std::string bad = write_file("bad.json", "{\"n\": 1, \"s\": ");
  Outcome r = invoke({"constants", "--config", bad, "-o", out});
  CHECK(r.code == 2);
  CHECK_FALSE(fs::exists(out));
  CHECK(nlohmann::json::parse(r.err)["error"] == "config");

  const std::string unknown = write_file("unknown.json", R"({"n": 1, "s": 0.5, "colour": "red"})");
  r = invoke({"constants", "--config", unknown, "-o", out});
  CHECK(r.code == 2);
  CHECK(r.err.find("colour") != std::string::npos);
  CHECK_FALSE(fs::exists(out));

  CHECK(invoke({"constants", "--n", "1"}).code == 2);
  CHECK(invoke({"constants", "--n", "1", "--s", "1.5"}).code == 2);
  CHECK(invoke({"bogus"}).code == 2);
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"constants", "--config", (scratch() / "missing.json").string()}).code == 2);
  CHECK(invoke({"eval", "--field", "gaussian", "--s", "0.5", "--point", "0,x"}).code == 2);
  // Inputs outside the model are usage errors too.
  CHECK(invoke({"solve-ball", "--s", "0.5", "--point", "0"}).code == 2);
  CHECK(invoke({"--help"}).code == 0);
  const Outcome schema = invoke({"--print-schema"});
  CHECK(schema.code == 0);
  CHECK(nlohmann::json::parse(schema.out) == fraclap::cli::config_schema());
}

TEST_CASE("atomic output") {
  const std::string path = (scratch() / "atomic.txt").string();
  fraclap::cli::write_atomically(path, "first\n");
  fraclap::cli::write_atomically(path, "second\n");
  CHECK(slurp(path) == "second\n");
  for (const auto& e : fs::directory_iterator(scratch())) {
    CHECK(e.path().filename().string().find(".tmp-") == std::string::npos);
  }
  CHECK_THROWS_AS(fraclap::cli::write_atomically((scratch() / "no/such/dir/x").string(), "x"), fraclap::UsageError);
}

TEST_CASE("identical config and seed give byte-identical files") {
  const std::string cfg = write_file("mc.json", R"({"n": 2, "s": 0.4, "N": 4000, "seed": 12,
    "g": "gaussian", "points": [[0.1, 0.2], [0.0, -0.5]]})");
  const std::string a = (scratch() / "a.json").string();
  const std::string b = (scratch() / "b.json").string();
  const std::string c = (scratch() / "c.json").string();
  const std::string d = (scratch() / "d.json").string();
  fraclap::set_thread_cap(1);
  CHECK(invoke({"mc", "--config", cfg, "-o", a}).code == 0);
  fraclap::set_thread_cap(3);
  CHECK(invoke({"mc", "--config", cfg, "-o", b}).code == 0);
  fraclap::set_thread_cap(0);
  CHECK(slurp(a) == slurp(b));
  CHECK(nlohmann::json::parse(slurp(a))["seed"] == 12);

  CHECK(invoke({"mc", "--config", cfg, "--seed", "13", "-o", c}).code == 0);
  CHECK(slurp(c) != slurp(a));
  CHECK(nlohmann::json::parse(slurp(c))["seed"] == 13);
  const std::string cfg13 = write_file("mc13.json", R"({"n": 2, "s": 0.4, "N": 4000, "seed": 13,
    "g": "gaussian", "points": [[0.1, 0.2], [0.0, -0.5]]})");
  CHECK(invoke({"mc", "--config", cfg13, "-o", d}).code == 0);
  CHECK(slurp(c) == slurp(d));
}

TEST_CASE("monte carlo exit sample dump") {
  const std::string dump = (scratch() / "exits.csv").string();
  const Outcome r = invoke({"mc", "--s", "0.5", "--g", "gaussian", "--point", "0.2", "--N", "500",
                            "--dump-samples", dump});
  REQUIRE(r.code == 0);
  std::istringstream lines(slurp(dump));
  std::string line;
  int count = 0;
  std::getline(lines, line);
  CHECK(line == "y0");
  while (std::getline(lines, line)) {
    CHECK(std::abs(std::stod(line)) > 1.0);
    ++count;
  }
  CHECK(count == 500);
}

TEST_CASE("numeric subcommands") {
  Outcome r = invoke({"eval", "--field", "gaussian", "--s", "0.5", "--point", "0", "--point", "1.5"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["results"][0]["value"].get<double>() == doctest::Approx(1.1283791670955126).epsilon(1e-8));
  CHECK(j["results"].size() == 2);

  r = invoke({"spectral", "--field", "gaussian", "--s", "0.5", "--L", "40", "--N", "256", "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("x,u,op\n", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 257);

  r = invoke({"extend", "--field", "gaussian", "--s", "0.5", "--point", "0,0.5"});
  REQUIRE(r.code == 0);
  j = nlohmann::json::parse(r.out);
  CHECK(j["values"][0]["v"].get<double>() > 0.0);

  const std::string cfg = write_file("ball.json", R"({"s": 0.5, "f": "constant", "points": [0.0, 0.5, 1.5]})");
  r = invoke({"solve-ball", "--config", cfg});
  REQUIRE(r.code == 0);
  j = nlohmann::json::parse(r.out);
  // u = (1 - x^2)^s Gamma(1/2) / (2 Gamma(3/2) Gamma(1)) = sqrt(1 - x^2) for f = 1.
  CHECK(j["results"][0]["u"].get<double>() == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(j["results"][1]["u"].get<double>() == doctest::Approx(std::sqrt(0.75)).epsilon(1e-7));
  CHECK(j["results"][2]["u"].get<double>() == 0.0);

  r = invoke({"mc", "--s", "0.5", "--g", "gaussian", "--point", "0", "--N", "2000", "--mode", "generator",
              "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("x,t,estimate,std_error\n", 0) == 0);
}

TEST_CASE("verify and approx subcommands") {
  Outcome r = invoke({"verify", "--suite", "max"});
  CHECK(r.code == 0);
  const auto reports = nlohmann::json::parse(r.out);
  CHECK(reports.size() == 5);
  for (const auto& rep : reports) CHECK(rep["verdict"] == "pass");
  CHECK(invoke({"verify", "--suite", "nothing"}).code == 2);

  const std::string table = (scratch() / "fit.csv").string();
  r = invoke({"approx", "--target", "x2", "--m", "20", "--R", "3", "--s", "0.5", "--table", table});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["coefficients"].size() == 20);
  CHECK(j["achieved_error"].get<double>() < 1e-2);
  CHECK(slurp(table).rfind("x,target,fit\n", 0) == 0);
  CHECK(invoke({"approx", "--R", "1.2", "--m", "4", "--width", "0.5"}).code == 2);
}
