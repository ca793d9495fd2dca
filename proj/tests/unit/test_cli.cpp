#include <filesystem>
#include <fstream>
#include <sstream>

#include "chse/cli/csv.hpp"
#include "chse/cli/run.hpp"
#include "doctest.h"

using namespace chse::cli;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("chse_unit_" + name);
  fs::remove_all(dir);
  return dir;
}

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "chse");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("csv quoting and number format") {
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(fmt(0.1) == "0.1");
    CHECK(std::stod(fmt(1.0 / 3.0)) == 1.0 / 3.0);
  }

  TEST_CASE("word prints the prefix and writes CSV with CRLF") {
    const auto dir = scratch("word");
    const auto r = invoke({"word", "--m", "1", "--length", "13", "--out", dir.string()});
    CHECK(r.code == 0);
    CHECK(r.out == "0100101001001\n");
    const auto csv = slurp(dir / "word.csv");
    CHECK(csv.rfind("position,symbol\r\n1,0\r\n2,1\r\n", 0) == 0);
    const auto manifest = Json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest["subcommand"] == "word");
    CHECK(manifest["status"] == "ok");
    CHECK(manifest["config"]["length"] == 13);
  }

  TEST_CASE("rotation coding from the CLI matches concatenation") {
    const auto a = invoke({"word", "--m", "2", "--length", "50", "--method", "rotation", "--out", scratch("rot").string()});
    const auto b = invoke({"word", "--m", "2", "--length", "50", "--out", scratch("cat").string()});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }

  TEST_CASE("trace-distance runs are reproducible") {
    const auto d1 = scratch("td1"), d2 = scratch("td2");
    const auto a = invoke({"trace-distance", "--n-max", "12", "--bits", "128", "--seed", "4", "--out", d1.string()});
    const auto b = invoke({"trace-distance", "--n-max", "12", "--bits", "128", "--seed", "4", "--out", d2.string()});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(slurp(d1 / "decay.csv") == slurp(d2 / "decay.csv"));
    CHECK(slurp(d1 / "decay.csv").rfind("n,t,delta,epsilon,bits\r\n", 0) == 0);
  }

  TEST_CASE("bound-check margins are nonnegative") {
    const auto dir = scratch("bound");
    const auto r = invoke({"bound-check", "--d", "3", "--instances", "20", "--out", dir.string()});
    CHECK(r.code == 0);
    std::istringstream csv(slurp(dir / "bound_check.csv"));
    std::string line;
    std::getline(csv, line);
    int rows = 0;
    while (std::getline(csv, line)) {
      if (line.empty() || line == "\r") continue;
      ++rows;
      CHECK(std::stod(line.substr(line.rfind(',') + 1)) >= -1e-12);
    }
    CHECK(rows == 20);
  }

  TEST_CASE("config file and flag precedence") {
    const auto dir = scratch("cfg");
    fs::create_directories(dir);
    {
      std::ofstream f(dir / "c.json");
      f << R"({"length": 5, "m": 2})";
    }
    const auto r = invoke({"word", "--config", (dir / "c.json").string(), "--length", "7", "--out", (dir / "o").string()});
    CHECK(r.code == 0);
    CHECK(r.out == "0010010\n");
  }

  TEST_CASE("configuration errors exit with 2") {
    CHECK(invoke({}).code == 2);
    CHECK(invoke({"haar-moment", "--d", "1", "--out", scratch("e1").string()}).code == 2);
    CHECK(invoke({"word", "--length", "abc", "--out", scratch("e2").string()}).code == 2);
    CHECK(invoke({"word", "--no-such-flag", "1"}).code == 2);
    const auto r = invoke({"coin-baseline", "--p", "0", "--out", scratch("e3").string()});
    CHECK(r.code == 2);
    const auto err = Json::parse(r.err);
    CHECK(err["error"] == "invalid_argument");
    const auto dir = scratch("e4");
    fs::create_directories(dir);
    {
      std::ofstream f(dir / "c.json");
      f << R"({"lenght": 5})";
    }
    CHECK(invoke({"word", "--config", (dir / "c.json").string(), "--out", (dir / "o").string()}).code == 2);
  }

  TEST_CASE("ledger violation exits with 3") {
    const auto dir = scratch("ledger");
    const auto r = invoke({"trace-distance", "--bits", "64", "--n-max", "60", "--out", dir.string()});
    CHECK(r.code == 3);
    CHECK(Json::parse(r.err)["error"] == "ledger_violation");
    const auto manifest = Json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest["status"] != "ok");
  }

  TEST_CASE("exit codes by category") {
    CHECK(exit_code_for("invalid_argument") == 2);
    CHECK(exit_code_for("dimension") == 2);
    CHECK(exit_code_for("ledger_violation") == 3);
    CHECK(exit_code_for("resource_limit") == 4);
    CHECK(exit_code_for("internal") == 1);
  }

  TEST_CASE("help exits cleanly") {
    const auto r = invoke({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("gamma-map") != std::string::npos);
  }
}
