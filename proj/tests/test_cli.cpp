#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "icore/cli.hpp"
#include "icore/sequence.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = icore::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

// Set ICORE_UPDATE_GOLDEN=1 to rewrite the files.
void golden(const std::string& name, const std::string& text) {
  const fs::path p = fs::path(ICORE_GOLDEN_DIR) / name;
  if (std::getenv("ICORE_UPDATE_GOLDEN")) std::ofstream(p, std::ios::binary) << text;
  CHECK(slurp(p) == text);
}

}  // namespace

TEST_CASE("limits report") {
  auto r = call({"limits", "--seq", "sparse_spike(squares)", "--ideal", "fin"});
  REQUIRE(r.code == icore::cli::kOk);
  auto j = json::parse(r.out);
  CHECK(j["ilimsup"].get<double>() == Catch::Approx(1.0).margin(1e-2));
  CHECK(j["iliminf"].get<double>() == Catch::Approx(0.0).margin(1e-2));
  CHECK(j["convergent"] == false);
  CHECK(j["params"]["scale"] == 10000);
  auto z = json::parse(call({"limits", "--seq", "sparse_spike(squares)", "--ideal", "Z"}).out);
  CHECK(z["convergent"] == true);
  CHECK(z["limit"].get<double>() == Catch::Approx(0.0).margin(1e-2));
}

TEST_CASE("output is deterministic") {
  for (std::vector<std::string> args :
       {std::vector<std::string>{"core", "--seq", "cycle((0,0),(1,0),(0,1))+noise(0.05,2)", "--ideal", "Z",
                                 "--N", "3000", "--method", "all"},
        std::vector<std::string>{"clusters", "--seq", "alt+noise(0.005,5)", "--N", "5000"},
        std::vector<std::string>{"euler", "--seq", "alt", "--N", "2000", "--r", "0.5"}}) {
    auto a = call(args);
    auto b = call(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    args.push_back("--serial");
    CHECK(call(args).out.size() > 0);
  }
}

TEST_CASE("golden reports") {
  golden("limits_alt.json", call({"limits", "--seq", "alt", "--N", "1000"}).out);
  golden("limits_spike.csv",
         call({"limits", "--seq", "sparse_spike(squares)", "--N", "64", "--format", "csv"}).out);
  golden("core_alt.json", call({"core", "--seq", "alt", "--N", "2000", "--method", "all"}).out);
  golden("double_invsum.json",
         call({"double", "--seq", "inv_sum", "--double", "--M", "64", "--mode", "pringsheim"}).out);
}

TEST_CASE("core agreement across constructions") {
  auto r = call({"core", "--seq", "alt", "--method", "all"});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["cores"].size() == 3);
  CHECK(j["agreement"]["comparable"] == true);
  CHECK(j["agreement"]["within_tol_equiv"] == true);
  CHECK(j["agreement"]["max_hausdorff"].get<double>() <= 3e-2);
}

TEST_CASE("exit codes") {
  CHECK(call({"core", "--seq", "alt_linear", "--ideal", "density(0.05)"}).code == icore::cli::kUnbounded);
  CHECK(call({"limits", "--seq", "alt", "--bogus"}).code == icore::cli::kConfigError);
  CHECK(call({"limits", "--seq", "alt", "--N", "8"}).code == icore::cli::kConfigError);
  CHECK(call({"limits", "--seq", "nope"}).code == icore::cli::kConfigError);
  CHECK(call({"limits", "--seq", "alt", "--ideal", "IP"}).code == icore::cli::kConfigError);
  CHECK(call({"euler", "--seq", "alt", "--r", "9"}).code == icore::cli::kConfigError);
  CHECK(call({"verify", "--item", "nope"}).code == icore::cli::kConfigError);
  CHECK(call({}).code == icore::cli::kConfigError);
  auto h = call({"--help"});
  CHECK(h.code == icore::cli::kOk);
  CHECK(h.out.find("limits") != std::string::npos);
  auto bad = call({"limits", "--seq", "alt", "--bogus"});
  CHECK(bad.err.rfind("icore: ", 0) == 0);
  CHECK(std::count(bad.err.begin(), bad.err.end(), '\n') == 1);
}

TEST_CASE("csv input files") {
  const auto p = fs::temp_directory_path() / "icore_cli_input.csv";
  icore::export_csv(icore::generate("alt", 500), p);
  auto r = call({"limits", "--seq", p.string()});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["N"] == 500);
  CHECK(j["ilimsup"].get<double>() == Catch::Approx(1.0).margin(1e-2));
  std::ofstream(p) << "1\nfoo\n";
  CHECK(call({"limits", "--seq", p.string()}).code == icore::cli::kConfigError);
}

TEST_CASE("environment overrides") {
  ::setenv("ICORE_DELTA", "0.05", 1);
  auto j = json::parse(call({"limits", "--seq", "alt", "--N", "1000"}).out);
  ::unsetenv("ICORE_DELTA");
  CHECK(j["delta"].get<double>() == 0.05);
  CHECK(j["params"]["tol"].get<double>() == Catch::Approx(0.15));
  auto k = json::parse(call({"limits", "--seq", "alt", "--N", "1000", "--delta", "0.02"}).out);
  CHECK(k["delta"].get<double>() == 0.02);
}

TEST_CASE("out file") {
  const auto p = fs::temp_directory_path() / "icore_cli_out.json";
  fs::remove(p);
  auto r = call({"limits", "--seq", "alt", "--N", "100", "--out", p.string()});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  CHECK(json::parse(slurp(p))["N"] == 100);
}

TEST_CASE("verify one item") {
  auto r = call({"verify", "--item", "spike-z"});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  REQUIRE(j["items"].size() == 1);
  CHECK(j["items"][0]["passed"] == true);
  CHECK(j["items"][0]["checks"].size() == 6);
}
