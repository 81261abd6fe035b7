#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kloosterlab/experiment.hpp"
#include "kloosterlab/report.hpp"

namespace fs = std::filesystem;
using namespace kloosterlab;
using cli::ExperimentConfig;
using cli::Format;
using cli::Kind;

namespace {

fs::path scratch_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "kloosterlab_experiment_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig make(Kind kind, std::map<std::string, std::string> params,
                      const std::string& output, Format format = Format::csv) {
  ExperimentConfig config;
  config.kind = kind;
  config.params = std::move(params);
  config.output = output;
  config.format = format;
  return config;
}

}  // namespace

TEST_CASE("number formatting") {
  using report::format_number;
  CHECK(format_number(0.2) == "0.200000");
  CHECK(format_number(2.2360679774997896) == "2.236068");
  CHECK(format_number(0.44721359549995793) == "0.447214");
  CHECK(format_number(0.0) == "0.000000");
  CHECK(format_number(1e-12) == "1.000000e-12");
  CHECK(format_number(3.5e12) == "3.500000e+12");
  CHECK(format_number(-0.5) == "-0.500000");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("vst report matches the frozen row") {
  const auto out = scratch_dir() / "vst.csv";
  const auto outcome = cli::run(make(Kind::vst, {{"p", "5"}, {"k", "1"}}, out.string()));
  CHECK(outcome.exit_code == 0);
  CHECK(slurp(out) ==
        "kind,p,k,observed,bound,ratio\n"
        "vst,5,1,0.447214,2.236068,0.200000\n");
}

TEST_CASE("validation failures exit 2, cost guards exit 3") {
  CHECK(cli::run(make(Kind::table, {{"p", "10"}}, "")).exit_code == 2);   // composite p
  CHECK(cli::run(make(Kind::vst, {{"p", "5"}}, "")).exit_code == 2);      // missing k
  CHECK(cli::run(make(Kind::vst, {{"p", "5"}, {"k", "1"}, {"bogus", "1"}}, "")).exit_code == 2);
  CHECK(cli::run(make(Kind::extremes, {{"p", "5"}, {"delta", "0"}}, "")).exit_code == 2);
  CHECK(cli::run(make(Kind::table, {{"p", "1000003"}, {"method", "naive"}}, "")).exit_code == 3);
  CHECK(cli::run(make(Kind::moments, {{"p", "5"}, {"alpha", "1.5"}, {"signed", "true"}}, ""))
            .exit_code == 2);
}

TEST_CASE("reports are deterministic across reruns") {
  const auto out1 = scratch_dir() / "interval1.csv";
  const auto out2 = scratch_dir() / "interval2.csv";
  const std::map<std::string, std::string> params{
      {"p", "1009"}, {"k", "1"}, {"N", "40"}, {"samples", "5"}, {"seed", "7"}};
  CHECK(cli::run(make(Kind::interval, params, out1.string())).exit_code == 0);
  CHECK(cli::run(make(Kind::interval, params, out2.string())).exit_code == 0);
  const std::string text = slurp(out1);
  CHECK(text == slurp(out2));
  CHECK(text.rfind("# seed=7\n", 0) == 0);  // seed recorded in the header
  CHECK(text.find("kind,p,h,k,M,N,observed,bound_omega_r,r_star,ratio\n") != std::string::npos);
}

TEST_CASE("json mirrors the csv fields") {
  const auto out = scratch_dir() / "vst.json";
  CHECK(cli::run(make(Kind::vst, {{"p", "5"}, {"k", "1"}}, out.string(), Format::json))
            .exit_code == 0);
  const std::string text = slurp(out);
  CHECK(text.find("\"kind\": \"vst\"") != std::string::npos);
  CHECK(text.find("\"observed\"") != std::string::npos);
  CHECK(text.find("\"ratio\"") != std::string::npos);
}

TEST_CASE("table caching round trip") {
  const auto cache = scratch_dir() / "cache";
  const auto out1 = scratch_dir() / "table1.csv";
  const auto out2 = scratch_dir() / "table2.csv";
  const std::map<std::string, std::string> params{{"p", "101"}, {"cache", cache.string()}};
  CHECK(cli::run(make(Kind::table, params, out1.string())).exit_code == 0);
  CHECK(fs::exists(cache / "kloosterman_p101_b1.klt"));
  CHECK(cli::run(make(Kind::table, params, out2.string())).exit_code == 0);  // cache hit
  CHECK(slurp(out1) == slurp(out2));
}

TEST_CASE("config files and overrides") {
  const auto file = scratch_dir() / "exp.conf";
  {
    std::ofstream out(file);
    out << "# demo config\n"
        << "kind = vst\n"
        << "p = 7\n"
        << "k = 1\n"
        << "format = csv\n";
  }
  auto config = cli::load_config_file(file.string());
  CHECK(config.kind == Kind::vst);
  CHECK(config.params.at("p") == "7");

  // flag overrides beat the file
  config.params["p"] = "5";
  const auto out = scratch_dir() / "override.csv";
  config.output = out.string();
  CHECK(cli::run(config).exit_code == 0);
  CHECK(slurp(out).find("vst,5,1,") != std::string::npos);

  CHECK_THROWS_AS(cli::load_config_file((scratch_dir() / "missing.conf").string()), UsageError);
  const auto bad = scratch_dir() / "bad.conf";
  {
    std::ofstream out_bad(bad);
    out_bad << "p = 7\n";  // no kind
  }
  CHECK_THROWS_AS(cli::load_config_file(bad.string()), UsageError);
}

TEST_CASE("sweep determinism and failure handling") {
  auto config_for = [&](std::uint64_t p, const std::string& name) {
    return make(Kind::vst, {{"p", std::to_string(p)}, {"k", "2"}},
                (scratch_dir() / name).string());
  };
  std::vector<ExperimentConfig> configs{config_for(13, "s13.csv"), config_for(5, "s5.csv"),
                                        config_for(7, "s7.csv")};
  const auto agg1 = scratch_dir() / "agg1.csv";
  const auto agg2 = scratch_dir() / "agg2.csv";
  CHECK(cli::sweep(configs, 1, agg1.string(), Format::csv).exit_code == 0);
  for (auto& c : configs) c.output += ".2";  // fresh child outputs
  CHECK(cli::sweep(configs, 3, agg2.string(), Format::csv).exit_code == 0);
  CHECK(slurp(agg1) == slurp(agg2));
  // sorted by p regardless of submission order
  const std::string text = slurp(agg1);
  CHECK(text.find("vst,5,") < text.find("vst,7,"));
  CHECK(text.find("vst,7,") < text.find("vst,13,"));

  // duplicate outputs rejected before execution
  std::vector<ExperimentConfig> dup{config_for(5, "dup.csv"), config_for(7, "dup.csv")};
  CHECK(cli::sweep(dup, 2, (scratch_dir() / "aggdup.csv").string(), Format::csv).exit_code == 2);

  // empty list: empty aggregate, exit 0
  const auto empty_agg = scratch_dir() / "empty.csv";
  CHECK(cli::sweep({}, 2, empty_agg.string(), Format::csv).exit_code == 0);
  CHECK(slurp(empty_agg).empty());

  // child failure: other rows still written, nonzero aggregate exit
  std::vector<ExperimentConfig> mixed{config_for(5, "ok.csv"),
                                      make(Kind::vst, {{"p", "10"}, {"k", "1"}},
                                           (scratch_dir() / "bad_child.csv").string())};
  const auto agg3 = scratch_dir() / "agg3.csv";
  CHECK(cli::sweep(mixed, 2, agg3.string(), Format::csv).exit_code == 2);
  CHECK(fs::exists(scratch_dir() / "ok.csv"));
  CHECK(slurp(agg3).find("vst,5,") != std::string::npos);
}

TEST_CASE("gm and bounds kinds produce rows") {
  const auto gm_out = scratch_dir() / "gm.csv";
  CHECK(cli::run(make(Kind::gm, {{"p", "101"}, {"h", "5"}, {"r", "1"}, {"k", "1"}},
                      gm_out.string()))
            .exit_code == 0);
  CHECK(slurp(gm_out).find("gm,101,1,5,1,1,") != std::string::npos);

  const auto bounds_out = scratch_dir() / "bounds.csv";
  CHECK(cli::run(make(Kind::bounds, {{"p", "1009"}, {"N", "100"}, {"k", "2"}},
                      bounds_out.string()))
            .exit_code == 0);
  const std::string text = slurp(bounds_out);
  CHECK(text.find("bounds,weil,1009,") != std::string::npos);
  CHECK(text.find("bounds,omega_r,1009,100,") != std::string::npos);
  CHECK(text.find("bounds,omega_r_min,1009,") != std::string::npos);
  CHECK(text.find("bounds,katz,1009,") != std::string::npos);
}

TEST_CASE("multisum kind") {
  const auto out = scratch_dir() / "multisum.csv";
  CHECK(cli::run(make(Kind::multisum,
                      {{"p", "101"}, {"polys", "1:0|1:3"}, {"orders", "1|2"}, {"h", "1"}},
                      out.string()))
            .exit_code == 0);
  const std::string text = slurp(out);
  CHECK(text.find("multisum,101,2,1:0|1:3,1|2,1,") != std::string::npos);
  CHECK(cli::run(make(Kind::multisum, {{"p", "101"}, {"polys", "1:0"}, {"orders", "1|2"}}, ""))
            .exit_code == 2);
}

#ifdef KLOOSTERLAB_CLI_PATH
TEST_CASE("command line binary end to end") {
  const std::string cli = KLOOSTERLAB_CLI_PATH;
  const auto out = scratch_dir() / "cli_out.txt";

  auto shell = [&](const std::string& args) {
    const std::string cmd = cli + " " + args + " > " + out.string() + " 2>/dev/null";
    return std::system(cmd.c_str());
  };

  CHECK(shell("compute 1 1 5") == 0);
  CHECK(slurp(out) == "0.381966\n");

  CHECK(shell("vst --p 5 --k 1") == 0);
  CHECK(slurp(out) ==
        "kind,p,k,observed,bound,ratio\n"
        "vst,5,1,0.447214,2.236068,0.200000\n");

  // composite p: validation error, exit 2
  int rc = std::system((cli + " table --p 10 > /dev/null 2>&1").c_str());
  CHECK(WEXITSTATUS(rc) == 2);
  // naive cost guard: exit 3
  rc = std::system((cli + " table --p 1000003 --method naive > /dev/null 2>&1").c_str());
  CHECK(WEXITSTATUS(rc) == 3);

  // config file plus override
  const auto conf = scratch_dir() / "cli.conf";
  {
    std::ofstream f(conf);
    f << "kind = vst\np = 7\nk = 1\n";
  }
  CHECK(shell("vst --config " + conf.string() + " --p 5") == 0);
  CHECK(slurp(out).find("vst,5,1,") != std::string::npos);
}
#endif
