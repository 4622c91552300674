#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <random>
#include <sstream>

#include "commands.hpp"
#include "qrvc/svg.hpp"

namespace fs = std::filesystem;
using namespace qrvc;
using namespace qrvc::cli;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("qrvc_test_" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(line);
  }
  return out;
}

}  // namespace

TEST_CASE("argument helpers") {
  CHECK(parse_range("5:300") == std::pair<std::uint64_t, std::uint64_t>{5, 300});
  CHECK(parse_range("17") == std::pair<std::uint64_t, std::uint64_t>{17, 17});
  CHECK_THROWS(parse_range("a:b"));
  CHECK_THROWS(parse_range("5:"));
  CHECK(parse_list("2,3,5") == std::vector<Elem>{2, 3, 5});
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("0;1;3") == "0;1;3");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");
}

TEST_CASE("svg writer") {
  svg::Plot plot{"a < b & c", "x", "y", 0, 10, 0, 1, false, {}};
  plot.series.push_back(svg::Series{"pts", "red", svg::Series::Style::Points, {{1, 0.5}, {20, 0.5}}});
  plot.series.push_back(svg::curve(plot, "line", "blue", [](double x) { return x / 10; }, 10));
  const auto doc = svg::render(plot);
  CHECK(doc.find("<svg") != std::string::npos);
  CHECK(doc.find("a &lt; b &amp; c") != std::string::npos);
  CHECK(doc.find("<circle") != std::string::npos);
  CHECK(doc.find("<polyline") != std::string::npos);
  // The point at x = 20 lies outside the axes and is dropped.
  std::size_t circles = 0;
  for (auto pos = doc.find("<circle"); pos != std::string::npos; pos = doc.find("<circle", pos + 1)) ++circles;
  CHECK(circles == 1);
}

TEST_CASE("vcdim command") {
  TempDir dir;
  std::ostringstream log;
  VcdimArgs args;
  args.q_lo = 5;
  args.q_hi = 31;
  args.out_dir = dir.path;
  CHECK(cmd_vcdim(args, log) == 0);
  const auto rows = lines(slurp(dir.path / "vcdim.csv"));
  REQUIRE(rows.size() == 10);
  CHECK(rows[0] == kVcdimHeader);
  CHECK(rows[1].rfind("5,2,exact,", 0) == 0);
  CHECK(rows[1].find("zero-in") != std::string::npos);
  CHECK(fs::exists(dir.path / "vcdim.svg"));
  CHECK_FALSE(fs::exists(dir.path / "vcdim.checkpoint.jsonl"));
  const auto manifest = nlohmann::json::parse(slurp(dir.path / "vcdim.manifest.json"));
  CHECK(manifest["command"] == "vcdim");
  CHECK(manifest["parameters"]["convention"] == "zero-in");
  CHECK(manifest["items"].size() == 9);

  TempDir empty;
  args.q_lo = 14;
  args.q_hi = 16;
  args.out_dir = empty.path;
  CHECK(cmd_vcdim(args, log) == 0);
  CHECK(lines(slurp(empty.path / "vcdim.csv")) == std::vector<std::string>{kVcdimHeader});
}

TEST_CASE("vcdim resumes from a checkpoint") {
  TempDir dir;
  VcdimArgs args;
  args.q_lo = 5;
  args.q_hi = 13;
  args.out_dir = dir.path;
  const nlohmann::json params = {{"range", {5, 13}},
                                 {"convention", "zero-in"},
                                 {"canonicalization", "affine"},
                                 {"early_exit", "none"}};
  {
    std::ofstream cp(dir.path / "vcdim.checkpoint.jsonl");
    cp << nlohmann::json{{"params", params}}.dump() << '\n';
    cp << nlohmann::json{{"q", 7},        {"status", "ok"},   {"vcdim", 2},       {"bound", "exact"},
                         {"alpha_q", 0.7}, {"witness", {0, 1}}, {"elapsed_ms", 123456}}
              .dump()
       << '\n';
  }
  std::ostringstream log;
  CHECK(cmd_vcdim(args, log) == 0);
  CHECK(log.str().find("q=7 ") == std::string::npos);
  const auto csv = slurp(dir.path / "vcdim.csv");
  CHECK(csv.find("123456") != std::string::npos);
  const auto manifest = nlohmann::json::parse(slurp(dir.path / "vcdim.manifest.json"));
  CHECK(manifest["items"][1]["resumed"] == true);
}

TEST_CASE("ap command") {
  TempDir dir;
  std::ostringstream log;
  ApArgs args;
  args.q_lo = 5;
  args.q_hi = 11;
  args.out_dir = dir.path;
  CHECK(cmd_ap(args, log) == 0);
  const auto rows = lines(slurp(dir.path / "ap.csv"));
  REQUIRE(rows.size() == 4);
  CHECK(rows[1].rfind("5,2,", 0) == 0);
  CHECK(rows[2].rfind("7,", 0) == 0);
  CHECK(rows[3].rfind("11,", 0) == 0);
  CHECK(fs::exists(dir.path / "ap.svg"));
  CHECK(fs::exists(dir.path / "ap.manifest.json"));
}

TEST_CASE("prob command is byte-reproducible") {
  TempDir a, b;
  std::ostringstream log;
  ProbArgs args;
  args.n_lo = 5;
  args.n_hi = 6;
  args.trials = 50;
  args.density = 10;
  args.seed = 42;
  args.out_dir = a.path;
  CHECK(cmd_prob(args, log) == 0);
  args.out_dir = b.path;
  args.jobs = 3;
  CHECK(cmd_prob(args, log) == 0);
  for (const char* name : {"prob_n5.csv", "prob_n6.csv", "prob_n5.svg"}) {
    CHECK(fs::exists(a.path / name));
    CHECK(slurp(a.path / name) == slurp(b.path / name));
  }
  const auto rows = lines(slurp(a.path / "prob_n5.csv"));
  CHECK(rows[0] == kProbHeader);
  CHECK(rows.size() > 1);
  const auto manifest = nlohmann::json::parse(slurp(a.path / "prob.manifest.json"));
  CHECK(manifest["parameters"]["seed"] == 42);

  TempDir c;
  args.n_lo = args.n_hi = 5;
  args.density = 0;
  args.out_dir = c.path;
  CHECK(cmd_prob(args, log) == 0);
  CHECK(lines(slurp(c.path / "prob_n5.csv")) == std::vector<std::string>{kProbHeader});

  TempDir d;
  args.seed.reset();
  args.density = 5;
  args.out_dir = d.path;
  CHECK(cmd_prob(args, log) == 0);
  const auto m2 = nlohmann::json::parse(slurp(d.path / "prob.manifest.json"));
  CHECK(m2["parameters"]["seed"].is_number_unsigned());
}

TEST_CASE("verify command") {
  TempDir dir;
  std::ostringstream log;
  VerifyArgs args;
  args.q_max = 31;
  args.r_set = {2, 3, 5};
  args.seed = 1;
  args.out_dir = dir.path;
  CHECK(cmd_verify(args, log) == 0);
  for (const char* name : {"verify_weil.csv", "verify_equidistribution.csv", "verify_fourier.csv", "verify_theorem.csv",
                           "verify.manifest.json"})
    CHECK(fs::exists(dir.path / name));
  // r = 5 divides q - 1 only for q = 11, 31; other primes are skipped and logged.
  CHECK(log.str().find("skip") != std::string::npos);
  const auto weil = lines(slurp(dir.path / "verify_weil.csv"));
  CHECK(weil[0] == kCheckHeader);
  for (std::size_t i = 1; i < weil.size(); ++i) CHECK(weil[i].substr(weil[i].rfind(',') + 1) == "0");
}
