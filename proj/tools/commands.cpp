#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "qrvc/montecarlo.hpp"
#include "qrvc/svg.hpp"
#include "qrvc/weil.hpp"

namespace qrvc::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::pair<std::uint64_t, std::uint64_t> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  try {
    std::size_t used = 0;
    if (colon == std::string::npos) {
      const auto v = std::stoull(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return {v, v};
    }
    const auto lo_text = text.substr(0, colon);
    const auto hi_text = text.substr(colon + 1);
    const auto lo = std::stoull(lo_text, &used);
    if (used != lo_text.size()) throw std::invalid_argument(text);
    const auto hi = std::stoull(hi_text, &used);
    if (used != hi_text.size()) throw std::invalid_argument(text);
    if (lo > hi) throw Error(ErrorCode::InvalidArgument, "range '" + text + "' is reversed");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::InvalidArgument, "cannot parse range '" + text + "'");
  }
}

std::vector<Elem> parse_list(const std::string& text) {
  std::vector<Elem> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const auto v = std::stoul(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(static_cast<Elem>(v));
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::InvalidArgument, "cannot parse list item '" + item + "'");
    }
  }
  return out;
}

fs::path default_out_dir() {
  if (const char* env = std::getenv("QRVC_OUT_DIR"); env && *env) return env;
  return "qrvc_out";
}

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\r\n") == std::string::npos) return value;
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

namespace {

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9e", v);
  return buf;
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string join(std::span<const Elem> xs, char sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(xs[i]);
  }
  return out;
}

std::uint64_t clock_seed() {
  return static_cast<std::uint64_t>(std::chrono::system_clock::now().time_since_epoch().count());
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

class CsvWriter {
 public:
  explicit CsvWriter(const char* header) { text_ << header << "\r\n"; }

  template <typename... Fields>
  void row(const Fields&... fields) {
    bool first = true;
    ((text_ << (first ? "" : ",") << csv_field(fields), first = false), ...);
    text_ << "\r\n";
  }

  void save(const fs::path& path) const { write_text(path, text_.str()); }

 private:
  std::ostringstream text_;
};

// Append-only per-item log that lets an interrupted sweep resume. The first
// line holds the sweep parameters; a file written with other parameters is
// ignored.
class Checkpoint {
 public:
  Checkpoint(fs::path path, json params) : path_(std::move(path)), params_(std::move(params)) {
    std::ifstream in(path_);
    std::string line;
    if (in && std::getline(in, line) && json::parse(line, nullptr, false) == json{{"params", params_}}) {
      while (std::getline(in, line)) {
        auto row = json::parse(line, nullptr, false);
        if (!row.is_discarded() && row.contains("q")) done_[row["q"].get<std::uint64_t>()] = row;
      }
    }
    out_.open(path_, std::ios::trunc);
    out_ << json{{"params", params_}}.dump() << '\n';
    for (const auto& [q, row] : done_) out_ << row.dump() << '\n';
    out_.flush();
  }

  const std::map<std::uint64_t, json>& done() const { return done_; }

  void append(const json& row) {
    out_ << row.dump() << '\n';
    out_.flush();
  }

  void finish() {
    out_.close();
    fs::remove(path_);
  }

 private:
  fs::path path_;
  json params_;
  std::map<std::uint64_t, json> done_;
  std::ofstream out_;
};

struct Manifest {
  json doc;
  std::vector<std::string> outputs;

  Manifest(std::string command, json parameters) {
    doc["command"] = std::move(command);
    doc["parameters"] = std::move(parameters);
    doc["tool_version"] = QRVC_VERSION;
    doc["started_at"] = utc_now();
    doc["items"] = json::array();
  }

  void item(json entry) { doc["items"].push_back(std::move(entry)); }

  void output(const fs::path& path) { outputs.push_back(path.filename().string()); }

  void save(const fs::path& out_dir, const std::string& command) {
    doc["finished_at"] = utc_now();
    doc["outputs"] = outputs;
    write_text(out_dir / (command + ".manifest.json"), doc.dump(2) + "\n");
  }
};

template <typename F>
void parallel_for(std::size_t count, int jobs, F&& fn) {
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (auto i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
  };
  if (jobs <= 1) {
    work();
    return;
  }
  std::vector<std::jthread> threads;
  for (int i = 0; i < jobs; ++i) threads.emplace_back(work);
}

void prepare(const fs::path& out_dir) { fs::create_directories(out_dir); }

fs::path resolve(const fs::path& out_dir) { return out_dir.empty() ? default_out_dir() : out_dir; }

}  // namespace

int cmd_vcdim(const VcdimArgs& args, std::ostream& log) {
  if (args.q_lo > args.q_hi) {
    log << "error: empty range\n";
    return 2;
  }
  const auto out_dir = resolve(args.out_dir);
  prepare(out_dir);
  const json params = {{"range", {args.q_lo, args.q_hi}},
                       {"convention", std::string(to_string(args.convention))},
                       {"canonicalization", std::string(to_string(args.canonicalization))},
                       {"early_exit", args.early_exit ? "floor_log2_minus_1" : "none"}};
  Manifest manifest("vcdim", params);
  manifest.doc["parameters"]["jobs"] = args.jobs;
  manifest.doc["determinism"] = "exhaustive search, no randomness; elapsed_ms varies between runs";
  if (args.convention != ZeroConvention::Strict && args.canonicalization == Canonicalization::ZeroOne) {
    manifest.doc["notes"] = "zero-one canonicalization is not exact under a non-strict convention; values may be low";
  }

  Checkpoint checkpoint(out_dir / "vcdim.checkpoint.jsonl", params);
  std::map<std::uint64_t, json> rows = checkpoint.done();
  std::vector<Elem> skip;
  for (const auto& [q, row] : rows) skip.push_back(static_cast<Elem>(q));

  SearchOptions options;
  options.convention = args.convention;
  options.canonicalization = args.canonicalization;
  const auto policy = args.early_exit ? EarlyExitPolicy::FloorLog2Minus1 : EarlyExitPolicy::None;
  vc_sweep(args.q_lo, args.q_hi, options, policy, args.jobs, skip, [&](const SweepItem& item) {
    json row = {{"q", item.q}};
    if (item.result) {
      const auto& r = *item.result;
      row["status"] = "ok";
      row["vcdim"] = r.vcdim;
      row["bound"] = r.lower_bound ? "lower" : "exact";
      row["alpha_q"] = r.alpha_q;
      row["witness"] = std::vector<Elem>(r.witness.elems().begin(), r.witness.elems().end());
      row["elapsed_ms"] = r.elapsed.count();
      log << "q=" << item.q << " vcdim=" << r.vcdim << (r.lower_bound ? "+" : "") << " (" << r.elapsed.count()
          << " ms)\n";
    } else {
      row["status"] = "error";
      row["error"] = item.error;
      log << "q=" << item.q << " error: " << item.error << '\n';
    }
    checkpoint.append(row);
    rows[item.q] = row;
  });

  CsvWriter csv(kVcdimHeader);
  svg::Plot plot{"Largest shattered subset", "prime q", "shattered size", static_cast<double>(args.q_lo),
                 static_cast<double>(std::max(args.q_hi, args.q_lo + 1)), 0.0,
                 std::ceil(std::log2(static_cast<double>(std::max<std::uint64_t>(args.q_hi, 2)))) + 1.0, false, {}};
  svg::Series points{"vcdim", "black", svg::Series::Style::Points, {}};
  for (const auto& [q, row] : rows) {
    json entry = {{"q", q}, {"status", row["status"]}};
    if (skip.end() != std::find(skip.begin(), skip.end(), q)) entry["resumed"] = true;
    if (row["status"] == "ok") {
      const auto witness = row["witness"].get<std::vector<Elem>>();
      csv.row(std::to_string(q), std::to_string(row["vcdim"].get<int>()), row["bound"].get<std::string>(),
              fixed(row["alpha_q"].get<double>()), join(witness, ';'), std::string(to_string(args.convention)),
              std::to_string(row["elapsed_ms"].get<std::int64_t>()));
      points.points.emplace_back(static_cast<double>(q), row["vcdim"].get<double>());
    } else {
      entry["error"] = row["error"];
    }
    manifest.item(entry);
  }
  plot.series.push_back(std::move(points));
  plot.series.push_back(svg::curve(plot, "log2 q", "red", [](double x) { return std::log2(x); }));

  csv.save(out_dir / "vcdim.csv");
  manifest.output(out_dir / "vcdim.csv");
  write_text(out_dir / "vcdim.svg", svg::render(plot));
  manifest.output(out_dir / "vcdim.svg");
  manifest.save(out_dir, "vcdim");
  checkpoint.finish();
  return 0;
}

int cmd_ap(const ApArgs& args, std::ostream& log) {
  if (args.q_lo > args.q_hi) {
    log << "error: empty range\n";
    return 2;
  }
  const auto out_dir = resolve(args.out_dir);
  prepare(out_dir);
  const json params = {{"range", {args.q_lo, args.q_hi}}, {"convention", std::string(to_string(args.convention))}};
  Manifest manifest("ap", params);
  manifest.doc["parameters"]["jobs"] = args.jobs;
  manifest.doc["determinism"] = "deterministic; no randomness";

  Checkpoint checkpoint(out_dir / "ap.checkpoint.jsonl", params);
  std::map<std::uint64_t, json> rows = checkpoint.done();
  std::vector<std::uint64_t> todo;
  for (auto q : primes_in(args.q_lo, args.q_hi)) {
    if (!rows.contains(q)) todo.push_back(q);
  }
  std::mutex mutex;
  parallel_for(todo.size(), args.jobs, [&](std::size_t i) {
    const auto q = todo[i];
    json row = {{"q", q}};
    try {
      const auto r = longest_shattered_ap(q, args.convention);
      row["status"] = "ok";
      row["longest"] = r.longest;
      row["ratio"] = r.ratio;
    } catch (const Error& e) {
      row["status"] = "error";
      row["error"] = e.what();
    }
    std::lock_guard lock(mutex);
    checkpoint.append(row);
    rows[q] = row;
  });
  log << "ap: " << rows.size() << " primes in [" << args.q_lo << ", " << args.q_hi << "]\n";

  CsvWriter csv(kApHeader);
  const double x_lo = static_cast<double>(std::max<std::uint64_t>(args.q_lo, 2));
  const double x_hi = std::max(static_cast<double>(args.q_hi), x_lo * 2);
  svg::Plot plot{"Longest shattered arithmetic progression", "prime q (log scale)", "length", x_lo, x_hi, 0.0,
                 std::ceil(std::log2(x_hi)) + 1.0, true, {}};
  svg::Series points{"longest AP", "black", svg::Series::Style::Points, {}};
  for (const auto& [q, row] : rows) {
    json entry = {{"q", q}, {"status", row["status"]}};
    if (row["status"] == "ok") {
      csv.row(std::to_string(q), std::to_string(row["longest"].get<int>()), fixed(row["ratio"].get<double>()),
              fixed(std::log2(static_cast<double>(q))), std::string(to_string(args.convention)));
      points.points.emplace_back(static_cast<double>(q), row["longest"].get<double>());
    } else {
      entry["error"] = row["error"];
    }
    manifest.item(entry);
  }
  plot.series.push_back(std::move(points));
  plot.series.push_back(svg::curve(plot, "log2 q", "red", [](double x) { return std::log2(x); }));
  plot.series.push_back(svg::curve(plot, "(1/2) log2 q", "red", [](double x) { return 0.5 * std::log2(x); }));

  csv.save(out_dir / "ap.csv");
  manifest.output(out_dir / "ap.csv");
  write_text(out_dir / "ap.svg", svg::render(plot));
  manifest.output(out_dir / "ap.svg");
  manifest.save(out_dir, "ap");
  checkpoint.finish();
  return 0;
}

int cmd_prob(const ProbArgs& args, std::ostream& log) {
  if (args.n_lo > args.n_hi || args.n_lo < 2) {
    log << "error: invalid n range\n";
    return 2;
  }
  const auto out_dir = resolve(args.out_dir);
  prepare(out_dir);
  const std::uint64_t seed = args.seed ? *args.seed : clock_seed();
  Manifest manifest("prob", {{"n", {args.n_lo, args.n_hi}},
                             {"trials", args.trials},
                             {"density", args.density},
                             {"seed", seed},
                             {"seed_source", args.seed ? "explicit" : "clock"},
                             {"ratio", {args.ratio_lo, args.ratio_hi}},
                             {"convention", std::string(to_string(args.convention))},
                             {"jobs", args.jobs}});
  manifest.doc["determinism"] = "mt19937_64 per trial, seeded from (seed, q, n, trial); independent of jobs";

  ScanOptions options;
  options.ratio_lo = args.ratio_lo;
  options.ratio_hi = args.ratio_hi;
  options.density = args.density;
  options.trials = args.trials;
  options.seed = seed;
  options.convention = args.convention;
  options.jobs = args.jobs;

  for (int n = args.n_lo; n <= args.n_hi; ++n) {
    const auto points = interface_scan(n, options);
    CsvWriter csv(kProbHeader);
    svg::Plot plot{"Shattering probability, n = " + std::to_string(n), "n / log2 q", "probability", args.ratio_lo,
                   args.ratio_hi, 0.0, 1.0, false, {}};
    svg::Series series{"", "black", svg::Series::Style::Points, {}};
    for (const auto& p : points) {
      csv.row(std::to_string(p.n), std::to_string(p.q), fixed(p.ratio), std::to_string(p.trials),
              std::to_string(p.hits), fixed(p.p_hat), std::to_string(p.seed), std::string(to_string(p.convention)));
      series.points.emplace_back(p.ratio, p.p_hat);
    }
    plot.series.push_back(std::move(series));
    const auto base = "prob_n" + std::to_string(n);
    csv.save(out_dir / (base + ".csv"));
    write_text(out_dir / (base + ".svg"), svg::render(plot));
    manifest.output(out_dir / (base + ".csv"));
    manifest.output(out_dir / (base + ".svg"));
    manifest.item({{"n", n}, {"status", "ok"}, {"points", points.size()}});
    log << "n=" << n << ": " << points.size() << " primes\n";
  }
  manifest.save(out_dir, "prob");
  return 0;
}

int cmd_verify(const VerifyArgs& args, std::ostream& log) {
  const auto out_dir = resolve(args.out_dir);
  prepare(out_dir);
  const std::uint64_t seed = args.seed ? *args.seed : clock_seed();
  Manifest manifest("verify", {{"q_max", args.q_max},
                               {"r", args.r_set},
                               {"n_max", args.n_max},
                               {"epsilon", args.epsilon},
                               {"seed", seed},
                               {"seed_source", args.seed ? "explicit" : "clock"},
                               {"weil_samples", args.weil_samples},
                               {"equidistribution_samples", args.equi_samples},
                               {"fourier_samples", args.fourier_samples}});

  VerifyReport weil, equi, fourier;
  std::vector<TheoremReport> theorems;
  for (auto q : primes_in(3, args.q_max)) {
    const auto field = make_field(q);
    for (auto r : args.r_set) {
      json entry = {{"q", q}, {"r", r}};
      if (r < 2 || (q - 1) % r != 0) {
        log << "skip q=" << q << " r=" << r << ": r does not divide q - 1\n";
        entry["status"] = "skipped";
        manifest.item(entry);
        continue;
      }
      try {
        const auto chi = character_table(field, r);
        weil.append(verify_weil(chi, args.n_max));
        weil.append(verify_weil_sampled(chi, args.n_max + 1, args.weil_samples, seed));
        equi.append(verify_equidistribution(chi, args.n_max, args.equi_samples, seed));
        fourier.append(verify_fourier_identity(chi, args.n_max, args.fourier_samples, seed));
        theorems.push_back(verify_shattering_theorem(field, r, args.epsilon));
        entry["status"] = "ok";
      } catch (const Error& e) {
        log << "skip q=" << q << " r=" << r << ": " << e.what() << '\n';
        entry["status"] = "skipped";
        entry["error"] = e.what();
      }
      manifest.item(entry);
    }
  }

  auto save_checks = [&](const VerifyReport& report, const std::string& name) {
    CsvWriter csv(kCheckHeader);
    for (const auto& row : report.rows) {
      csv.row(row.check, std::to_string(row.q), std::to_string(row.r), std::to_string(row.n),
              std::to_string(row.instances), sci(row.measured), sci(row.bound), sci(row.margin),
              std::to_string(row.violations));
    }
    csv.save(out_dir / name);
    manifest.output(out_dir / name);
  };
  save_checks(weil, "verify_weil.csv");
  save_checks(equi, "verify_equidistribution.csv");
  save_checks(fourier, "verify_fourier.csv");

  CsvWriter csv(kTheoremHeader);
  std::uint64_t theorem_failures = 0;
  for (const auto& t : theorems) {
    csv.row(std::to_string(t.q), std::to_string(t.r), fixed(t.epsilon, 4), std::to_string(t.n_star),
            std::to_string(t.sets_checked), t.passed ? "true" : "false", join(t.counterexample.elems(), ';'));
    theorem_failures += t.passed ? 0 : 1;
  }
  csv.save(out_dir / "verify_theorem.csv");
  manifest.output(out_dir / "verify_theorem.csv");

  const auto violations = weil.violations() + equi.violations() + fourier.violations() + theorem_failures;
  manifest.doc["violations"] = {{"weil", weil.violations()},
                                {"equidistribution", equi.violations()},
                                {"fourier_identity", fourier.violations()},
                                {"theorem", theorem_failures}};
  manifest.save(out_dir, "verify");
  log << "verify: " << weil.instances() + equi.instances() + fourier.instances() << " instances, " << violations
      << " violations\n";
  return violations == 0 ? 0 : 1;
}

}  // namespace qrvc::cli
