#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

using qrvc::ZeroConvention;

// CLI11 transform turning a convention name into the enum.
ZeroConvention convention_from(const std::string& text) { return qrvc::parse_convention(text); }

}  // namespace

int main(int argc, char** argv) {
  using namespace qrvc::cli;

  CLI::App app{"VC dimension of power-residue sets in prime fields under translation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", QRVC_VERSION);
  const std::string out_help = "Output directory (default: $QRVC_OUT_DIR or ./qrvc_out)";
  const std::vector<std::string> conventions = {"zero-in", "zero-out", "strict"};

  std::string range, convention = "zero-in", canonicalization = "affine", out;
  VcdimArgs vcdim;
  auto* vc = app.add_subcommand("vcdim", "Exact VC dimension of the quadratic residues for each prime in a range");
  vc->add_option("--range", range, "Prime range lo:hi")->required();
  vc->add_option("--convention", convention, "Zero convention")->check(CLI::IsMember(conventions));
  vc->add_option("--canonicalization", canonicalization,
                 "Search representatives: affine (sets containing {0,1} per dilation class), zero-one (sets "
                 "containing {0,1} only, exact under strict) or translation (sets containing 0)")
      ->check(CLI::IsMember({"affine", "zero-one", "translation"}));
  vc->add_flag("--early-exit", vcdim.early_exit, "Stop each search at a shattered set of size floor(log2 q) - 1");
  vc->add_option("--jobs", vcdim.jobs, "Worker threads over primes")->check(CLI::PositiveNumber);
  vc->add_option("--out", out, out_help);
  vc->footer(std::string("vcdim.csv columns: ") + kVcdimHeader +
             "\n  bound: exact, or lower when --early-exit stopped the search\n  witness: semicolon-separated elements");

  ApArgs ap;
  auto* apc = app.add_subcommand("ap", "Longest shattered arithmetic progression {0..n-1} for each prime in a range");
  apc->add_option("--range", range, "Prime range lo:hi")->required();
  apc->add_option("--convention", convention, "Zero convention")->check(CLI::IsMember(conventions));
  apc->add_option("--jobs", ap.jobs, "Worker threads over primes")->check(CLI::PositiveNumber);
  apc->add_option("--out", out, out_help);
  apc->footer(std::string("ap.csv columns: ") + kApHeader);

  ProbArgs prob;
  std::string n_range = "5:12";
  std::uint64_t prob_seed = 0;
  auto* pc = app.add_subcommand("prob", "Monte Carlo probability that a random n-subset is shattered");
  pc->add_option("--n", n_range, "Subset sizes lo:hi");
  pc->add_option("--trials", prob.trials, "Random subsets per prime")->check(CLI::PositiveNumber);
  pc->add_option("--density", prob.density, "Expected number of primes per n");
  auto* seed_opt = pc->add_option("--seed", prob_seed, "RNG seed (derived from the clock and recorded if omitted)");
  pc->add_option("--ratio-lo", prob.ratio_lo, "Smallest n / log2 q");
  pc->add_option("--ratio-hi", prob.ratio_hi, "Largest n / log2 q");
  pc->add_option("--convention", convention, "Zero convention")->check(CLI::IsMember(conventions));
  pc->add_option("--jobs", prob.jobs, "Worker threads over trials")->check(CLI::PositiveNumber);
  pc->add_option("--out", out, out_help);
  pc->footer(std::string("prob_n<n>.csv columns: ") + kProbHeader);

  VerifyArgs verify;
  std::string r_list = "2,3";
  std::uint64_t verify_seed = 0;
  auto* vf = app.add_subcommand("verify", "Check the character-sum bounds and the shattering guarantee numerically");
  vf->add_option("--q-max", verify.q_max, "Largest prime checked");
  vf->add_option("--r", r_list, "Comma-separated subgroup indices");
  vf->add_option("--n-max", verify.n_max, "Largest |Y| for exhaustive checks");
  vf->add_option("--epsilon", verify.epsilon, "Margin in |Y| <= (1/2 - epsilon) log_r q");
  auto* vseed_opt = vf->add_option("--seed", verify_seed, "RNG seed (derived from the clock and recorded if omitted)");
  vf->add_option("--weil-samples", verify.weil_samples, "Sampled instances at |Y| = n-max + 1");
  vf->add_option("--equi-samples", verify.equi_samples, "Samples per n for the equidistribution check");
  vf->add_option("--fourier-samples", verify.fourier_samples, "Samples per n for the expansion identity");
  vf->add_option("--out", out, out_help);
  vf->footer(std::string("verify_{weil,equidistribution,fourier}.csv columns: ") + kCheckHeader +
             "\nverify_theorem.csv columns: " + kTheoremHeader + "\nExit status 1 on any violation.");

  CLI11_PARSE(app, argc, argv);

  try {
    if (vc->parsed()) {
      std::tie(vcdim.q_lo, vcdim.q_hi) = parse_range(range);
      vcdim.convention = convention_from(convention);
      vcdim.canonicalization = qrvc::parse_canonicalization(canonicalization);
      vcdim.out_dir = out;
      return cmd_vcdim(vcdim, std::cerr);
    }
    if (apc->parsed()) {
      std::tie(ap.q_lo, ap.q_hi) = parse_range(range);
      ap.convention = convention_from(convention);
      ap.out_dir = out;
      return cmd_ap(ap, std::cerr);
    }
    if (pc->parsed()) {
      const auto [lo, hi] = parse_range(n_range);
      prob.n_lo = static_cast<int>(lo);
      prob.n_hi = static_cast<int>(hi);
      if (*seed_opt) prob.seed = prob_seed;
      prob.convention = convention_from(convention);
      prob.out_dir = out;
      return cmd_prob(prob, std::cerr);
    }
    if (vf->parsed()) {
      verify.r_set = parse_list(r_list);
      if (*vseed_opt) verify.seed = verify_seed;
      verify.out_dir = out;
      return cmd_verify(verify, std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
