#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qrvc/field.hpp"
#include "qrvc/search.hpp"

namespace qrvc::cli {

/// Parses "lo:hi" (or a single value) into an inclusive range.
std::pair<std::uint64_t, std::uint64_t> parse_range(const std::string& text);
/// Parses "2,3,5".
std::vector<Elem> parse_list(const std::string& text);

/// QRVC_OUT_DIR if set, else ./qrvc_out.
std::filesystem::path default_out_dir();

/// RFC 4180 field quoting.
std::string csv_field(const std::string& value);

inline constexpr const char* kVcdimHeader = "q,vcdim,bound,alpha_q,witness,convention,elapsed_ms";
inline constexpr const char* kApHeader = "q,longest,ratio,log2_q,convention";
inline constexpr const char* kProbHeader = "n,q,ratio,trials,hits,p_hat,seed,convention";
inline constexpr const char* kCheckHeader = "check,q,r,n,instances,measured,bound,margin,violations";
inline constexpr const char* kTheoremHeader = "q,r,epsilon,n_star,sets_checked,passed,counterexample";

struct VcdimArgs {
  std::uint64_t q_lo = 5;
  std::uint64_t q_hi = 300;
  ZeroConvention convention = ZeroConvention::ZeroIn;
  Canonicalization canonicalization = Canonicalization::Affine;
  bool early_exit = false;
  int jobs = 1;
  std::filesystem::path out_dir;
};

struct ApArgs {
  std::uint64_t q_lo = 5;
  std::uint64_t q_hi = 20000;
  ZeroConvention convention = ZeroConvention::ZeroIn;
  int jobs = 1;
  std::filesystem::path out_dir;
};

struct ProbArgs {
  int n_lo = 5;
  int n_hi = 12;
  std::uint64_t trials = 1000;
  double density = 100.0;
  std::optional<std::uint64_t> seed;
  double ratio_lo = 0.7;
  double ratio_hi = 0.85;
  ZeroConvention convention = ZeroConvention::ZeroIn;
  int jobs = 1;
  std::filesystem::path out_dir;
};

struct VerifyArgs {
  std::uint64_t q_max = 101;
  std::vector<Elem> r_set = {2, 3};
  int n_max = 2;
  double epsilon = 0.1;
  std::optional<std::uint64_t> seed;
  std::uint64_t weil_samples = 200;
  std::uint64_t equi_samples = 500;
  std::uint64_t fourier_samples = 100;
  std::filesystem::path out_dir;
};

// Each command writes its CSV/SVG outputs and <command>.manifest.json into
// out_dir and returns a process exit code. Progress goes to `log`.
int cmd_vcdim(const VcdimArgs& args, std::ostream& log);
int cmd_ap(const ApArgs& args, std::ostream& log);
int cmd_prob(const ProbArgs& args, std::ostream& log);
int cmd_verify(const VerifyArgs& args, std::ostream& log);

}  // namespace qrvc::cli
