#ifndef VOLCOL_TOOLS_COMMANDS_HPP
#define VOLCOL_TOOLS_COMMANDS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace volcol::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kUsage = 2,
  kInputError = 3,
  kRankDeficient = 4,
  kOracleCap = 5,
};

struct SelectOptions {
  std::string input;
  std::string output;  // empty: stdout
  long r = 1;
  long k = 1;
  std::string method = "greedy";
  std::uint64_t seed = 0;
  bool timing = false;
};

struct VerifyOptions {
  std::string input;
  long r_max = 0;  // 0: min(4, n - 1)
  long k_max = 0;  // 0: r_max
  long trials = 1000;
  std::uint64_t seed = 0;
  std::string report;  // optional report to re-check against the input
};

struct GenHardOptions {
  long blocks = 1;
  long n0 = 2;
  double delta = 1e-3;
  std::string output;
  std::string format = "csv";
};

struct BenchOptions {
  long rows = 100;
  long cols = 1000;
  long r = 10;
  long repetitions = 3;
  long sweep = 3;
  std::uint64_t seed = 0;
  std::string output;
};

struct SpectrumOptions {
  std::string input;
};

// Each command writes its primary output to `out` (unless it has an output
// file), diagnostics to `err`, and returns an ExitCode.
int cmd_select(const SelectOptions& opt, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err);
int cmd_gen_hard(const GenHardOptions& opt, std::ostream& out, std::ostream& err);
int cmd_bench(const BenchOptions& opt, std::ostream& out, std::ostream& err);
int cmd_spectrum(const SpectrumOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace volcol::cli

#endif  // VOLCOL_TOOLS_COMMANDS_HPP
