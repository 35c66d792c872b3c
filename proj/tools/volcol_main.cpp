#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace volcol::cli;
  CLI::App app{"volcol: column subset selection by volume sampling"};
  app.require_subcommand(1);

  SelectOptions sel;
  auto* select = app.add_subcommand("select", "select r columns and report the Frobenius bound");
  select->add_option("--input", sel.input, "matrix file (CSV or VCOL1 binary)")->required();
  select->add_option("--output", sel.output, "report path (default: stdout)");
  select->add_option("-r", sel.r, "number of columns")->required();
  select->add_option("-k", sel.k, "rank of the comparison approximation")->capture_default_str();
  select->add_option("--method", sel.method, "volume, greedy or brute")
      ->check(CLI::IsMember({"volume", "greedy", "brute"}))
      ->capture_default_str();
  select->add_option("--seed", sel.seed, "seed for --method volume")->capture_default_str();
  select->add_flag("--timing", sel.timing, "include wall_time_ms in the report");

  VerifyOptions ver;
  auto* verify = app.add_subcommand("verify", "check the expectation identity and bounds by enumeration");
  verify->add_option("--input", ver.input, "matrix file")->required();
  verify->add_option("-r", ver.r_max, "largest r to check (default min(4, n-1))");
  verify->add_option("-k", ver.k_max, "largest k to check (default r)");
  verify->add_option("--trials", ver.trials, "volume_sample draws per r for the empirical mean check")
      ->capture_default_str();
  verify->add_option("--seed", ver.seed, "seed for the empirical check")->capture_default_str();
  verify->add_option("--report", ver.report, "selection report to re-check against the input");

  GenHardOptions gen;
  auto* gen_hard = app.add_subcommand("gen-hard", "write a block lower-bound instance");
  gen_hard->add_option("--blocks", gen.blocks, "number of blocks k")->capture_default_str();
  gen_hard->add_option("--n0", gen.n0, "block size")->required();
  gen_hard->add_option("--delta", gen.delta, "diagonal perturbation")->capture_default_str();
  gen_hard->add_option("--output", gen.output, "matrix path; metadata goes to <path>.meta.json")->required();
  gen_hard->add_option("--format", gen.format, "csv or bin")
      ->check(CLI::IsMember({"csv", "bin"}))
      ->capture_default_str();

  BenchOptions ben;
  auto* bench = app.add_subcommand("bench", "time volume sampling over doubling sweeps in n and r");
  bench->add_option("--rows", ben.rows, "m")->capture_default_str();
  bench->add_option("--cols", ben.cols, "starting n")->capture_default_str();
  bench->add_option("-r", ben.r, "starting r")->capture_default_str();
  bench->add_option("--repetitions", ben.repetitions, "runs per size (median reported)")->capture_default_str();
  bench->add_option("--sweep", ben.sweep, "number of doubling levels")->capture_default_str();
  bench->add_option("--seed", ben.seed)->capture_default_str();
  bench->add_option("--output", ben.output, "timing table path (default: stdout)");

  SpectrumOptions spe;
  auto* spectrum = app.add_subcommand("spectrum", "print Gram eigenvalues and rank-k errors");
  spectrum->add_option("--input", spe.input, "matrix file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (*select) return cmd_select(sel, std::cout, std::cerr);
  if (*verify) return cmd_verify(ver, std::cout, std::cerr);
  if (*gen_hard) return cmd_gen_hard(gen, std::cout, std::cerr);
  if (*bench) return cmd_bench(ben, std::cout, std::cerr);
  if (*spectrum) return cmd_spectrum(spe, std::cout, std::cerr);
  return kUsage;
}
