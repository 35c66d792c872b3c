#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "volcol/io.hpp"
#include "volcol/report.hpp"
#include "volcol/volcol.hpp"

namespace volcol::cli {

namespace {

using Json = nlohmann::ordered_json;

// Runs body, translating library exceptions into exit codes.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const RankDeficientError& e) {
    err << "rank deficiency: " << e.what() << '\n';
    return kRankDeficient;
  } catch (const OracleCapError& e) {
    err << "oracle cap exceeded: " << e.what() << '\n';
    return kOracleCap;
  } catch (const InvalidArgumentError& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path);
  f << text;
}

Matrix<double> random_matrix(Index m, Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix<double> X(m, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < m; ++i) X(i, j) = u(rng);
  return X;
}

// |a - b| <= rel * max(|a|, |b|) + floor
bool close(double a, double b, double rel, double floor) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)) + floor;
}

class CheckLog {
 public:
  explicit CheckLog(std::ostream& out) : out_(out) {}

  void record(bool ok, const std::string& name, const std::string& detail) {
    out_ << (ok ? "PASS " : "FAIL ") << name << ' ' << detail << '\n';
    ++total_;
    if (!ok) ++failed_;
  }

  int finish() {
    out_ << (failed_ ? "FAILED " : "OK ") << (total_ - failed_) << '/' << total_ << " checks passed\n";
    return failed_ ? kCheckFailed : kOk;
  }

 private:
  std::ostream& out_;
  int total_ = 0;
  int failed_ = 0;
};

std::string num(double v) { return format_double(v); }

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= double(n);
  my /= double(n);
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxx > 0 ? sxy / sxx : 0.0;
}

}  // namespace

int cmd_select(const SelectOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Matrix<double> X = read_matrix(opt.input);
    if (opt.r < 1 || opt.r > X.cols()) throw InvalidArgumentError("need 1 <= r <= n");
    if (opt.k < 1 || opt.k > opt.r) throw InvalidArgumentError("need 1 <= k <= r");
    if (opt.k > std::min(X.rows(), X.cols())) throw InvalidArgumentError("k exceeds min(m, n)");

    const auto t0 = std::chrono::steady_clock::now();
    ColumnSubset chosen;
    if (opt.method == "greedy") {
      chosen = greedy_select(X, opt.r).chosen;
    } else if (opt.method == "volume") {
      UniformSource rng(opt.seed);
      chosen = volume_sample(X, opt.r, rng).chosen;
    } else if (opt.method == "brute") {
      chosen = best_subset(X, opt.r).first;
    } else {
      throw InvalidArgumentError("unknown method '" + opt.method + "'");
    }
    const double elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    SelectionReport rep = bound_report(X, chosen, opt.k);
    rep.method = opt.method;
    if (opt.method == "volume") rep.seed = opt.seed;
    if (opt.timing) rep.wall_time_ms = elapsed_ms;
    emit(opt.output, to_json(rep).dump(2) + "\n", out);
    if (opt.method == "greedy" && !rep.bound_satisfied) {
      err << "greedy selection violates the bound\n";
      return int(kCheckFailed);
    }
    return int(kOk);
  });
}

int cmd_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Matrix<double> X = read_matrix(opt.input);
    const Index n = X.cols();
    const Index r_max = opt.r_max > 0 ? opt.r_max : std::min<Index>(4, n - 1);
    const Index k_max = opt.k_max > 0 ? opt.k_max : r_max;
    if (r_max < 1 || r_max > n) throw InvalidArgumentError("r max out of range");
    const double cap = default_oracle_cap();
    for (Index r = 1; r <= r_max; ++r)
      if (binomial(n, r) > cap) throw OracleCapError();

    const double energy = X.squaredNorm();
    const double floor = 1e-12 * energy;
    const Spectrum<double> sigma = gram_spectrum(X);
    const Index rank = sigma.numerical_rank(tol::kRank);
    CheckLog log(out);

    for (Index r = 1; r <= r_max; ++r) {
      const std::string tag = "r=" + std::to_string(r);
      if (r > rank) {
        out << "SKIP identity " << tag << " rank " << rank << " < r\n";
        continue;
      }
      const double expected = exact_expected_trace(X, r, cap);
      const double closed_form = double(r + 1) * sym_ratio(sigma.values(), r);
      log.record(close(expected, closed_form, 1e-9, floor), "identity",
                 tag + " oracle=" + num(expected) + " closed_form=" + num(closed_form));

      const double best = best_subset(X, r, cap).second;
      log.record(best <= expected * (1 + 1e-9) + floor, "min_le_mean",
                 tag + " best=" + num(best) + " mean=" + num(expected));

      const ColumnSubset greedy = greedy_select(X, r).chosen;
      const double greedy_residual = residual_trace(X, greedy);
      log.record(greedy_residual <= expected * (1 + 1e-9) + floor, "greedy_le_mean",
                 tag + " greedy=" + num(greedy_residual) + " mean=" + num(expected));

      for (Index k = 1; k <= std::min({r, k_max, std::min(X.rows(), n)}); ++k) {
        const std::string ktag = tag + " k=" + std::to_string(k);
        const double err_k = rank_k_error(X, k);
        const double bound = double(r + 1) / double(r + 1 - k);
        log.record(expected <= bound * err_k * (1 + 1e-8) + floor, "mean_bound",
                   ktag + " mean=" + num(expected) + " limit=" + num(bound * err_k));
        const SelectionReport rep = bound_report(X, greedy, k);
        log.record(rep.bound_satisfied, "greedy_bound",
                   ktag + " ratio=" + num(rep.achieved_ratio) + " bound=" + num(bound));
      }

      if (opt.trials > 0) {
        const auto dist = exact_distribution(X, r, cap);
        double variance = 0;
        for (const auto& e : dist.support) {
          const double d = residual_trace(X, e.subset) - expected;
          variance += e.probability * d * d;
        }
        UniformSource rng(opt.seed + std::uint64_t(r));
        double sum = 0;
        for (long t = 0; t < opt.trials; ++t) sum += residual_trace(X, volume_sample(X, r, rng).chosen);
        const double mean = sum / double(opt.trials);
        const double allowance = 5.0 * std::sqrt(variance / double(opt.trials)) + floor;
        log.record(std::abs(mean - expected) <= allowance, "sampler_mean",
                   tag + " empirical=" + num(mean) + " exact=" + num(expected) + " trials=" +
                       std::to_string(opt.trials));
      }
    }

    if (!opt.report.empty()) {
      std::ifstream f(opt.report);
      if (!f) throw ParseError("cannot open " + opt.report);
      Json j;
      try {
        j = Json::parse(f);
      } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("report is not JSON: ") + e.what());
      }
      const auto problems = validate_report_json(j);
      log.record(problems.empty(), "report_schema", problems.empty() ? "ok" : problems.front());
      if (problems.empty()) {
        const SelectionReport claimed = report_from_json(j);
        if (claimed.chosen.size() != claimed.r || claimed.k > claimed.r || claimed.k < 0) {
          log.record(false, "report_shape", "r/k inconsistent with chosen");
        } else {
          const SelectionReport actual = bound_report(X, claimed.chosen, claimed.k);
          log.record(close(claimed.residual_trace, actual.residual_trace, 1e-9, floor), "report_residual",
                     "claimed=" + num(claimed.residual_trace) + " actual=" + num(actual.residual_trace));
          log.record(close(claimed.rank_k_error, actual.rank_k_error, 1e-9, floor), "report_rank_k_error",
                     "claimed=" + num(claimed.rank_k_error) + " actual=" + num(actual.rank_k_error));
          const bool ratio_ok = std::isinf(actual.achieved_ratio)
                                    ? std::isinf(claimed.achieved_ratio)
                                    : close(claimed.achieved_ratio, actual.achieved_ratio, 1e-9, 1e-12);
          log.record(ratio_ok, "report_ratio",
                     "claimed=" + num(claimed.achieved_ratio) + " actual=" + num(actual.achieved_ratio));
          log.record(close(claimed.bound, actual.bound, 1e-12, 0) &&
                         claimed.bound_satisfied == actual.bound_satisfied,
                     "report_bound", "claimed_satisfied=" + std::string(claimed.bound_satisfied ? "true" : "false"));
          if (claimed.method == "greedy")
            log.record(actual.bound_satisfied, "report_greedy_guarantee", "ratio=" + num(actual.achieved_ratio));
        }
      }
    }
    return log.finish();
  });
}

int cmd_gen_hard(const GenHardOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opt.output.empty()) throw InvalidArgumentError("--output is required");
    HardInstanceSpec<double> spec{opt.blocks, opt.n0, opt.delta};
    spec.validate();
    const MatrixFormat format = parse_format(opt.format);
    const Matrix<double> X = make_block_instance(spec);
    write_matrix(opt.output, X, format);

    Json meta;
    meta["blocks"] = spec.blocks;
    meta["block_size"] = spec.block_size;
    meta["delta"] = spec.delta;
    meta["n"] = spec.n();
    meta["rank_k_error"] = double(spec.n() - spec.blocks) * spec.delta;
    Json ratios = Json::array();
    for (Index r = spec.blocks; r <= std::min(3 * spec.blocks, spec.n() - 1); ++r) {
      Json row;
      row["r"] = r;
      row["predicted_block_ratio"] = predicted_block_ratio(spec, r);
      row["upper_bound"] = double(r + 1) / double(r + 1 - spec.blocks);
      ratios.push_back(row);
    }
    meta["predictions"] = ratios;
    emit(opt.output + ".meta.json", meta.dump(2) + "\n", out);
    out << "wrote " << opt.output << " (" << X.rows() << "x" << X.cols() << ")\n";
    return int(kOk);
  });
}

int cmd_bench(const BenchOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opt.rows < 1 || opt.cols < 1 || opt.r < 1 || opt.repetitions < 1 || opt.sweep < 1)
      throw InvalidArgumentError("sizes, repetitions and sweep must be positive");
    if (opt.r > std::min(opt.rows, opt.cols)) throw InvalidArgumentError("need r <= min(rows, cols)");

    struct Row {
      Index m, n, r;
      double total, build, search, update;
    };
    auto measure = [&](Index m, Index n, Index r) {
      std::vector<double> total, build, search, update;
      std::mt19937_64 gen(opt.seed);
      for (long rep = 0; rep < opt.repetitions; ++rep) {
        const Matrix<double> X = random_matrix(m, n, gen);
        UniformSource rng(opt.seed + std::uint64_t(rep));
        SampleTimings t;
        const auto t0 = std::chrono::steady_clock::now();
        volume_sample(X, r, rng, &t);
        total.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
        build.push_back(t.build_seconds);
        search.push_back(t.search_seconds);
        update.push_back(t.update_seconds);
      }
      return Row{m, n, r, median(total), median(build), median(search), median(update)};
    };
    auto to_json_rows = [](const std::vector<Row>& rows) {
      Json a = Json::array();
      for (const Row& row : rows) {
        Json j;
        j["m"] = row.m;
        j["n"] = row.n;
        j["r"] = row.r;
        j["total_seconds"] = row.total;
        j["build_table_seconds"] = row.build;
        j["sampling_seconds"] = row.search;
        j["table_update_seconds"] = row.update;
        a.push_back(j);
      }
      return a;
    };

    std::vector<Row> n_rows, r_rows;
    std::vector<double> ns, n_times, rs, r_times;
    for (long level = 0; level < opt.sweep; ++level) {
      const Index n = opt.cols << level;
      n_rows.push_back(measure(opt.rows, n, opt.r));
      ns.push_back(double(n));
      n_times.push_back(n_rows.back().total);
    }
    for (long level = 0; level < opt.sweep; ++level) {
      const Index r = opt.r << level;
      if (r > std::min(opt.rows, opt.cols)) break;
      r_rows.push_back(measure(opt.rows, opt.cols, r));
      rs.push_back(double(r));
      r_times.push_back(r_rows.back().total);
    }

    Json j;
    j["seed"] = opt.seed;
    j["repetitions"] = opt.repetitions;
    j["n_sweep"] = to_json_rows(n_rows);
    j["n_exponent"] = ns.size() > 1 ? Json(loglog_slope(ns, n_times)) : Json(nullptr);
    j["r_sweep"] = to_json_rows(r_rows);
    j["r_exponent"] = rs.size() > 1 ? Json(loglog_slope(rs, r_times)) : Json(nullptr);
    emit(opt.output, j.dump(2) + "\n", out);
    return int(kOk);
  });
}

int cmd_spectrum(const SpectrumOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Matrix<double> X = read_matrix(opt.input);
    const Spectrum<double> sigma = gram_spectrum(X);
    Json j;
    j["rows"] = X.rows();
    j["cols"] = X.cols();
    j["eigenvalues"] = std::vector<double>(sigma.values().begin(), sigma.values().end());
    std::vector<double> errors;
    for (Index k = 0; k <= std::min(X.rows(), X.cols()); ++k) errors.push_back(sigma.tail_sum(k));
    j["rank_k_errors"] = errors;
    out << j.dump(2) << '\n';
    return int(kOk);
  });
}

}  // namespace volcol::cli
