// Command-line front end: solve/decide MAX-E3-SAT instances with the
// partial-negation amplification simulator, analyze their closed-form
// success probabilities, cross-validate the two engines, and generate
// DIMACS instances.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qmaxsat/analysis.hpp"
#include "qmaxsat/dense_state.hpp"
#include "qmaxsat/dimacs.hpp"
#include "qmaxsat/formula.hpp"
#include "qmaxsat/oracle.hpp"
#include "qmaxsat/run.hpp"
#include "qmaxsat/structured_state.hpp"
#include "qmaxsat/validation.hpp"

namespace {

using nlohmann::json;
using namespace qmaxsat;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitAlgorithm = 2;
constexpr int kExitCap = 3;

struct Options {
  std::string input;
  int n = 0;
  int m = -1;  // generating without --m means the complete formula
  std::string mu = "0";
  std::string r = "auto";
  double lambda = 2.0;
  double epsilon = 1e-2;
  double pr_max = 0.99;
  std::uint64_t seed = 0;
  int trials = 1;
  int max_restarts = 100;
  std::string stop_rule = "fixed";
  std::string format = "text";
  std::string out;
  std::string curve_out;
  std::string profile_out;
  std::string dump_amps;
  int naive_cap = kDefaultNaiveCap;
  int enum_cap = kDefaultEnumCap;
  bool no_oracle = false;
};

void add_instance_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--input", o.input, "DIMACS CNF file ('-' reads stdin)");
  cmd->add_option("--n", o.n, "variable count when generating an instance");
  cmd->add_option("--m", o.m,
                  "clause count when generating (omit for the complete set)");
  cmd->add_option("--seed", o.seed, "base RNG seed")->envname("QMAXSAT_SEED");
}

void add_run_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--mu", o.mu, "dummy qubits: integer or 'auto'");
  cmd->add_option("--r", o.r, "iterations: integer or 'auto'");
  cmd->add_option("--lambda", o.lambda, "residual exponent for auto-r");
  cmd->add_option("--epsilon", o.epsilon, "gap threshold for --stop-rule epsilon");
  cmd->add_option("--pr-max", o.pr_max, "target probability for auto-mu");
  cmd->add_option("--stop-rule", o.stop_rule, "fixed|epsilon")
      ->check(CLI::IsMember({"fixed", "epsilon"}));
  cmd->add_option("--trials", o.trials, "independent seeded runs")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-restarts", o.max_restarts, "restart budget per run");
  cmd->add_option("--enum-cap", o.enum_cap, "max n for 2^n enumeration");
  cmd->add_option("--naive-cap", o.naive_cap, "max qubits for the dense engine");
  cmd->add_flag("--no-oracle", o.no_oracle, "skip brute-force comparison");
}

void add_output_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--format", o.format, "json|csv|text")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  cmd->add_option("--out", o.out, "output path (default stdout)");
}

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
}

Formula load_instance(const Options& o) {
  if (!o.input.empty()) return parse_dimacs(read_file(o.input));
  if (o.n == 0) {
    throw ParseError("no instance: pass --input or a --n generator spec");
  }
  if (o.m < 0) return generate_complete(o.n);
  return generate_random(o.n, o.m, o.seed);
}

long long parse_auto(const std::string& text, const char* what) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != text.size()) {
    throw ParseError(std::string(what) + " must be an integer or 'auto': " + text);
  }
  return v;
}

int resolve_mu(const Options& o, const Formula& f) {
  if (o.mu == "auto") {
    return required_dummy_qubits(f.num_clauses(), o.pr_max).mu_required;
  }
  const long long v = parse_auto(o.mu, "--mu");
  if (v < 0) throw ParseError("--mu must be >= 0");
  return static_cast<int>(v);
}

// Auto-r sizes the loop for the extended root order m + mu: the dummy
// shift compresses the sine gaps, so the raw clause count under-iterates.
long long resolve_r(const Options& o, const Formula& f, int mu) {
  if (o.r == "auto") {
    const int root_order = f.num_clauses() + mu;
    if (root_order < 2) return 1;
    return required_iterations(root_order, o.lambda).exact;
  }
  const long long v = parse_auto(o.r, "--r");
  if (v < 1) throw ParseError("--r must be >= 1");
  return v;
}

json config_json(const char* subcommand, const Options& o, const Formula& f,
                 int mu, long long r, bool oracle_enabled) {
  return json{{"subcommand", subcommand},
              {"input", o.input.empty() ? json(nullptr) : json(o.input)},
              {"n", f.num_vars()},
              {"m", f.num_clauses()},
              {"mu", mu},
              {"r", r},
              {"stop_rule", o.stop_rule},
              {"lambda", o.lambda},
              {"epsilon", o.epsilon},
              {"pr_max", o.pr_max},
              {"seed", o.seed},
              {"trials", o.trials},
              {"max_restarts", o.max_restarts},
              {"enum_cap", o.enum_cap},
              {"naive_cap", o.naive_cap},
              {"oracle", oracle_enabled}};
}

std::string assignment_bits(Assignment a, int n) {
  std::string s(n, '0');
  for (int i = 0; i < n; ++i) {
    if (assignment_bit(a, i)) s[i] = '1';
  }
  return s;
}

std::vector<RunReport> run_trials(const Formula& f, const RunConfig& base,
                                  int trials) {
  std::vector<RunReport> reports(trials);
  const unsigned workers = std::min<unsigned>(
      std::max(1u, std::thread::hardware_concurrency()), trials);
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      try {
        for (int t; (t = next.fetch_add(1)) < trials;) {
          RunConfig cfg = base;
          cfg.seed = trial_seed(base.seed, t);
          cfg.dump_amplitudes = base.dump_amplitudes && t == 0;
          reports[t] = run_amplification(f, cfg);
        }
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
  return reports;
}

struct OracleContext {
  bool enabled = false;
  std::optional<MaxReport> report;
  std::optional<DensityProfile> profile;
};

OracleContext oracle_context(const Options& o, const Formula& f) {
  OracleContext ctx;
  if (o.no_oracle) return ctx;
  if (f.num_vars() > o.enum_cap) {
    std::cerr << "warning: brute-force comparison disabled, n="
              << f.num_vars() << " exceeds --enum-cap " << o.enum_cap << "\n";
    return ctx;
  }
  ctx.profile = density_profile(f, o.enum_cap);
  ctx.report = max_report(*ctx.profile);
  ctx.enabled = true;
  return ctx;
}

RunConfig base_config(const Options& o, int mu, long long r) {
  RunConfig cfg;
  cfg.mu = mu;
  cfg.r = r;
  cfg.epsilon = o.epsilon;
  cfg.stop_rule =
      o.stop_rule == "epsilon" ? StopRule::kEpsilonGap : StopRule::kFixedR;
  cfg.max_restarts = o.max_restarts;
  cfg.seed = o.seed;
  cfg.enum_cap = o.enum_cap;
  cfg.dump_amplitudes = false;
  return cfg;
}

int cmd_solve(const Options& o, bool decide_only) {
  const Formula f = load_instance(o);
  check_enum_cap(f.num_vars(), o.enum_cap);
  const int mu = resolve_mu(o, f);
  const long long r = resolve_r(o, f, mu);
  const OracleContext oracle = oracle_context(o, f);

  RunConfig cfg = base_config(o, mu, r);
  cfg.dump_amplitudes = !o.dump_amps.empty();
  const std::vector<RunReport> reports = run_trials(f, cfg, o.trials);

  if (cfg.dump_amplitudes && reports[0].amplitude_csv) {
    write_output(o.dump_amps, *reports[0].amplitude_csv);
  }

  int completed = 0;
  std::uint32_t best_density = 0;
  for (const RunReport& rep : reports) {
    if (!rep.success) continue;
    ++completed;
    best_density = std::max(best_density, rep.achieved_density);
  }
  const bool sat_verdict =
      best_density == static_cast<std::uint32_t>(f.num_clauses()) &&
      completed > 0;

  const json config = config_json(decide_only ? "decide" : "solve", o, f, mu,
                                  r, oracle.enabled);
  std::string body;
  if (o.format == "json") {
    json out{{"config", config}};
    if (oracle.enabled) {
      out["oracle"] = json{
          {"d_max", oracle.report->d_max},
          {"d_nm", oracle.report->d_nm ? json(*oracle.report->d_nm)
                                       : json(nullptr)},
          {"satisfiable", oracle.report->satisfiable},
          {"optimal_count", oracle.report->argmax.size()}};
    }
    if (decide_only) {
      out["verdict"] = completed == 0 ? json(nullptr)
                                      : json(sat_verdict ? "SAT" : "UNSAT");
      out["best_density"] = best_density;
      out["completed_trials"] = completed;
    } else {
      json trials = json::array();
      for (std::size_t t = 0; t < reports.size(); ++t) {
        json rep = report_json(reports[t]);
        rep["trial"] = t;
        if (oracle.enabled && reports[t].success) {
          rep["oracle_d_max"] = oracle.report->d_max;
          rep["oracle_match"] =
              reports[t].achieved_density == oracle.report->d_max;
        }
        trials.push_back(std::move(rep));
      }
      out["trials"] = std::move(trials);
    }
    body = out.dump(2) + "\n";
  } else if (o.format == "csv") {
    // every row carries the full resolved configuration
    const std::string config_cols = std::to_string(mu) + "," +
                                    std::to_string(r) + "," + o.stop_rule +
                                    "," + format_double(o.lambda) + "," +
                                    format_double(o.epsilon) + "," +
                                    format_double(o.pr_max) + "," +
                                    std::to_string(o.max_restarts);
    if (decide_only) {
      body =
          "verdict,best_density,m,completed_trials,trials,seed,"
          "mu,r,stop_rule,lambda,epsilon,pr_max,max_restarts\n";
      body += std::string(completed == 0 ? "UNDECIDED"
                                         : (sat_verdict ? "SAT" : "UNSAT")) +
              "," + std::to_string(best_density) + "," +
              std::to_string(f.num_clauses()) + "," +
              std::to_string(completed) + "," + std::to_string(o.trials) +
              "," + std::to_string(o.seed) + "," + config_cols + "\n";
    } else {
      body =
          "trial,seed,mu,r,stop_rule,lambda,epsilon,pr_max,max_restarts,"
          "r_target,iterations_completed,restarts,success,"
          "measured_assignment,measured_truth_vector,achieved_density,"
          "satisfiable_verdict,oracle_d_max,oracle_match,elapsed_seconds\n";
      for (std::size_t t = 0; t < reports.size(); ++t) {
        const RunReport& rep = reports[t];
        body += std::to_string(t) + "," + std::to_string(rep.seed) + "," +
                config_cols + "," + std::to_string(rep.r_target) + "," +
                std::to_string(rep.iterations_completed) + "," +
                std::to_string(rep.restarts) + "," +
                (rep.success ? "1" : "0") + ",";
        if (rep.success) {
          body += std::to_string(rep.measured_assignment) + "," +
                  rep.measured_truth_vector.to_string() + "," +
                  std::to_string(rep.achieved_density) + "," +
                  (rep.satisfiable_verdict ? "1" : "0") + ",";
        } else {
          body += ",,,,";
        }
        if (oracle.enabled && rep.success) {
          body += std::to_string(oracle.report->d_max) + "," +
                  (rep.achieved_density == oracle.report->d_max ? "1" : "0");
        } else {
          body += ",";
        }
        body += "," + format_double(rep.elapsed_seconds) + "\n";
      }
    }
  } else {
    std::ostringstream text;
    text << "instance: n=" << f.num_vars() << " m=" << f.num_clauses();
    if (!o.input.empty()) text << " (" << o.input << ")";
    text << "\nresolved: mu=" << mu << " r=" << r << " stop=" << o.stop_rule
         << " seed=" << o.seed << " trials=" << o.trials << "\n";
    if (oracle.enabled) {
      text << "oracle: d_max=" << oracle.report->d_max;
      if (oracle.report->d_nm) text << " d_nm=" << *oracle.report->d_nm;
      text << " satisfiable=" << (oracle.report->satisfiable ? "yes" : "no")
           << " optimal_assignments=" << oracle.report->argmax.size() << "\n";
    }
    if (decide_only) {
      if (completed == 0) {
        text << "verdict: UNDECIDED (no trial finished within the restart "
                "budget)\n";
      } else {
        text << "verdict: " << (sat_verdict ? "SAT" : "UNSAT")
             << " (best density " << best_density << "/" << f.num_clauses()
             << ", r=" << r << ", mu=" << mu << ", trials=" << o.trials
             << ")\n";
      }
    } else {
      for (std::size_t t = 0; t < reports.size(); ++t) {
        const RunReport& rep = reports[t];
        text << "trial " << t << ": seed=" << rep.seed;
        if (rep.success) {
          text << " density=" << rep.achieved_density << "/"
               << f.num_clauses() << " assignment="
               << assignment_bits(rep.measured_assignment, f.num_vars())
               << (rep.satisfiable_verdict ? " SAT" : " UNSAT")
               << " restarts=" << rep.restarts
               << " iterations=" << rep.iterations_completed;
          if (oracle.enabled) {
            text << (rep.achieved_density == oracle.report->d_max
                         ? " [optimal]"
                         : " [sub-optimal]");
          }
        } else {
          text << " FAILED (restart budget exhausted)";
        }
        text << "\n";
      }
      text << "summary: " << completed << "/" << o.trials
           << " trials completed\n";
    }
    body = text.str();
  }
  write_output(o.out, body);
  return completed > 0 ? kExitOk : kExitAlgorithm;
}

int cmd_analyze(const Options& o) {
  const Formula f = load_instance(o);
  if (f.num_vars() > o.enum_cap) {
    throw CapExceeded("analysis needs the density profile; n=" +
                      std::to_string(f.num_vars()) + " exceeds --enum-cap " +
                      std::to_string(o.enum_cap));
  }
  const DensityProfile profile = density_profile(f, o.enum_cap);
  const int mu = resolve_mu(o, f);
  const int root_order = f.num_clauses() + mu;

  long long r_max;
  if (o.r == "auto") {
    r_max = root_order < 2
                ? 10
                : std::min<long long>(
                      required_iterations(root_order, o.lambda).exact, 1000);
    r_max = std::max<long long>(r_max, 10);
  } else {
    r_max = parse_auto(o.r, "--r");
    if (r_max < 1) throw ParseError("--r must be >= 1");
  }

  const auto curve = convergence_curve(profile, mu, static_cast<int>(r_max));
  const FirstIterationBounds bounds = first_iteration_bounds(profile);
  const TuningResult tuning = required_dummy_qubits(f.num_clauses(), o.pr_max);

  json out{{"config", config_json("analyze", o, f, mu, r_max, true)},
           {"histogram", histogram_json(profile)},
           {"first_iteration", json{{"pr_ax_one", pr_aux_one_first(profile, mu)},
                                    {"pr_cmax", pr_max_density_at(profile, mu, 1)}}},
           {"bounds", bounds_json(bounds)},
           {"tuning", tuning_json(tuning)}};
  if (f.num_clauses() >= 2) {
    out["iterations"] = iterations_json(required_iterations(f.num_clauses(), o.lambda));
  }
  if (root_order >= 2) {
    out["iterations_extended"] =
        iterations_json(required_iterations(root_order, o.lambda));
  }

  if (!o.curve_out.empty()) write_output(o.curve_out, curve_csv(curve));
  if (!o.profile_out.empty()) write_output(o.profile_out, profile_csv(profile));

  if (o.format == "csv") {
    write_output(o.out, curve_csv(curve));
  } else if (o.format == "json") {
    write_output(o.out, out.dump(2) + "\n");
  } else {
    std::ostringstream text;
    text << "instance: n=" << f.num_vars() << " m=" << f.num_clauses()
         << " mu=" << mu << "\n";
    text << "histogram:";
    for (const auto& [d, c] : profile.histogram) {
      text << " " << d << "x" << c;
    }
    text << "\nfirst iteration: pr_ax_one="
         << format_double(curve.front().pr_ax_one)
         << " pr_cmax=" << format_double(curve.front().pr_cmax) << "\n";
    text << "bounds: " << format_double(bounds.lower) << " <= "
         << format_double(bounds.value) << " <= "
         << format_double(bounds.upper) << " -> "
         << (bounds.within ? "within" : "VIOLATED") << "\n";
    text << "tuning: pr_max=" << o.pr_max << " omega="
         << format_double(tuning.omega) << " mu_required="
         << tuning.mu_required << "\n";
    if (root_order >= 2) {
      const auto it = required_iterations(root_order, o.lambda);
      text << "iterations(root_order=" << root_order << ", lambda=" << o.lambda
           << "): exact=" << it.exact
           << " quadratic_bound=" << format_double(it.quadratic_bound) << "\n";
    }
    text << "curve (last point r=" << curve.back().r
         << "): pr_ax_one=" << format_double(curve.back().pr_ax_one)
         << " pr_cmax=" << format_double(curve.back().pr_cmax) << "\n";
    write_output(o.out, text.str());
  }
  return kExitOk;
}

int cmd_validate(const Options& o) {
  const Formula f = load_instance(o);
  const int mu = resolve_mu(o, f);
  const long long r = o.r == "auto" ? 3 : parse_auto(o.r, "--r");
  if (r < 0) throw ParseError("--r must be >= 0");
  const double deviation =
      engine_max_deviation(f, mu, static_cast<int>(r), o.naive_cap, o.enum_cap);
  const bool pass = deviation <= 1e-9;

  if (o.format == "json") {
    json out{{"config", config_json("validate", o, f, mu, r, false)},
             {"max_deviation", deviation},
             {"tolerance", 1e-9},
             {"pass", pass}};
    write_output(o.out, out.dump(2) + "\n");
  } else {
    std::ostringstream text;
    text << "engines: structured vs dense, n=" << f.num_vars()
         << " m=" << f.num_clauses() << " mu=" << mu << " rounds=" << r << "\n"
         << "max deviation: " << format_double(deviation) << " (tolerance 1e-09)"
         << "\nresult: " << (pass ? "PASS" : "FAIL") << "\n";
    write_output(o.out, text.str());
  }
  return pass ? kExitOk : kExitAlgorithm;
}

int cmd_gen(const Options& o) {
  if (o.n == 0) throw ParseError("gen needs --n");
  const Formula f = o.m < 0 ? generate_complete(o.n)
                            : generate_random(o.n, o.m, o.seed);
  write_output(o.out, serialize_dimacs(f));
  return kExitOk;
}

int cmd_bench(const Options& o) {
  const Formula f = load_instance(o);
  const int mu = resolve_mu(o, f);
  const long long r = resolve_r(o, f, mu);
  std::string body = "op,n,m,mu,r,seconds\n";
  const auto time_op = [&](const char* label, long long rounds, auto&& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    body += std::string(label) + "," + std::to_string(f.num_vars()) + "," +
            std::to_string(f.num_clauses()) + "," + std::to_string(mu) + "," +
            std::to_string(rounds) + "," + format_double(secs) + "\n";
  };

  time_op("density_profile", 0, [&] { density_profile(f, o.enum_cap); });
  time_op("structured_prepare", 0, [&] { StructuredState(f, mu, o.enum_cap); });
  time_op("structured_iterations", r, [&] {
    StructuredState s(f, mu, o.enum_cap);
    for (long long i = 0; i < r; ++i) {
      s.apply_partial_negation();
      s.measure_aux_forced(1);
    }
  });
  const CircuitLayout layout{f.num_vars(), f.num_clauses(), mu};
  if (layout.qubit_count() <= o.naive_cap) {
    const long long dense_rounds = std::min<long long>(r, 8);
    time_op("dense_run", dense_rounds, [&] {
      dense_run(f, mu, static_cast<int>(dense_rounds), o.naive_cap);
    });
  }
  write_output(o.out, body);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MAX-E3-SAT partial-negation amplification toolkit"};
  app.require_subcommand(1);

  Options opt;

  CLI::App* solve = app.add_subcommand("solve", "run the amplification loop");
  add_instance_options(solve, opt);
  add_run_options(solve, opt);
  add_output_options(solve, opt);
  solve->add_option("--dump-amps", opt.dump_amps,
                    "write trial 0's final amplitudes as CSV");

  CLI::App* decide = app.add_subcommand("decide", "satisfiability verdict only");
  add_instance_options(decide, opt);
  add_run_options(decide, opt);
  add_output_options(decide, opt);

  CLI::App* analyze =
      app.add_subcommand("analyze", "closed-form probabilities and tuning");
  add_instance_options(analyze, opt);
  add_run_options(analyze, opt);
  add_output_options(analyze, opt);
  analyze->add_option("--curve-out", opt.curve_out, "write the r-sweep CSV here");
  analyze->add_option("--profile-out", opt.profile_out,
                      "write the k,density CSV here");

  CLI::App* validate =
      app.add_subcommand("validate", "structured vs dense engine agreement");
  add_instance_options(validate, opt);
  add_run_options(validate, opt);
  add_output_options(validate, opt);

  CLI::App* gen = app.add_subcommand("gen", "emit a DIMACS instance");
  add_instance_options(gen, opt);
  add_output_options(gen, opt);

  CLI::App* bench = app.add_subcommand("bench", "time the main operations");
  add_instance_options(bench, opt);
  add_run_options(bench, opt);
  add_output_options(bench, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (solve->parsed()) return cmd_solve(opt, false);
    if (decide->parsed()) return cmd_solve(opt, true);
    if (analyze->parsed()) return cmd_analyze(opt);
    if (validate->parsed()) return cmd_validate(opt);
    if (gen->parsed()) return cmd_gen(opt);
    if (bench->parsed()) return cmd_bench(opt);
  } catch (const CapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCap;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const FormulaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitOk;
}
