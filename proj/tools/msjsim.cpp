#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "msj/adversary.hpp"
#include "msj/errors.hpp"
#include "msj/harness.hpp"
#include "msj/oracle.hpp"
#include "msj/trace_io.hpp"

namespace {

using namespace msj;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;  // violated monitor, infeasible schedule, invalid trace
constexpr int kExitUsage = 2;      // bad flags, mode mismatches, oversized instances

struct GenArgs {
  std::string scenario;
  std::string policy = "ra";  // det-lb co-simulation target
  int k = 8;
  int t = 1;
  int l = 0;
  int l1 = 1;
  int l2 = 0;
  double p = -1;  // -1 = default 1/K
  int arr = 5;
  int horizon = 100;
  std::string dist = "uniform";
  std::uint64_t seed = 0;
  std::string out;
};

struct SimArgs {
  std::string in;
  std::string policy;
  int banks = 0;
  std::string monitors = "none";
};

struct OptArgs {
  std::string in;
  bool force = false;
  long long budget = 10'000'000;
};

struct RatioArgs {
  std::string in;
  std::string policy;
  int k = 0;  // optional cross-check against the trace header
  bool force = false;
};

struct ExpArgs {
  int fig = 0;
  int theta = -1;
  int trials = 200;
  std::uint64_t seed = 0;
  std::string out;
};

struct CheckArgs {
  std::string in;
  std::string schedule;
};

int run_gen(const GenArgs& a) {
  Trace trace;
  double p = a.p < 0 ? 1.0 / a.k : a.p;
  if (a.scenario == "sfa-lb") {
    trace = sfa_lb_trace(a.k, a.t);
  } else if (a.scenario == "sfa-gap") {
    trace = sfa_gap_trace(a.k, a.t);
  } else if (a.scenario == "greedy-lb") {
    trace = greedy_lb_trace(a.k, a.l1, a.l2);
  } else if (a.scenario == "det-lb") {
    auto policy = make_policy(a.policy);
    AdaptiveSession session = adaptive_det_lb(*policy, a.k, a.t, a.l);
    trace = session.trace;
    std::cout << "t1=" << session.t1 << " phase="
              << (session.phase == AdaptivePhase::Drain ? "drain" : "tail")
              << " policy_flow=" << session.run.flow_total << "\n";
  } else if (a.scenario == "rand-lb") {
    trace = rand_lb_trace(a.k, a.t, p, a.seed);
  } else if (a.scenario == "stochastic") {
    NeedDist dist = a.dist == "spike" ? NeedDist::spike(p) : NeedDist::uniform_pow2();
    trace = stochastic_trace(a.k, a.arr, a.horizon, dist, a.seed);
  } else {
    std::cerr << "unknown scenario: " << a.scenario << "\n";
    return kExitUsage;
  }
  std::cout << "seed=" << a.seed << " jobs=" << trace.jobs.size() << "\n";
  if (a.out.empty())
    std::cout << format_trace(trace);
  else
    write_trace_file(trace, a.out);
  return kExitOk;
}

std::vector<std::string> monitor_list(const std::string& arg) {
  if (arg == "none") return {};
  if (arg == "all") return {"relaxed", "full-bound", "volume-drift", "dominance"};
  std::vector<std::string> names;
  std::stringstream ss(arg);
  std::string item;
  while (std::getline(ss, item, ',')) names.push_back(item);
  return names;
}

int run_sim(const SimArgs& a) {
  Trace trace = read_trace_file(a.in);
  auto policy = make_policy(a.policy);
  std::vector<std::string> monitors = monitor_list(a.monitors);

  SimOptions opts;
  opts.banks = a.banks;
  for (const std::string& m : monitors)
    if (m == "volume-drift") opts.record_states = true;

  RunResult run = simulate(trace, *policy, opts);
  std::cout << "policy=" << policy->name() << " jobs=" << trace.jobs.size()
            << " flow_total=" << run.flow_total << " per_job_flow="
            << run.per_job_flow(trace.jobs.size()) << " horizon=" << run.horizon() << "\n";

  bool any_violation = false;
  if (!monitors.empty()) {
    OracleResult opt;
    bool need_oracle = false;
    for (const std::string& m : monitors)
      if (m != "relaxed") need_oracle = true;
    if (need_oracle) opt = opt_flow_time(trace);

    for (const std::string& m : monitors) {
      MonitorReport rep;
      if (m == "relaxed")
        rep = monitor_relaxed(run, trace.k);
      else if (m == "full-bound")
        rep = monitor_full_bound(run, opt, trace.k);
      else if (m == "volume-drift")
        rep = monitor_volume_drift(run, trace, opt);
      else if (m == "dominance")
        rep = monitor_dominance(trace, opt);
      else {
        std::cerr << "unknown monitor: " << m << "\n";
        return kExitUsage;
      }
      std::cout << rep.name << "," << (rep.holds ? "true" : "false") << ","
                << (rep.first_violation_slot ? std::to_string(*rep.first_violation_slot) : "-")
                << "\n";
      if (!rep.holds) {
        any_violation = true;
        std::cout << "  " << rep.details << "\n";
      }
    }
  }
  return any_violation ? kExitViolation : kExitOk;
}

int run_opt(const OptArgs& a) {
  Trace trace = read_trace_file(a.in);
  OracleOptions opts;
  opts.force = a.force;
  opts.node_budget = a.budget;
  OracleResult res = opt_flow_time(trace, opts);
  std::cout << "opt_flow=" << res.opt_flow << " nodes=" << res.nodes_explored << "\n";
  for (std::size_t i = 0; i < res.witness.size(); ++i) {
    std::cout << (i + 1) << ":";
    const auto& ids = res.witness[i].reserved;
    for (std::size_t j = 0; j < ids.size(); ++j) std::cout << (j ? "," : " ") << ids[j];
    std::cout << "\n";
  }
  return kExitOk;
}

int run_ratio(const RatioArgs& a) {
  Trace trace = read_trace_file(a.in);
  if (a.k != 0 && a.k != trace.k) {
    std::cerr << "--k " << a.k << " does not match the trace header K=" << trace.k << "\n";
    return kExitUsage;
  }
  auto policy = make_policy(a.policy);
  RunResult run = simulate(trace, *policy);
  OracleOptions oracle_opts;
  oracle_opts.force = a.force;
  OracleResult opt = opt_flow_time(trace, oracle_opts);
  Ratio r = Ratio::of(run.flow_total, opt.opt_flow);
  std::printf("flow=%lld opt=%lld ratio=%lld/%lld (%.4f)\n", run.flow_total, opt.opt_flow, r.num,
              r.den, r.value());
  return kExitOk;
}

int run_exp(const ExpArgs& a) {
  if ((a.fig == 0) == (a.theta < 0)) {
    std::cerr << "pass exactly one of --fig 1..5 or --theta 0|1\n";
    return kExitUsage;
  }
  ExperimentConfig config =
      a.fig != 0 ? figure_config(a.fig, a.trials, a.seed) : theta_config(a.theta, a.trials, a.seed);
  std::vector<ExperimentRow> rows = run_experiment(config);
  if (a.out.empty()) {
    std::cerr << "seed=" << a.seed << "\n";
    write_csv(rows, std::cout);
  } else {
    std::cout << "seed=" << a.seed << " rows=" << rows.size() << "\n";
    std::ofstream out(a.out);
    if (!out) {
      std::cerr << "cannot write " << a.out << "\n";
      return kExitUsage;
    }
    write_csv(rows, out);
  }
  return kExitOk;
}

// Schedule files mirror the `opt` output: one `slot: id,id,...` line per
// non-empty slot.
std::vector<SlotDecision> parse_schedule(std::istream& in) {
  std::vector<SlotDecision> schedule;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::size_t colon = line.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("schedule line missing ':'");
    int slot = std::stoi(line.substr(0, colon));
    if (slot < 1) throw std::invalid_argument("schedule slots are 1-based");
    if (static_cast<int>(schedule.size()) < slot) schedule.resize(slot);
    std::stringstream ids(line.substr(colon + 1));
    std::string tok;
    while (std::getline(ids, tok, ',')) {
      if (tok.find_first_not_of(" \t") == std::string::npos) continue;
      schedule[slot - 1].reserved.push_back(std::stoi(tok));
    }
  }
  return schedule;
}

int run_check(const CheckArgs& a) {
  Trace trace = read_trace_file(a.in);
  std::vector<Violation> bad = validate_trace(trace);
  for (const Violation& v : bad)
    std::cout << "violation: job " << v.job_id << ": " << v.rule << "\n";
  if (!bad.empty()) return kExitViolation;
  std::cout << "trace ok: K=" << trace.k << " jobs=" << trace.jobs.size() << "\n";

  if (!a.schedule.empty()) {
    std::ifstream in(a.schedule);
    if (!in) {
      std::cerr << "cannot read " << a.schedule << "\n";
      return kExitUsage;
    }
    std::vector<SlotDecision> schedule = parse_schedule(in);
    ScheduleCheck chk = check_schedule(trace, schedule);
    if (!chk.feasible) {
      std::cout << "schedule infeasible at slot " << chk.first_offending_slot << ": " << chk.reason
                << "\n";
      return kExitViolation;
    }
    std::cout << "schedule ok: flow_total=" << chk.flow_total << " flow_waiting=" << chk.flow_waiting
              << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-server job scheduling simulator"};
  app.require_subcommand(1);

  GenArgs gen_args;
  CLI::App* gen = app.add_subcommand("gen", "generate a trace");
  gen->add_option("--scenario", gen_args.scenario, "sfa-lb|sfa-gap|greedy-lb|det-lb|rand-lb|stochastic")
      ->required();
  gen->add_option("--k", gen_args.k, "servers per bank");
  gen->add_option("--t", gen_args.t, "phase length T");
  gen->add_option("--l", gen_args.l, "drain pair-slot count (det-lb)");
  gen->add_option("--l1", gen_args.l1, "greedy-lb first phase length");
  gen->add_option("--l2", gen_args.l2, "greedy-lb second phase length");
  gen->add_option("--p", gen_args.p, "probability parameter (default 1/K)");
  gen->add_option("--arr", gen_args.arr, "mean arrivals per slot (stochastic)");
  gen->add_option("--horizon", gen_args.horizon, "arrival horizon (stochastic)");
  gen->add_option("--dist", gen_args.dist, "uniform|spike (stochastic)");
  gen->add_option("--policy", gen_args.policy, "policy to co-simulate (det-lb)");
  gen->add_option("--seed", gen_args.seed, "rng seed");
  gen->add_option("-o,--out", gen_args.out, "trace file (stdout when omitted)");

  SimArgs sim_args;
  CLI::App* sim = app.add_subcommand("sim", "run a policy over a trace");
  sim->add_option("-i,--in", sim_args.in, "trace file")->required();
  sim->add_option("--policy", sim_args.policy, "policy name")->required();
  sim->add_option("--banks", sim_args.banks, "bank count override");
  sim->add_option("--monitors", sim_args.monitors,
                  "none|all|comma list of relaxed,full-bound,volume-drift,dominance");

  OptArgs opt_args;
  CLI::App* opt = app.add_subcommand("opt", "exact offline optimum");
  opt->add_option("-i,--in", opt_args.in, "trace file")->required();
  opt->add_flag("--force", opt_args.force, "skip the instance size guideline");
  opt->add_option("--budget", opt_args.budget, "search node budget");

  RatioArgs ratio_args;
  CLI::App* ratio = app.add_subcommand("ratio", "policy flow vs exact optimum");
  ratio->add_option("-i,--in", ratio_args.in, "trace file")->required();
  ratio->add_option("--policy", ratio_args.policy, "policy name")->required();
  ratio->add_option("--k", ratio_args.k, "cross-check against the trace header");
  ratio->add_flag("--force", ratio_args.force, "skip the oracle size guideline");

  ExpArgs exp_args;
  CLI::App* exp = app.add_subcommand("exp", "run a preset experiment");
  exp->add_option("--fig", exp_args.fig, "figure preset 1..5");
  exp->add_option("--theta", exp_args.theta, "theta preset 0|1");
  exp->add_option("--trials", exp_args.trials, "trials per cell");
  exp->add_option("--seed", exp_args.seed, "base seed");
  exp->add_option("-o,--out", exp_args.out, "csv file (stdout when omitted)");

  CheckArgs check_args;
  CLI::App* check = app.add_subcommand("check", "validate a trace or schedule");
  check->add_option("-i,--in", check_args.in, "trace file")->required();
  check->add_option("--schedule", check_args.schedule, "schedule file to replay");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) return run_gen(gen_args);
    if (sim->parsed()) return run_sim(sim_args);
    if (opt->parsed()) return run_opt(opt_args);
    if (ratio->parsed()) return run_ratio(ratio_args);
    if (exp->parsed()) return run_exp(exp_args);
    if (check->parsed()) return run_check(check_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
