#include "msj/harness.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "msj/errors.hpp"

namespace msj {

Ratio Ratio::of(long long num, long long den) {
  if (den == 0) {
    if (num != 0) throw std::invalid_argument("Ratio: zero denominator");
    return {0, 1};
  }
  if (num < 0 || den < 0) throw std::invalid_argument("Ratio: negative flow");
  long long g = std::gcd(num, den);
  return {num / g, den / g};
}

RunResult simulate(const Trace& trace, const Policy& policy, const SimOptions& opts) {
  std::vector<Violation> bad = validate_trace(trace);
  if (!bad.empty())
    throw std::invalid_argument("simulate: invalid trace (job " + std::to_string(bad.front().job_id) +
                                ": " + bad.front().rule + ")");
  policy.check_trace(trace);
  if (opts.banks != 0 && opts.banks != policy.banks())
    throw PolicyModeMismatch(std::string(policy.name()) + " uses " +
                             std::to_string(policy.banks()) + " bank(s), not " +
                             std::to_string(opts.banks));

  std::unordered_map<int, int> arrival_of;
  for (const Job& j : trace.jobs) arrival_of.emplace(j.id, j.arrival);

  ArrivalIndex arrivals(trace);
  SystemState state = initial_state(trace);
  RunResult run;
  const int bound = makespan_bound(trace);

  while (!state.remaining.empty() || state.slot <= arrivals.last_arrival()) {
    if (state.slot > bound)
      throw std::runtime_error(std::string(policy.name()) + " left work beyond slot " +
                               std::to_string(bound));
    SlotDecision d = policy.select(state, trace.k);
    run.per_slot_count.push_back(state.count());
    run.slot_class.push_back(classify_slot(d, state, trace.k));
    if (opts.record_states) {
      std::vector<RemainingJob> snap;
      snap.reserve(state.remaining.size());
      for (const auto& [id, rj] : state.remaining) snap.push_back(rj);
      run.states.push_back(std::move(snap));
    }
    AdvanceResult adv = advance_slot(state, d, trace, arrivals);
    for (int id : adv.departed) {
      run.departures[id] = state.slot;
      run.flow_total += state.slot - arrival_of.at(id) + 1;
    }
    run.decisions.push_back(std::move(d));
    state = std::move(adv.next);
  }
  return run;
}

// --- monitors ---------------------------------------------------------------

namespace {

MonitorReport violated(std::string name, int slot, std::string details) {
  MonitorReport r;
  r.name = std::move(name);
  r.holds = false;
  r.first_violation_slot = slot;
  r.details = std::move(details);
  return r;
}

int log2_floor(long long v) {
  int a = 0;
  while (v >= 2) {
    v /= 2;
    ++a;
  }
  return a;
}

// Cumulative departure counts per slot, index i = slot i+1.
std::vector<int> departure_steps(const std::map<int, int>& departures, int horizon) {
  std::vector<int> steps(horizon, 0);
  for (const auto& [id, slot] : departures)
    if (slot >= 1 && slot <= horizon) ++steps[slot - 1];
  for (int i = 1; i < horizon; ++i) steps[i] += steps[i - 1];
  return steps;
}

}  // namespace

MonitorReport monitor_relaxed(const RunResult& run, int k) {
  for (int i = 0; i < run.horizon(); ++i) {
    if (run.slot_class[i] == SlotClass::Relaxed && run.per_slot_count[i] > k)
      return violated("relaxed", i + 1,
                      "n(t)=" + std::to_string(run.per_slot_count[i]) + " > K=" + std::to_string(k));
  }
  return {"relaxed", true, {}, ""};
}

MonitorReport monitor_full_bound(const RunResult& run, const OracleResult& opt, int k) {
  for (int i = 0; i < run.horizon(); ++i) {
    if (run.slot_class[i] != SlotClass::Full) continue;
    int n_opt = i < static_cast<int>(opt.per_slot_remaining.size()) ? opt.per_slot_remaining[i] : 0;
    if (run.per_slot_count[i] > k - 1 + 2 * n_opt)
      return violated("full_bound", i + 1,
                      "n(t)=" + std::to_string(run.per_slot_count[i]) +
                          " > K-1+2*n_OPT(t)=" + std::to_string(k - 1 + 2 * n_opt));
  }
  return {"full_bound", true, {}, ""};
}

MonitorReport monitor_volume_drift(const RunResult& run, const Trace& trace,
                                   const OracleResult& opt) {
  if (run.horizon() > 0 && run.states.empty())
    throw std::invalid_argument("monitor_volume_drift needs a run recorded with states");

  ScheduleCheck opt_replay = check_schedule(trace, opt.witness, true);
  if (!opt_replay.feasible)
    throw std::invalid_argument("monitor_volume_drift: witness infeasible: " + opt_replay.reason);

  const bool weighted = trace.size_mode == SizeMode::Weighted;
  int w_max = 1;
  for (const Job& j : trace.jobs) w_max = std::max(w_max, j.size);
  const int a_max = log2_floor(static_cast<long long>(trace.k) * w_max);

  // volumes[a] = total remaining*need over jobs of class <= a
  auto volumes = [&](const std::vector<RemainingJob>& jobs) {
    std::vector<long long> v(a_max + 1, 0);
    for (const RemainingJob& rj : jobs) {
      long long eff = static_cast<long long>(rj.remaining) * rj.need;
      int cls = weighted ? log2_floor(eff) : log2_floor(rj.need);
      if (cls <= a_max) v[cls] += eff;
    }
    for (int a = 1; a <= a_max; ++a) v[a] += v[a - 1];
    return v;
  };

  const std::vector<RemainingJob> none;
  for (int i = 0; i < run.horizon(); ++i) {
    if (run.slot_class[i] != SlotClass::Full) continue;
    const auto& opt_jobs = i < static_cast<int>(opt_replay.states.size()) ? opt_replay.states[i] : none;
    std::vector<long long> va = volumes(run.states[i]);
    std::vector<long long> vo = volumes(opt_jobs);
    for (int a = 0; a <= a_max; ++a) {
      long long bound = weighted ? static_cast<long long>(trace.k - 1) * (1LL << (a + 1))
                                 : trace.k - 1;
      if (va[a] - vo[a] > bound)
        return violated("volume_drift", i + 1,
                        "class<=" + std::to_string(a) + ": dV=" + std::to_string(va[a] - vo[a]) +
                            " > " + std::to_string(bound));
    }
  }
  return {"volume_drift", true, {}, ""};
}

MonitorReport monitor_augmentation(const Policy& policy, const Trace& trace, const Job& extra) {
  Trace bigger = trace;
  Job added = extra;
  int max_id = -1;
  for (const Job& j : trace.jobs) max_id = std::max(max_id, j.id);
  added.id = max_id + 1;
  bigger.jobs.push_back(added);

  RunResult base = simulate(trace, policy);
  RunResult aug = simulate(bigger, policy);
  int horizon = std::max(base.horizon(), aug.horizon());
  std::vector<int> cum_base = departure_steps(base.departures, horizon);
  std::vector<int> cum_aug = departure_steps(aug.departures, horizon);
  for (int i = 0; i < horizon; ++i) {
    if (cum_aug[i] < cum_base[i])
      return violated("augmentation", i + 1,
                      "departures " + std::to_string(cum_aug[i]) + " < " +
                          std::to_string(cum_base[i]) + " after adding job");
  }
  return {"augmentation", true, {}, ""};
}

MonitorReport monitor_dominance(const Trace& trace, const OracleResult& opt) {
  auto rae = make_policy("ra-e");
  RunResult run = simulate(trace, *rae);
  ScheduleCheck opt_replay = check_schedule(trace, opt.witness);
  if (!opt_replay.feasible)
    throw std::invalid_argument("monitor_dominance: witness infeasible: " + opt_replay.reason);

  std::vector<int> ours, theirs;
  for (const auto& [id, slot] : run.departures) ours.push_back(slot);
  for (const auto& [id, slot] : opt_replay.departures) theirs.push_back(slot);
  std::sort(ours.begin(), ours.end());
  std::sort(theirs.begin(), theirs.end());
  for (std::size_t i = 0; i < ours.size() && i < theirs.size(); ++i) {
    if (ours[i] > theirs[i])
      return violated("dominance", ours[i],
                      "departure " + std::to_string(i + 1) + ": " + std::to_string(ours[i]) +
                          " > " + std::to_string(theirs[i]));
  }
  return {"dominance", true, {}, ""};
}

// --- ratio and experiments ---------------------------------------------------

Ratio competitive_ratio(const Trace& trace, const Policy& policy) {
  RunResult run = simulate(trace, policy);
  OracleResult opt = opt_flow_time(trace);
  return Ratio::of(run.flow_total, opt.opt_flow);
}

namespace {

Trace cell_trace(const std::string& scenario, int k, double param, int horizon,
                 std::uint64_t seed) {
  if (scenario == "stochastic-uniform")
    return stochastic_trace(k, static_cast<int>(param), horizon, NeedDist::uniform_pow2(), seed);
  if (scenario == "stochastic-spike")
    return stochastic_trace(k, 5, horizon, NeedDist::spike(param), seed);
  if (scenario == "rand-lb")
    return rand_lb_trace(k, 4 * k, param, seed);
  if (scenario == "rand-lb-thetaT")
    return rand_lb_trace(k, 8 * k, param, seed);
  if (scenario == "rand-lb-theta0") {
    int t = 2 * k * k;
    return rand_lb_tail_trace(k, t, t * k, param, seed);
  }
  throw std::invalid_argument("unknown scenario " + scenario);
}

bool derived_param(const std::string& scenario) {
  return scenario == "rand-lb" || scenario == "rand-lb-theta0" || scenario == "rand-lb-thetaT";
}

}  // namespace

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config) {
  if (config.trials < 1) throw std::invalid_argument("run_experiment: trials must be >= 1");
  std::vector<std::unique_ptr<Policy>> policies;
  for (const std::string& name : config.policies) policies.push_back(make_policy(name));

  std::vector<ExperimentRow> rows;
  for (int k : config.k_values) {
    std::vector<double> params = config.params;
    if (params.empty()) {
      if (!derived_param(config.scenario))
        throw std::invalid_argument("run_experiment: scenario needs explicit params");
      params.push_back(1.0 / k);  // the randomized constructions default to p = 1/K
    }
    for (double param : params) {
      std::vector<double> mean(policies.size(), 0.0);
      for (int trial = 0; trial < config.trials; ++trial) {
        Trace trace =
            cell_trace(config.scenario, k, param, config.horizon, config.seed_base + trial);
        for (std::size_t pi = 0; pi < policies.size(); ++pi) {
          RunResult run = simulate(trace, *policies[pi]);
          mean[pi] += run.per_job_flow(trace.jobs.size());
        }
      }
      for (std::size_t pi = 0; pi < policies.size(); ++pi) {
        rows.push_back({config.scenario, k, param, config.policies[pi], config.trials,
                        mean[pi] / config.trials});
      }
    }
  }
  return rows;
}

void write_csv(const std::vector<ExperimentRow>& rows, std::ostream& out) {
  out << "scenario,K,param,policy,trials,mean_per_job_flow\n";
  for (const ExperimentRow& r : rows) {
    std::ostringstream line;
    line << r.scenario << ',' << r.k << ',' << r.param << ',' << r.policy << ',' << r.trials << ','
         << r.mean_per_job_flow;
    out << line.str() << '\n';
  }
}

ExperimentConfig figure_config(int fig, int trials, std::uint64_t seed_base) {
  ExperimentConfig c;
  c.trials = trials;
  c.seed_base = seed_base;
  switch (fig) {
    case 1:
      c.scenario = "stochastic-uniform";
      c.policies = {"ra", "sfa"};
      c.k_values = {16};
      c.params = {5, 10, 15, 20};
      return c;
    case 2:
      c.scenario = "stochastic-uniform";
      c.policies = {"ra", "sfa"};
      c.k_values = {32};
      c.params = {5, 10, 15, 20};
      return c;
    case 3:
      c.scenario = "stochastic-uniform";
      c.policies = {"ra", "sfa"};
      c.k_values = {8, 16, 32, 64, 128, 256, 512};
      c.params = {5};
      return c;
    case 4:
      c.scenario = "stochastic-spike";
      c.policies = {"ra", "sfa"};
      c.k_values = {8};
      c.params = {1.0 / 4, 2.0 / 5, 3.0 / 6, 4.0 / 7, 5.0 / 8, 6.0 / 9};
      return c;
    case 5:
      c.scenario = "rand-lb";
      c.policies = {"ra", "sfa", "immediate-unit"};
      c.k_values = {32, 64, 128, 256};
      c.params = {};
      return c;
    default:
      throw std::invalid_argument("figure_config: fig must be 1..5");
  }
}

ExperimentConfig theta_config(int which, int trials, std::uint64_t seed_base) {
  ExperimentConfig c;
  c.trials = trials;
  c.seed_base = seed_base;
  c.k_values = {8, 16, 32};
  if (which == 0) {
    c.scenario = "rand-lb-theta0";
    c.policies = {"theta0", "batch-unit"};
  } else if (which == 1) {
    c.scenario = "rand-lb-thetaT";
    c.policies = {"thetaT", "immediate-unit"};
  } else {
    throw std::invalid_argument("theta_config: which must be 0 or 1");
  }
  return c;
}

}  // namespace msj
