#pragma once

#include <cstdint>
#include <iosfwd>
#include <numeric>
#include <string>
#include <vector>

#include "msj/adversary.hpp"
#include "msj/engine.hpp"
#include "msj/oracle.hpp"
#include "msj/policies.hpp"

namespace msj {

// Exact nonnegative rational, kept reduced. Flow totals are integers, so
// competitive ratios never go through floating point.
struct Ratio {
  long long num = 0;
  long long den = 1;

  static Ratio of(long long num, long long den);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  // this <= bound_num/bound_den, compared exactly
  bool leq(long long bound_num, long long bound_den) const {
    return num * bound_den <= bound_num * den;
  }
  bool operator==(const Ratio&) const = default;
};

struct SimOptions {
  int banks = 0;             // 0 = whatever the policy wants
  bool record_states = false;
};

// Runs the policy slot by slot until nothing remains and no arrivals are
// pending. Checks the policy against the trace's declared modes first.
RunResult simulate(const Trace& trace, const Policy& policy, const SimOptions& opts = {});

// --- invariant monitors ----------------------------------------------------
// Each returns holds=true or the first slot where the claimed invariant
// breaks, with the numbers at the breaking point in `details`.

// Relaxed slots leave at most K jobs in the system.
MonitorReport monitor_relaxed(const RunResult& run, int k);

// Full slots: n(t) <= K - 1 + 2*n_OPT(t).
MonitorReport monitor_full_bound(const RunResult& run, const OracleResult& opt, int k);

// Full slots: for every class threshold a, the run's class-limited volume
// stays within K-1 (unit sizes, classes by need) or (K-1)*2^(a+1) (weighted,
// classes by remaining*need) of the optimum's. Needs a run recorded with
// states.
MonitorReport monitor_volume_drift(const RunResult& run, const Trace& trace,
                                   const OracleResult& opt);

// Adding one job never lets any prefix of departures fall behind: the run
// on trace+extra has cumulative departure counts >= the run on trace alone,
// at every slot.
MonitorReport monitor_augmentation(const Policy& policy, const Trace& trace, const Job& extra);

// Two-bank run vs the one-bank optimum: the k-th departure of the two-bank
// run is never later than the k-th departure of the optimum.
MonitorReport monitor_dominance(const Trace& trace, const OracleResult& opt);

// --- competitive ratio -----------------------------------------------------

Ratio competitive_ratio(const Trace& trace, const Policy& policy);

// --- experiments -------------------------------------------------------

struct ExperimentRow {
  std::string scenario;
  int k = 0;
  double param = 0;      // arr, p, or T depending on the scenario
  std::string policy;
  int trials = 0;
  double mean_per_job_flow = 0;
};

struct ExperimentConfig {
  std::string scenario;  // stochastic-uniform | stochastic-spike | rand-lb | rand-lb-theta0 | rand-lb-thetaT
  std::vector<std::string> policies;
  std::vector<int> k_values;
  std::vector<double> params;  // arr values, p values, or empty for derived params
  int horizon = 100;
  int trials = 200;
  std::uint64_t seed_base = 0;
};

// Runs trials*|K|*|params| seeded traces; every policy sees the same trace
// within a trial. Rows come out in (K, param, policy) order.
std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config);

// CSV with header scenario,K,param,policy,trials,mean_per_job_flow
void write_csv(const std::vector<ExperimentRow>& rows, std::ostream& out);

// Preset configs for the five figure-style experiments (fig = 1..5) and the
// theta ratio experiments.
ExperimentConfig figure_config(int fig, int trials = 200, std::uint64_t seed_base = 0);
ExperimentConfig theta_config(int which /* 0 or 1 */, int trials = 200, std::uint64_t seed_base = 0);

}  // namespace msj
