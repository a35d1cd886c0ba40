#pragma once

#include <string>
#include <vector>

#include "msj/engine.hpp"

namespace msj {

// Latest slot by which some optimal schedule has finished everything:
// max arrival plus total remaining work.
int makespan_bound(const Trace& trace);

struct OracleOptions {
  bool force = false;                    // skip the instance-size guideline
  long long node_budget = 10'000'000;    // search nodes before giving up
};

struct OracleResult {
  long long opt_flow = 0;
  std::vector<SlotDecision> witness;      // element i = slot i+1
  std::vector<int> per_slot_remaining;    // n_OPT(t)
  std::vector<long long> per_slot_volume; // sum of remaining*need over R_OPT(t^-)
  long long nodes_explored = 0;
};

// Exact minimum total flow time over all feasible single-bank schedules,
// via depth-first search over slots with memoization on (slot, canonical
// multiset of (remaining, need)). Only maximal slot decisions are explored;
// within a (remaining, need) class the witness serves earlier arrivals
// first, so the witness and its per-slot sequences are deterministic.
// Throws TooLarge above the size guideline (12 unit jobs, or 7 weighted
// jobs with total size 12) unless opts.force, or if the node budget runs
// out either way.
OracleResult opt_flow_time(const Trace& trace, const OracleOptions& opts = {});

// Hand-constructed offline schedules for the lower-bound traces, plus the
// analytic flow bound each construction is paired with. flow_waiting is the
// measure the bounds are stated in (sum of d_j - a_j).
enum class ScriptedScenario { SfaLb, SfaGap, GreedyLb, DetLbTail, DetLbDrain };

struct ScriptedOffline {
  std::vector<SlotDecision> schedule;
  long long analytic_bound = 0;  // 0 when the scenario has no closed form
  long long flow_total = 0;      // occupancy measure of the schedule
  long long flow_waiting = 0;    // waiting measure of the schedule
};

// Throws ScenarioMismatch when the trace does not have the shape the
// construction assumes. Params beyond the trace itself are recovered from
// the trace shape.
ScriptedOffline scripted_offline(ScriptedScenario scenario, const Trace& trace);

}  // namespace msj
