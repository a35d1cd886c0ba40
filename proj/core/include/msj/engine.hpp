#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "msj/jobs.hpp"

namespace msj {

// A job still in the system, with its remaining size w_j(t).
struct RemainingJob {
  int id = 0;
  int arrival = 1;
  int need = 1;
  int remaining = 1;

  bool operator==(const RemainingJob&) const = default;
};

// System state at the start of slot `slot`, after that slot's arrivals have
// been injected: R(t^-). Keyed by job id so iteration order is deterministic.
struct SystemState {
  int slot = 1;
  std::map<int, RemainingJob> remaining;
  int arrivals_seen = 0;  // count of jobs with a_j <= slot

  int count() const { return static_cast<int>(remaining.size()); }
};

// What gets processed in one slot. `reserved` is the primary bank of K
// servers; `free_bank` is the second bank (only used by two-bank policies).
// Job ids, each listed at most once across both banks, each bank's needs
// summing to at most K.
struct SlotDecision {
  std::vector<int> reserved;
  std::vector<int> free_bank;

  bool empty() const { return reserved.empty() && free_bank.empty(); }
};

// Full: the reserved bank's needs sum to exactly K. Relaxed: anything less.
enum class SlotClass { Full, Relaxed };

// Produced by the harness monitors; attached to RunResult.
struct MonitorReport {
  std::string name;
  bool holds = true;
  std::optional<int> first_violation_slot;
  std::string details;  // quantities at the violation point, if any
};

// Everything a simulation run records. Per-slot vectors are indexed so that
// element i describes slot i+1; departures map job id to the slot at whose
// end the job left. Flow accounting counts occupancy slots: a job arriving
// at slot a and departing at the end of slot d contributes d - a + 1, so
// flow_total equals the sum of per_slot_count.
struct RunResult {
  std::map<int, int> departures;
  long long flow_total = 0;
  std::vector<int> per_slot_count;
  std::vector<SlotClass> slot_class;
  std::vector<SlotDecision> decisions;
  std::vector<std::vector<RemainingJob>> states;  // filled only when recording
  std::vector<MonitorReport> monitor_reports;

  int horizon() const { return static_cast<int>(per_slot_count.size()); }
  double per_job_flow(std::size_t job_count) const {
    return job_count == 0 ? 0.0 : static_cast<double>(flow_total) / static_cast<double>(job_count);
  }
};

// State at the start of slot 1 (slot-1 arrivals injected).
SystemState initial_state(const Trace& trace);

struct AdvanceResult {
  SystemState next;          // R((t+1)^-), slot-(t+1) arrivals included
  std::vector<int> departed; // ids whose remaining size hit zero this slot
};

// Processes one slot: every job in the decision has its remaining size
// decremented by one, jobs reaching zero depart at the end of slot t.
// Throws UnknownJob / CapacityExceeded on malformed decisions (each bank is
// limited to trace.k servers).
AdvanceResult advance_slot(const SystemState& state, const SlotDecision& decision,
                           const Trace& trace);

// Arrival buckets for a trace. advance_slot rescans the whole job list for
// next-slot arrivals, which turns long simulations quadratic; hot loops
// build one of these once and use the indexed overload instead.
class ArrivalIndex {
 public:
  explicit ArrivalIndex(const Trace& trace);
  const std::vector<Job>* at(int slot) const;  // nullptr when nothing arrives
  int last_arrival() const { return last_; }

 private:
  std::map<int, std::vector<Job>> buckets_;
  int last_ = 0;
};

AdvanceResult advance_slot(const SystemState& state, const SlotDecision& decision,
                           const Trace& trace, const ArrivalIndex& arrivals);

SlotClass classify_slot(const SlotDecision& decision, const SystemState& state, int k);

// Result of replaying a complete schedule against a trace.
struct ScheduleCheck {
  bool feasible = true;
  long long flow_total = 0;    // occupancy measure, sum of (d - a + 1)
  long long flow_waiting = 0;  // waiting measure, sum of (d - a)
  int first_offending_slot = 0;
  std::string reason;
  std::map<int, int> departures;
  std::vector<int> per_slot_count;
  std::vector<long long> per_slot_volume;           // sum of remaining*need over R(t^-)
  std::vector<std::vector<RemainingJob>> states;    // R(t^-) snapshots
};

// Verifies a schedule (element i = slot i+1) against a trace: bank capacity
// every slot, no job served before arrival or past completion, every job
// served exactly `size` slots in total. Infeasibilities are reported, not
// thrown.
ScheduleCheck check_schedule(const Trace& trace, const std::vector<SlotDecision>& schedule,
                             bool record_states = false);

}  // namespace msj
