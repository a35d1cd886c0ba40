#include "msj/engine.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "msj/errors.hpp"

namespace msj {

namespace {

// Validates one bank of a decision against the state, returns its need sum.
int bank_need_sum(const std::vector<int>& ids, const SystemState& state, int k,
                  const char* bank, std::set<int>& used) {
  int sum = 0;
  for (int id : ids) {
    auto it = state.remaining.find(id);
    if (it == state.remaining.end())
      throw UnknownJob("slot " + std::to_string(state.slot) + ": job " + std::to_string(id) +
                       " is not in the system");
    if (!used.insert(id).second)
      throw UnknownJob("slot " + std::to_string(state.slot) + ": job " + std::to_string(id) +
                       " listed twice in one decision");
    sum += it->second.need;
  }
  if (sum > k)
    throw CapacityExceeded("slot " + std::to_string(state.slot) + ": " + bank + " bank needs " +
                           std::to_string(sum) + " of " + std::to_string(k) + " servers");
  return sum;
}

}  // namespace

SystemState initial_state(const Trace& trace) {
  SystemState s;
  s.slot = 1;
  for (const Job& j : trace.jobs) {
    if (j.arrival == 1) {
      s.remaining.emplace(j.id, RemainingJob{j.id, j.arrival, j.need, j.size});
      ++s.arrivals_seen;
    }
  }
  return s;
}

namespace {

// Serving and departures, before the next slot's arrivals.
AdvanceResult advance_core(const SystemState& state, const SlotDecision& decision, int k) {
  std::set<int> used;
  bank_need_sum(decision.reserved, state, k, "reserved", used);
  bank_need_sum(decision.free_bank, state, k, "free", used);

  AdvanceResult res;
  res.next = state;
  res.next.slot = state.slot + 1;
  for (int id : used) {
    RemainingJob& rj = res.next.remaining.at(id);
    if (--rj.remaining == 0) {
      res.departed.push_back(id);
      res.next.remaining.erase(id);
    }
  }
  return res;
}

void inject(SystemState& state, const Job& j) {
  state.remaining.emplace(j.id, RemainingJob{j.id, j.arrival, j.need, j.size});
  ++state.arrivals_seen;
}

}  // namespace

AdvanceResult advance_slot(const SystemState& state, const SlotDecision& decision,
                           const Trace& trace) {
  AdvanceResult res = advance_core(state, decision, trace.k);
  for (const Job& j : trace.jobs)
    if (j.arrival == res.next.slot) inject(res.next, j);
  return res;
}

ArrivalIndex::ArrivalIndex(const Trace& trace) {
  for (const Job& j : trace.jobs) {
    buckets_[j.arrival].push_back(j);
    last_ = std::max(last_, j.arrival);
  }
}

const std::vector<Job>* ArrivalIndex::at(int slot) const {
  auto it = buckets_.find(slot);
  return it == buckets_.end() ? nullptr : &it->second;
}

AdvanceResult advance_slot(const SystemState& state, const SlotDecision& decision,
                           const Trace& trace, const ArrivalIndex& arrivals) {
  AdvanceResult res = advance_core(state, decision, trace.k);
  if (const std::vector<Job>* batch = arrivals.at(res.next.slot))
    for (const Job& j : *batch) inject(res.next, j);
  return res;
}

SlotClass classify_slot(const SlotDecision& decision, const SystemState& state, int k) {
  int sum = 0;
  for (int id : decision.reserved) {
    auto it = state.remaining.find(id);
    if (it != state.remaining.end()) sum += it->second.need;
  }
  return sum == k ? SlotClass::Full : SlotClass::Relaxed;
}

ScheduleCheck check_schedule(const Trace& trace, const std::vector<SlotDecision>& schedule,
                             bool record_states) {
  ScheduleCheck res;
  std::map<int, Job> by_id;
  std::map<int, std::vector<int>> arrivals;  // slot -> ids
  for (const Job& j : trace.jobs) {
    by_id.emplace(j.id, j);
    arrivals[j.arrival].push_back(j.id);
  }

  auto fail = [&](int slot, const std::string& why) {
    res.feasible = false;
    res.first_offending_slot = slot;
    res.reason = why;
    return res;
  };

  std::map<int, int> remaining;  // id -> remaining size, present = arrived & unfinished
  auto arrivals_it = arrivals.begin();
  int horizon = static_cast<int>(schedule.size());
  if (!trace.jobs.empty()) {
    int last_arrival = 0;
    for (const Job& j : trace.jobs) last_arrival = std::max(last_arrival, j.arrival);
    horizon = std::max(horizon, last_arrival);
  }

  for (int slot = 1; slot <= horizon; ++slot) {
    while (arrivals_it != arrivals.end() && arrivals_it->first == slot) {
      for (int id : arrivals_it->second) remaining.emplace(id, by_id.at(id).size);
      ++arrivals_it;
    }

    res.per_slot_count.push_back(static_cast<int>(remaining.size()));
    long long vol = 0;
    for (const auto& [id, rem] : remaining) vol += static_cast<long long>(rem) * by_id.at(id).need;
    res.per_slot_volume.push_back(vol);
    if (record_states) {
      std::vector<RemainingJob> snap;
      snap.reserve(remaining.size());
      for (const auto& [id, rem] : remaining) {
        const Job& j = by_id.at(id);
        snap.push_back({id, j.arrival, j.need, rem});
      }
      res.states.push_back(std::move(snap));
    }

    if (slot > static_cast<int>(schedule.size())) continue;
    const SlotDecision& d = schedule[slot - 1];
    std::set<int> used;
    for (const auto* bank : {&d.reserved, &d.free_bank}) {
      int sum = 0;
      for (int id : *bank) {
        auto jt = by_id.find(id);
        if (jt == by_id.end()) return fail(slot, "unknown job id " + std::to_string(id));
        if (!used.insert(id).second)
          return fail(slot, "job " + std::to_string(id) + " listed twice");
        auto rt = remaining.find(id);
        if (rt == remaining.end()) {
          if (jt->second.arrival > slot)
            return fail(slot, "job " + std::to_string(id) + " served before arrival");
          return fail(slot, "job " + std::to_string(id) + " served after completion");
        }
        sum += jt->second.need;
      }
      if (sum > trace.k)
        return fail(slot, "needs sum to " + std::to_string(sum) + " > K=" + std::to_string(trace.k));
    }
    for (int id : used) {
      if (--remaining.at(id) == 0) {
        remaining.erase(id);
        res.departures[id] = slot;
      }
    }
  }

  if (!remaining.empty()) {
    std::ostringstream why;
    why << remaining.size() << " job(s) never finish (first: id " << remaining.begin()->first << ")";
    return fail(horizon + 1, why.str());
  }

  // Trim trailing all-empty slots so per-slot vectors end at the last
  // occupied slot.
  while (!res.per_slot_count.empty() && res.per_slot_count.back() == 0) {
    res.per_slot_count.pop_back();
    res.per_slot_volume.pop_back();
    if (record_states) res.states.pop_back();
  }

  for (const Job& j : trace.jobs) {
    int d = res.departures.at(j.id);
    res.flow_total += d - j.arrival + 1;
    res.flow_waiting += d - j.arrival;
  }
  return res;
}

}  // namespace msj
