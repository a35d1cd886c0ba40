#include "msj/oracle.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>
#include <unordered_map>

#include "msj/errors.hpp"
#include "msj/policies.hpp"

namespace msj {

int makespan_bound(const Trace& trace) {
  if (trace.jobs.empty()) return 0;
  int last = 0;
  long long work = 0;
  for (const Job& j : trace.jobs) {
    last = std::max(last, j.arrival);
    work += j.size;
  }
  return last + static_cast<int>(work);
}

namespace {

// Jobs identical in (remaining, need) are interchangeable: the search works
// on class counts and the witness picks earliest arrivals within a class.
struct ClassCount {
  int rem = 0;
  int need = 0;
  int count = 0;
  bool operator==(const ClassCount&) const = default;
};
using StateVec = std::vector<ClassCount>;

struct MemoKey {
  int slot_key = 0;
  StateVec state;
  bool operator==(const MemoKey&) const = default;
};

struct MemoKeyHash {
  std::size_t operator()(const MemoKey& k) const {
    std::size_t h = 1469598103934665603ull;
    auto mix = [&h](long long v) {
      h ^= static_cast<std::size_t>(v);
      h *= 1099511628211ull;
    };
    mix(k.slot_key);
    for (const ClassCount& c : k.state) {
      mix(c.rem);
      mix(c.need);
      mix(c.count);
    }
    return h;
  }
};

struct MemoEntry {
  long long cost = 0;
  std::vector<int> take;  // per class of the canonical state
};

void canonicalize(StateVec& s) {
  std::sort(s.begin(), s.end(), [](const ClassCount& a, const ClassCount& b) {
    return std::tie(a.rem, a.need) < std::tie(b.rem, b.need);
  });
  StateVec merged;
  for (const ClassCount& c : s) {
    if (c.count == 0) continue;
    if (!merged.empty() && merged.back().rem == c.rem && merged.back().need == c.need)
      merged.back().count += c.count;
    else
      merged.push_back(c);
  }
  s = std::move(merged);
}

struct Solver {
  int k;
  long long node_budget;
  std::map<int, StateVec> arrivals;  // slot -> classes arriving there
  int last_arrival = 0;
  long long nodes = 0;
  std::unordered_map<MemoKey, MemoEntry, MemoKeyHash> memo;

  int slot_key(int t) const { return std::min(t, last_arrival + 1); }

  // Next arrival slot strictly after t, or 0.
  int next_arrival_after(int t) const {
    auto it = arrivals.upper_bound(t);
    return it == arrivals.end() ? 0 : it->first;
  }

  StateVec inject(StateVec s, int t) const {
    auto it = arrivals.find(t);
    if (it != arrivals.end()) {
      for (const ClassCount& c : it->second) s.push_back(c);
      canonicalize(s);
    }
    return s;
  }

  long long solve(const StateVec& state, int t) {
    if (state.empty()) {
      int nxt = next_arrival_after(t);
      if (nxt == 0) return 0;
      return solve(inject({}, nxt), nxt);
    }
    MemoKey key{slot_key(t), state};
    if (auto it = memo.find(key); it != memo.end()) return it->second.cost;
    if (++nodes > node_budget)
      throw TooLarge("node budget exhausted after " + std::to_string(nodes - 1) + " nodes");

    long long n = 0;
    for (const ClassCount& c : state) n += c.count;

    const int m = static_cast<int>(state.size());
    std::vector<int> take(m, 0);
    long long best = -1;
    std::vector<int> best_take;

    // Enumerate maximal feasible per-class take counts, highest counts first
    // so the first optimum found is deterministic.
    auto enumerate = [&](auto&& self, int i, int cap) -> void {
      if (i == m) {
        for (const ClassCount& c : state)
          if (c.need <= cap && take[&c - state.data()] < c.count) return;  // not maximal
        StateVec child;
        child.reserve(m + 2);
        for (int j = 0; j < m; ++j) {
          const ClassCount& c = state[j];
          if (c.count - take[j] > 0) child.push_back({c.rem, c.need, c.count - take[j]});
          if (take[j] > 0 && c.rem > 1) child.push_back({c.rem - 1, c.need, take[j]});
        }
        canonicalize(child);
        long long sub;
        if (child.empty()) {
          int nxt = next_arrival_after(t);
          sub = nxt == 0 ? 0 : solve(inject({}, nxt), nxt);
        } else {
          sub = solve(inject(std::move(child), t + 1), t + 1);
        }
        long long cost = n + sub;
        if (best < 0 || cost < best) {
          best = cost;
          best_take = take;
        }
        return;
      }
      int max_take = std::min(state[i].count, cap / state[i].need);
      for (int x = max_take; x >= 0; --x) {
        take[i] = x;
        self(self, i + 1, cap - x * state[i].need);
      }
      take[i] = 0;
    };
    enumerate(enumerate, 0, k);

    memo.emplace(std::move(key), MemoEntry{best, best_take});
    return best;
  }
};

}  // namespace

OracleResult opt_flow_time(const Trace& trace, const OracleOptions& opts) {
  for (const Job& j : trace.jobs) {
    if (j.need < 1 || j.need > trace.k || j.size < 1 || j.arrival < 1)
      throw std::invalid_argument("oracle: malformed job " + std::to_string(j.id));
  }
  bool unit = std::all_of(trace.jobs.begin(), trace.jobs.end(),
                          [](const Job& j) { return j.size == 1; });
  long long total_size = 0;
  for (const Job& j : trace.jobs) total_size += j.size;
  if (!opts.force) {
    if (unit && trace.jobs.size() > 12)
      throw TooLarge("more than 12 unit jobs; pass force to try anyway");
    if (!unit && (trace.jobs.size() > 7 || total_size > 12))
      throw TooLarge("weighted instance above 7 jobs / total size 12; pass force to try anyway");
  }

  OracleResult res;
  if (trace.jobs.empty()) return res;

  Solver solver;
  solver.k = trace.k;
  solver.node_budget = opts.node_budget;
  for (const Job& j : trace.jobs) {
    solver.last_arrival = std::max(solver.last_arrival, j.arrival);
    solver.arrivals[j.arrival].push_back({j.size, j.need, 1});
  }
  for (auto& [slot, classes] : solver.arrivals) canonicalize(classes);

  res.opt_flow = solver.solve(solver.inject({}, 1), 1);
  res.nodes_explored = solver.nodes;

  // Replay the memoized decisions with concrete jobs, earliest arrival (then
  // lowest id) first within each (remaining, need) class.
  std::map<int, std::vector<Job>> arrivals_by_slot;
  for (const Job& j : trace.jobs) arrivals_by_slot[j.arrival].push_back(j);

  std::map<int, RemainingJob> live;
  int t = 1;
  for (const Job& j : trace.jobs)
    if (j.arrival == 1) live.emplace(j.id, RemainingJob{j.id, j.arrival, j.need, j.size});

  auto next_arrival_after = [&](int slot) {
    auto it = arrivals_by_slot.upper_bound(slot);
    return it == arrivals_by_slot.end() ? 0 : it->first;
  };

  while (true) {
    if (live.empty()) {
      int nxt = next_arrival_after(t);
      if (nxt == 0) break;
      for (; t < nxt; ++t) {
        res.witness.push_back({});
        res.per_slot_remaining.push_back(0);
        res.per_slot_volume.push_back(0);
      }
      for (const Job& j : arrivals_by_slot.at(nxt))
        live.emplace(j.id, RemainingJob{j.id, j.arrival, j.need, j.size});
      continue;
    }

    StateVec state;
    for (const auto& [id, rj] : live) state.push_back({rj.remaining, rj.need, 1});
    canonicalize(state);

    const MemoEntry& entry = solver.memo.at(MemoKey{solver.slot_key(t), state});

    res.per_slot_remaining.push_back(static_cast<int>(live.size()));
    long long vol = 0;
    for (const auto& [id, rj] : live) vol += static_cast<long long>(rj.remaining) * rj.need;
    res.per_slot_volume.push_back(vol);

    SlotDecision d;
    for (std::size_t ci = 0; ci < state.size(); ++ci) {
      int want = entry.take[ci];
      if (want == 0) continue;
      std::vector<const RemainingJob*> members;
      for (const auto& [id, rj] : live)
        if (rj.remaining == state[ci].rem && rj.need == state[ci].need) members.push_back(&rj);
      std::sort(members.begin(), members.end(),
                [](const RemainingJob* a, const RemainingJob* b) {
                  return std::tie(a->arrival, a->id) < std::tie(b->arrival, b->id);
                });
      for (int i = 0; i < want; ++i) d.reserved.push_back(members[i]->id);
    }
    std::sort(d.reserved.begin(), d.reserved.end());

    for (int id : d.reserved) {
      RemainingJob& rj = live.at(id);
      if (--rj.remaining == 0) live.erase(id);
    }
    res.witness.push_back(std::move(d));
    ++t;
    if (auto it = arrivals_by_slot.find(t); it != arrivals_by_slot.end())
      for (const Job& j : it->second)
        live.emplace(j.id, RemainingJob{j.id, j.arrival, j.need, j.size});
  }

  return res;
}

// --- scripted offline schedules ---------------------------------------------

namespace {

[[noreturn]] void mismatch(const std::string& what) { throw ScenarioMismatch(what); }

void fill_measures(const Trace& trace, ScriptedOffline& s) {
  ScheduleCheck chk = check_schedule(trace, s.schedule);
  if (!chk.feasible)
    mismatch("constructed schedule infeasible at slot " + std::to_string(chk.first_offending_slot) +
             ": " + chk.reason);
  s.flow_total = chk.flow_total;
  s.flow_waiting = chk.flow_waiting;
}

void put(std::vector<SlotDecision>& schedule, int slot, int id) {
  if (static_cast<int>(schedule.size()) < slot) schedule.resize(slot);
  schedule[slot - 1].reserved.push_back(id);
}

ScriptedOffline scripted_sfa_lb(const Trace& trace) {
  const int k = trace.k;
  std::vector<int> units, heavy;
  for (const Job& j : trace.jobs) {
    if (j.need == 1 && j.arrival == 1) units.push_back(j.id);
    else if (j.need == k && j.arrival == static_cast<int>(heavy.size()) + 1) heavy.push_back(j.id);
    else mismatch("job " + std::to_string(j.id) + " does not fit the sfa-lb shape");
  }
  if (static_cast<int>(units.size()) != k / 2) mismatch("expected K/2 unit jobs at slot 1");
  const int t = static_cast<int>(heavy.size());

  ScriptedOffline s;
  for (int id : units) put(s.schedule, 1, id);
  for (int i = 0; i < t; ++i) put(s.schedule, i + 2, heavy[i]);
  s.analytic_bound = k / 2 + 2LL * t + 1;
  fill_measures(trace, s);
  return s;
}

ScriptedOffline scripted_sfa_gap(const Trace& trace) {
  const int k = trace.k;
  std::map<int, std::vector<int>> unit_batches;  // odd slot -> unit ids
  std::vector<int> heavy;                        // need-K ids in arrival order
  int t = 0;
  for (const Job& j : trace.jobs) {
    t = std::max(t, j.arrival);
    if (j.need == 1 && j.arrival % 2 == 1) unit_batches[j.arrival].push_back(j.id);
    else if (j.need == k) heavy.push_back(j.id);
    else mismatch("job " + std::to_string(j.id) + " does not fit the sfa-gap shape");
  }

  ScriptedOffline s;
  std::vector<int> batch_slots;
  for (const auto& [slot, ids] : unit_batches) batch_slots.push_back(slot);
  std::set<int> unit_slots;  // slots carrying a unit batch in the schedule
  for (std::size_t i = 0; i + 1 < batch_slots.size(); i += 2) {
    int target = batch_slots[i + 1];  // both halves of the pair go out here
    unit_slots.insert(target);
    for (int id : unit_batches[batch_slots[i]]) put(s.schedule, target, id);
    for (int id : unit_batches[batch_slots[i + 1]]) put(s.schedule, target, id);
  }
  if (batch_slots.size() % 2 == 1) {
    int slot = batch_slots.back();
    unit_slots.insert(slot);
    for (int id : unit_batches[slot]) put(s.schedule, slot, id);
  }
  // One need-K job in every slot not taken by a unit batch, arrival order.
  int slot = 1;
  std::map<int, int> arrivals_by_id;
  for (const Job& j : trace.jobs) arrivals_by_id[j.id] = j.arrival;
  auto arrival_of = [&](int id) { return arrivals_by_id.at(id); };
  for (int id : heavy) {
    while (unit_slots.count(slot) || slot < arrival_of(id)) ++slot;
    put(s.schedule, slot, id);
    ++slot;
  }
  fill_measures(trace, s);
  return s;
}

ScriptedOffline scripted_greedy_lb(const Trace& trace) {
  const int k = trace.k;
  std::vector<int> big;                       // need-K, one per odd slot
  std::map<int, std::vector<int>> quarters;   // arrival slot -> need-K/4 ids
  std::map<int, std::vector<int>> halves;     // arrival slot -> need-K/2 ids
  for (const Job& j : trace.jobs) {
    if (j.need == k) big.push_back(j.id);
    else if (j.need == k / 4) quarters[j.arrival].push_back(j.id);
    else if (j.need == k / 2) halves[j.arrival].push_back(j.id);
    else mismatch("job " + std::to_string(j.id) + " does not fit the greedy-lb shape");
  }
  const int l1 = static_cast<int>(big.size());
  const int l2 = static_cast<int>(halves.size());

  ScriptedOffline s;
  for (int l = 0; l < l1; ++l) {
    put(s.schedule, 2 * l + 1, big[l]);
    for (int id : quarters[2 * l + 1]) put(s.schedule, 2 * l + 2, id);
    for (int id : quarters[2 * l + 2]) put(s.schedule, 2 * l + 2, id);
  }
  for (const auto& [slot, ids] : halves)
    for (int id : ids) put(s.schedule, slot + 1, id);
  s.analytic_bound = 4LL * l1 + 2LL * l2;
  fill_measures(trace, s);
  return s;
}

ScriptedOffline scripted_det_lb_tail(const Trace& trace) {
  // Only the canonical all-full transcript: K/2 units at slot 1 and one
  // need-K job per slot 1..T.
  const int k = trace.k;
  std::vector<int> units, heavy;
  for (const Job& j : trace.jobs) {
    if (j.need == 1 && j.arrival == 1) units.push_back(j.id);
    else if (j.need == k && j.arrival == static_cast<int>(heavy.size()) + 1) heavy.push_back(j.id);
    else mismatch("job " + std::to_string(j.id) + " does not fit the all-full tail shape");
  }
  if (static_cast<int>(units.size()) != k / 2) mismatch("expected K/2 unit jobs at slot 1");
  const int t = static_cast<int>(heavy.size());

  ScriptedOffline s;
  for (int id : units) put(s.schedule, 1, id);
  for (int i = 0; i < t; ++i) put(s.schedule, i + 2, heavy[i]);
  s.analytic_bound = t + 1 + k / 2;
  fill_measures(trace, s);
  return s;
}

ScriptedOffline scripted_det_lb_drain(const Trace& trace) {
  // No closed-form bound; the batching rule's own run is the reference.
  auto policy = make_policy("batch-unit");
  ArrivalIndex arrivals(trace);
  SystemState state = initial_state(trace);
  ScriptedOffline s;
  int guard = makespan_bound(trace) + 2;
  while ((!state.remaining.empty() || state.slot <= arrivals.last_arrival()) && guard-- > 0) {
    SlotDecision d = policy->select(state, trace.k);
    if (static_cast<int>(s.schedule.size()) < state.slot) s.schedule.resize(state.slot);
    s.schedule[state.slot - 1] = d;
    state = advance_slot(state, d, trace, arrivals).next;
  }
  while (!s.schedule.empty() && s.schedule.back().empty()) s.schedule.pop_back();
  fill_measures(trace, s);
  return s;
}

}  // namespace

ScriptedOffline scripted_offline(ScriptedScenario scenario, const Trace& trace) {
  switch (scenario) {
    case ScriptedScenario::SfaLb: return scripted_sfa_lb(trace);
    case ScriptedScenario::SfaGap: return scripted_sfa_gap(trace);
    case ScriptedScenario::GreedyLb: return scripted_greedy_lb(trace);
    case ScriptedScenario::DetLbTail: return scripted_det_lb_tail(trace);
    case ScriptedScenario::DetLbDrain: return scripted_det_lb_drain(trace);
  }
  mismatch("unknown scenario");
}

}  // namespace msj
