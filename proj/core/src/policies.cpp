#include "msj/policies.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "msj/errors.hpp"

namespace msj {

namespace {

long long effective_size(const RemainingJob& j) {
  return static_cast<long long>(j.remaining) * j.need;
}

std::vector<int> sorted_ids(std::vector<int> ids) {
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace

std::vector<RemainingJob> order_jobs(const SystemState& state, OrderMode mode) {
  std::vector<RemainingJob> out;
  out.reserve(state.remaining.size());
  for (const auto& [id, rj] : state.remaining) out.push_back(rj);
  if (mode == OrderMode::ByNeed) {
    std::sort(out.begin(), out.end(), [](const RemainingJob& a, const RemainingJob& b) {
      return std::tie(a.need, a.arrival, a.id) < std::tie(b.need, b.arrival, b.id);
    });
  } else {
    std::sort(out.begin(), out.end(), [](const RemainingJob& a, const RemainingJob& b) {
      auto ea = effective_size(a), eb = effective_size(b);
      return std::tie(ea, a.arrival, a.id) < std::tie(eb, b.arrival, b.id);
    });
  }
  return out;
}

std::vector<WindowSet> window_sets(const std::vector<RemainingJob>& ordered, int k) {
  const int n = static_cast<int>(ordered.size());
  std::vector<WindowSet> out;
  out.reserve(n);
  // The run end only moves forward as the start does, so one sweep suffices.
  int end = 0;
  long long sum = 0;
  for (int start = 0; start < n; ++start) {
    if (end < start) {
      end = start;
      sum = 0;
    }
    while (end < n && sum + ordered[end].need <= k) sum += ordered[end++].need;
    WindowSet w;
    w.start = start;
    w.need_sum = static_cast<int>(sum);
    w.members.reserve(end - start);
    for (int i = start; i < end; ++i) w.members.push_back(ordered[i].id);
    out.push_back(std::move(w));
    sum -= ordered[start].need;
  }
  return out;
}

namespace {

// ra's window rule over an arbitrary ordering: the first exact-fit window if
// one exists, otherwise the first window.
SlotDecision pick_window(const std::vector<RemainingJob>& ordered, int k) {
  SlotDecision d;
  if (ordered.empty()) return d;
  auto windows = window_sets(ordered, k);
  for (const WindowSet& w : windows) {
    if (w.need_sum == k) {
      d.reserved = sorted_ids(w.members);
      return d;
    }
  }
  d.reserved = sorted_ids(windows.front().members);
  return d;
}

}  // namespace

SlotDecision ra_select(const SystemState& state, int k) {
  return pick_window(order_jobs(state, OrderMode::ByNeed), k);
}

SlotDecision ra_size_select(const SystemState& state, int k) {
  return pick_window(order_jobs(state, OrderMode::ByEffectiveSize), k);
}

SlotDecision sfa_select(const SystemState& state, int k) {
  SlotDecision d;
  if (state.remaining.empty()) return d;

  std::vector<RemainingJob> by_arrival;
  by_arrival.reserve(state.remaining.size());
  for (const auto& [id, rj] : state.remaining) by_arrival.push_back(rj);
  std::sort(by_arrival.begin(), by_arrival.end(),
            [](const RemainingJob& a, const RemainingJob& b) {
              return std::tie(a.arrival, a.id) < std::tie(b.arrival, b.id);
            });

  std::size_t prefix = 0;
  long long sum = 0;
  while (prefix < by_arrival.size() && sum < k) sum += by_arrival[prefix++].need;

  std::vector<RemainingJob> candidates(by_arrival.begin(), by_arrival.begin() + prefix);
  std::sort(candidates.begin(), candidates.end(),
            [](const RemainingJob& a, const RemainingJob& b) {
              return std::tie(b.need, a.arrival, a.id) < std::tie(a.need, b.arrival, b.id);
            });
  int load = 0;
  for (const RemainingJob& rj : candidates) {
    if (load + rj.need <= k) {
      load += rj.need;
      d.reserved.push_back(rj.id);
    }
  }
  d.reserved = sorted_ids(std::move(d.reserved));
  return d;
}

SlotDecision greedy_select(const SystemState& state, int k) {
  SlotDecision d;
  auto ordered = order_jobs(state, OrderMode::ByNeed);
  if (ordered.empty()) return d;
  d.reserved = sorted_ids(window_sets(ordered, k).front().members);
  return d;
}

SlotDecision rae_select(const SystemState& state, int k) {
  SlotDecision d;
  auto ordered = order_jobs(state, OrderMode::ByNeed);
  if (ordered.empty()) return d;

  auto windows = window_sets(ordered, k);
  const WindowSet* exact = nullptr;
  for (const WindowSet& w : windows) {
    if (w.need_sum == k) {
      exact = &w;
      break;
    }
  }

  if (exact != nullptr) {
    d.reserved = sorted_ids(exact->members);
    std::set<int> taken(exact->members.begin(), exact->members.end());
    std::vector<RemainingJob> rest;
    rest.reserve(ordered.size() - taken.size());
    for (const RemainingJob& rj : ordered)
      if (!taken.count(rj.id)) rest.push_back(rj);
    if (!rest.empty()) d.free_bank = sorted_ids(window_sets(rest, k).front().members);
    return d;
  }

  const WindowSet& first = windows.front();
  d.reserved = sorted_ids(first.members);
  // No exact fit: the first window is a prefix of the ordering, so the next
  // ordered job (if any) is the smallest-need job left over.
  if (first.members.size() < ordered.size())
    d.free_bank.push_back(ordered[first.members.size()].id);
  return d;
}

ExactFit exact_fit_subset(const std::vector<int>& needs, int k) {
  ExactFit fit;
  const int n = static_cast<int>(needs.size());
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    return std::tie(needs[b], a) < std::tie(needs[a], b);  // need desc, index asc
  });

  // Greedy pass. For power-of-two needs this is exact: scanning descending,
  // the running sum is always a multiple of the next item, so the first time
  // the sum reaches K it equals K, and it reaches K whenever the total does.
  int sum = 0;
  std::vector<int> taken;
  for (int i : idx) {
    if (sum + needs[i] <= k) {
      sum += needs[i];
      taken.push_back(i);
    }
  }
  if (sum == k) {
    fit.status = FitStatus::Found;
    fit.members = std::move(taken);
    std::sort(fit.members.begin(), fit.members.end());
    return fit;
  }

  // General needs: bounded backtracking over the descending order.
  constexpr long long kNodeCap = 1 << 20;
  long long nodes = 0;
  std::vector<long long> suffix(n + 1, 0);
  for (int i = n - 1; i >= 0; --i) suffix[i] = suffix[i + 1] + needs[idx[i]];
  std::vector<int> chosen;
  bool capped = false;

  auto dfs = [&](auto&& self, int pos, int rem) -> bool {
    if (rem == 0) return true;
    if (pos == n || suffix[pos] < rem) return false;
    if (++nodes > kNodeCap) {
      capped = true;
      return false;
    }
    if (needs[idx[pos]] <= rem) {
      chosen.push_back(idx[pos]);
      if (self(self, pos + 1, rem - needs[idx[pos]])) return true;
      chosen.pop_back();
      if (capped) return false;
    }
    return self(self, pos + 1, rem);
  };

  if (dfs(dfs, 0, k)) {
    fit.status = FitStatus::Found;
    fit.members = std::move(chosen);
    std::sort(fit.members.begin(), fit.members.end());
  } else {
    fit.status = capped ? FitStatus::Inconclusive : FitStatus::NotFound;
  }
  return fit;
}

// --- named policies ---------------------------------------------------------

void Policy::check_trace(const Trace& trace) const {
  if (trace.size_mode != SizeMode::Unit)
    throw PolicyModeMismatch(std::string(name()) + " requires unit sizes");
}

namespace {

struct RaPolicy : Policy {
  std::string_view name() const override { return "ra"; }
  void check_trace(const Trace& trace) const override {
    Policy::check_trace(trace);
    if (trace.mode != TraceMode::PowerOfTwo)
      throw PolicyModeMismatch("ra requires power-of-two needs");
  }
  SlotDecision select(const SystemState& state, int k) const override {
    return ra_select(state, k);
  }
};

struct SfaPolicy : Policy {
  std::string_view name() const override { return "sfa"; }
  void check_trace(const Trace& trace) const override {
    Policy::check_trace(trace);
    if (trace.mode != TraceMode::PowerOfTwo)
      throw PolicyModeMismatch("sfa requires power-of-two needs");
  }
  SlotDecision select(const SystemState& state, int k) const override {
    return sfa_select(state, k);
  }
};

struct GreedyPolicy : Policy {
  std::string_view name() const override { return "greedy"; }
  SlotDecision select(const SystemState& state, int k) const override {
    return greedy_select(state, k);
  }
};

struct RaePolicy : Policy {
  std::string_view name() const override { return "ra-e"; }
  int banks() const override { return 2; }
  SlotDecision select(const SystemState& state, int k) const override {
    return rae_select(state, k);
  }
};

struct RaSizePolicy : Policy {
  std::string_view name() const override { return "ra-size"; }
  void check_trace(const Trace& trace) const override {
    if (trace.mode != TraceMode::PowerOfTwo)
      throw PolicyModeMismatch("ra-size requires power-of-two needs");
  }
  SlotDecision select(const SystemState& state, int k) const override {
    return ra_size_select(state, k);
  }
};

// Shared helpers for the reference policies used by the randomized
// lower-bound experiments.

std::vector<const RemainingJob*> units_in(const SystemState& state) {
  std::vector<const RemainingJob*> units;
  for (const auto& [id, rj] : state.remaining)
    if (rj.need == 1) units.push_back(&rj);
  std::sort(units.begin(), units.end(), [](const RemainingJob* a, const RemainingJob* b) {
    return std::tie(a->arrival, a->id) < std::tie(b->arrival, b->id);
  });
  return units;
}

std::optional<int> earliest_need_k(const SystemState& state, int k) {
  const RemainingJob* best = nullptr;
  for (const auto& [id, rj] : state.remaining) {
    if (rj.need == k &&
        (best == nullptr || std::tie(rj.arrival, rj.id) < std::tie(best->arrival, best->id)))
      best = &rj;
  }
  if (best == nullptr) return std::nullopt;
  return best->id;
}

// Serves unit jobs the slot they arrive (half the bank stays idle when K/2
// arrive), otherwise one need-K job, oldest first.
struct ImmediateUnitPolicy : Policy {
  std::string_view name() const override { return "immediate-unit"; }
  SlotDecision select(const SystemState& state, int k) const override {
    SlotDecision d;
    auto units = units_in(state);
    std::vector<int> fresh;
    for (const RemainingJob* u : units)
      if (u->arrival == state.slot) fresh.push_back(u->id);
    if (!fresh.empty()) {
      if (static_cast<int>(fresh.size()) > k) fresh.resize(k);
      d.reserved = sorted_ids(std::move(fresh));
      return d;
    }
    if (auto id = earliest_need_k(state, k)) {
      d.reserved.push_back(*id);
      return d;
    }
    return greedy_select(state, k);
  }
};

// Waiting parameter zero: unit jobs go out the slot they arrive; everything
// else is served smallest-need first.
struct Theta0Policy : Policy {
  std::string_view name() const override { return "theta0"; }
  SlotDecision select(const SystemState& state, int k) const override {
    SlotDecision d;
    auto units = units_in(state);
    std::vector<int> fresh;
    for (const RemainingJob* u : units)
      if (u->arrival == state.slot) fresh.push_back(u->id);
    if (!fresh.empty()) {
      if (static_cast<int>(fresh.size()) > k) fresh.resize(k);
      d.reserved = sorted_ids(std::move(fresh));
      return d;
    }
    return greedy_select(state, k);
  }
};

// Waiting parameter T: unit jobs wait until K of them have gathered and go
// out as one full batch; meanwhile the non-unit jobs are served greedily.
struct ThetaTPolicy : Policy {
  std::string_view name() const override { return "thetaT"; }
  SlotDecision select(const SystemState& state, int k) const override {
    SlotDecision d;
    auto units = units_in(state);
    if (static_cast<int>(units.size()) >= k) {
      for (int i = 0; i < k; ++i) d.reserved.push_back(units[i]->id);
      d.reserved = sorted_ids(std::move(d.reserved));
      return d;
    }
    SystemState rest = state;
    for (const RemainingJob* u : units) rest.remaining.erase(u->id);
    if (!rest.remaining.empty()) return greedy_select(rest, k);
    return greedy_select(state, k);  // only a short unit batch left: flush it
  }
};

// The batching offline rule: a full batch of K unit jobs when available,
// otherwise the oldest need-K job, otherwise greedy.
struct BatchUnitPolicy : Policy {
  std::string_view name() const override { return "batch-unit"; }
  SlotDecision select(const SystemState& state, int k) const override {
    SlotDecision d;
    auto units = units_in(state);
    if (static_cast<int>(units.size()) >= k) {
      for (int i = 0; i < k; ++i) d.reserved.push_back(units[i]->id);
      d.reserved = sorted_ids(std::move(d.reserved));
      return d;
    }
    if (auto id = earliest_need_k(state, k)) {
      d.reserved.push_back(*id);
      return d;
    }
    return greedy_select(state, k);
  }
};

}  // namespace

std::unique_ptr<Policy> make_policy(std::string_view name) {
  if (name == "ra") return std::make_unique<RaPolicy>();
  if (name == "sfa") return std::make_unique<SfaPolicy>();
  if (name == "greedy") return std::make_unique<GreedyPolicy>();
  if (name == "ra-e") return std::make_unique<RaePolicy>();
  if (name == "ra-size") return std::make_unique<RaSizePolicy>();
  if (name == "immediate-unit") return std::make_unique<ImmediateUnitPolicy>();
  if (name == "theta0") return std::make_unique<Theta0Policy>();
  if (name == "thetaT") return std::make_unique<ThetaTPolicy>();
  if (name == "batch-unit") return std::make_unique<BatchUnitPolicy>();
  throw std::invalid_argument("unknown policy: " + std::string(name));
}

std::vector<std::string> policy_names() {
  return {"ra", "sfa", "greedy", "ra-e", "ra-size", "immediate-unit", "theta0", "thetaT",
          "batch-unit"};
}

}  // namespace msj
