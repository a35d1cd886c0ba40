#include "msj/adversary.hpp"

#include <algorithm>
#include <random>

#include "msj/errors.hpp"

namespace msj {

namespace {

// Thin wrapper so that identical seeds give identical traces regardless of
// the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Unbiased integer in [lo, hi] via Lemire rejection.
  int uniform(int lo, int hi) {
    std::uint64_t range = static_cast<std::uint64_t>(hi) - lo + 1;
    std::uint64_t threshold = (-range) % range;
    while (true) {
      std::uint64_t x = eng_();
      unsigned __int128 m = static_cast<unsigned __int128>(x) * range;
      if (static_cast<std::uint64_t>(m) >= threshold)
        return lo + static_cast<int>(m >> 64);
    }
  }

  bool bernoulli(double p) {
    double u = (eng_() >> 11) * (1.0 / 9007199254740992.0);  // 53-bit uniform
    return u < p;
  }

 private:
  std::mt19937_64 eng_;
};

void require_even(int k, const char* who) {
  if (k < 2 || k % 2 != 0)
    throw std::invalid_argument(std::string(who) + ": K must be even and at least 2");
}

TraceMode mode_for(int k) { return is_pow2(k) ? TraceMode::PowerOfTwo : TraceMode::General; }

int push(Trace& trace, int arrival, int need) {
  int id = static_cast<int>(trace.jobs.size());
  trace.jobs.push_back({id, arrival, 1, need});
  return id;
}

}  // namespace

Trace sfa_lb_trace(int k, int t) {
  require_even(k, "sfa_lb_trace");
  if (t < 1) throw std::invalid_argument("sfa_lb_trace: T must be at least 1");
  Trace trace{k, mode_for(k), SizeMode::Unit, {}};
  for (int i = 0; i < k / 2; ++i) push(trace, 1, 1);
  for (int slot = 1; slot <= t; ++slot) push(trace, slot, k);
  return trace;
}

Trace sfa_gap_trace(int k, int t) {
  require_even(k, "sfa_gap_trace");
  if (t < 1 || t % 2 == 0) throw std::invalid_argument("sfa_gap_trace: T must be odd and positive");
  Trace trace{k, mode_for(k), SizeMode::Unit, {}};
  for (int slot = 1; slot <= t; ++slot) {
    if (slot % 2 == 1)
      for (int i = 0; i < k / 2; ++i) push(trace, slot, 1);
    push(trace, slot, k);
    push(trace, slot, k);
  }
  return trace;
}

Trace greedy_lb_trace(int k, int l1, int l2) {
  if (k < 8 || !is_pow2(k))
    throw std::invalid_argument("greedy_lb_trace: K must be a power of two, at least 8");
  if (l1 < 1 || l2 < 0) throw std::invalid_argument("greedy_lb_trace: bad phase lengths");
  Trace trace{k, TraceMode::PowerOfTwo, SizeMode::Unit, {}};
  for (int l = 0; l < l1; ++l) {
    push(trace, 2 * l + 1, k);
    push(trace, 2 * l + 1, k / 4);
    push(trace, 2 * l + 1, k / 4);
    push(trace, 2 * l + 2, k / 4);
    push(trace, 2 * l + 2, k / 4);
  }
  for (int n = 0; n < l2; ++n) {
    push(trace, 2 * l1 + n, k / 2);
    push(trace, 2 * l1 + n, k / 2);
  }
  return trace;
}

AdaptiveSession adaptive_det_lb(const Policy& policy, int k, int t, int l) {
  require_even(k, "adaptive_det_lb");
  if (t < 1 || l < 0) throw std::invalid_argument("adaptive_det_lb: bad phase lengths");

  AdaptiveSession session;
  session.k = k;
  session.t = t;
  session.l = l;

  Trace& trace = session.trace;
  trace = Trace{k, mode_for(k), SizeMode::Unit, {}};
  RunResult& run = session.run;

  auto give = [&](int slot, int need) {
    int id = push(trace, slot, need);
    return trace.jobs[id];
  };

  // Slot 1 opens with half a bank of unit jobs plus one full-bank job.
  std::vector<Job> pending;
  for (int i = 0; i < k / 2; ++i) pending.push_back(give(1, 1));
  pending.push_back(give(1, k));

  SystemState state = initial_state(trace);
  int last_arrival = 1;
  bool drain_emitted = false;

  while (!state.remaining.empty() || state.slot <= last_arrival) {
    const int slot = state.slot;
    SlotDecision d = policy.select(state, k);

    run.per_slot_count.push_back(state.count());
    run.slot_class.push_back(classify_slot(d, state, k));
    run.decisions.push_back(d);

    // The adversary watches whether the full-bank job got a slot, not
    // whether the bank happened to be packed tight.
    bool full = false;
    for (int id : d.reserved)
      if (trace.jobs[id].need == k) full = true;
    if (slot <= t) {
      session.transcript.push_back({slot, pending, d, full});
      if (!full) ++session.t1;
      pending.clear();
      if (slot < t) {
        if (!full)
          for (int i = 0; i < k / 2; ++i) pending.push_back(give(slot + 1, 1));
        pending.push_back(give(slot + 1, k));
        last_arrival = slot + 1;
      }
    }
    if (slot == t && !drain_emitted) {
      drain_emitted = true;
      // Wasteful transcripts get drained: idle gap, then pairs that only fit
      // together. Frugal ones get nothing further.
      if (static_cast<long long>(session.t1) * session.t1 >= t) {
        session.phase = AdaptivePhase::Drain;
        int start = t + 1 + session.t1 / 2;
        for (int n = 0; n < l; ++n) {
          give(start + n, k / 2);
          give(start + n, k / 2);
        }
        if (l > 0) last_arrival = start + l - 1;
      } else {
        session.phase = AdaptivePhase::Tail;
      }
    }

    AdvanceResult adv = advance_slot(state, d, trace);
    for (int id : adv.departed) {
      run.departures[id] = slot;
      run.flow_total += slot - trace.jobs[id].arrival + 1;
    }
    state = std::move(adv.next);
  }

  return session;
}

Trace rand_lb_trace(int k, int t, double p, std::uint64_t seed) {
  require_even(k, "rand_lb_trace");
  if (t < 1) throw std::invalid_argument("rand_lb_trace: T must be at least 1");
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("rand_lb_trace: p must lie in [0, 1]");
  Rng rng(seed);
  Trace trace{k, mode_for(k), SizeMode::Unit, {}};
  for (int slot = 1; slot <= t; ++slot) {
    if (rng.bernoulli(p))
      for (int i = 0; i < k / 2; ++i) push(trace, slot, 1);
    push(trace, slot, k);
  }
  return trace;
}

Trace rand_lb_tail_trace(int k, int t, int l, double p, std::uint64_t seed) {
  Trace trace = rand_lb_trace(k, t, p, seed);
  int start = t + 1 + t / (2 * k);
  for (int n = 0; n < l; ++n) {
    push(trace, start + n, k / 2);
    push(trace, start + n, k / 2);
  }
  return trace;
}

Trace stochastic_trace(int k, int arr, int horizon, const NeedDist& dist, std::uint64_t seed) {
  if (k < 1 || arr < 1 || horizon < 1)
    throw std::invalid_argument("stochastic_trace: K, arrival rate and horizon must be positive");
  if (dist.p < 0.0 || dist.p > 1.0)
    throw std::invalid_argument("stochastic_trace: p must lie in [0, 1]");
  if (dist.kind == NeedDist::Kind::UniformPow2 && !is_pow2(k))
    throw std::invalid_argument("stochastic_trace: uniform power-of-two needs require power-of-two K");
  Rng rng(seed);
  const int n = arr * horizon;
  std::vector<std::pair<int, int>> drawn;  // (arrival, need)
  drawn.reserve(n);
  int levels = 0;
  for (int v = k; v > 1; v /= 2) ++levels;  // log2(K)
  for (int i = 0; i < n; ++i) {
    int arrival = rng.uniform(1, horizon);
    int need;
    if (dist.kind == NeedDist::Kind::UniformPow2)
      need = 1 << rng.uniform(0, levels);
    else if (rng.bernoulli(dist.p) || levels == 0)
      need = k;
    else
      need = 1 << rng.uniform(0, levels - 1);  // uniform over the powers below K
    drawn.emplace_back(arrival, need);
  }
  std::stable_sort(drawn.begin(), drawn.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  Trace trace{k, mode_for(k), SizeMode::Unit, {}};
  for (const auto& [arrival, need] : drawn) push(trace, arrival, need);
  return trace;
}

}  // namespace msj
