#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "msj/engine.hpp"
#include "msj/policies.hpp"

namespace msj {

// --- fixed lower-bound constructions -------------------------------------

// K/2 unit-need jobs at slot 1, one need-K job every slot 1..T.
Trace sfa_lb_trace(int k, int t);

// K/2 unit-need jobs at every odd slot 1,3,..,T (T odd), two need-K jobs
// every slot 1..T.
Trace sfa_gap_trace(int k, int t);

// For l = 0..L1-1: slot 2l+1 gets one need-K job and two need-K/4 jobs,
// slot 2l+2 gets two need-K/4 jobs. Then slots 2*L1+n (n = 0..L2-1) get two
// need-K/2 jobs each. Requires K >= 8, power of two.
Trace greedy_lb_trace(int k, int l1, int l2);

// --- adaptive deterministic adversary -------------------------------------

// One main-phase slot of the transcript: what arrived, what the policy
// processed, and how the slot classified.
struct AdaptiveSlot {
  int slot = 0;
  std::vector<Job> arrivals;
  SlotDecision decision;
  bool full = false;  // decision contained a need-K job
};

enum class AdaptivePhase { Drain, Tail };

struct AdaptiveSession {
  int k = 0;
  int t = 0;          // main-phase length
  int l = 0;          // length of the drain branch's pair phase
  int t1 = 0;         // wasted (non-full) slots in 1..T
  AdaptivePhase phase = AdaptivePhase::Tail;
  std::vector<AdaptiveSlot> transcript;  // slots 1..T
  Trace trace;        // all realized arrivals
  RunResult run;      // the policy's run against them
};

// Co-simulates the policy against the reactive input: slot 1 seeds one
// need-K job plus K/2 unit jobs; for t < T, a full slot t triggers one
// need-K arrival at t+1, a wasted slot t triggers K/2 unit jobs plus one
// need-K job at t+1. After T, if t1 >= sqrt(T) (Drain): no arrivals for
// floor(t1/2) slots, then two need-K/2 jobs per slot for L slots; otherwise
// (Tail) nothing more arrives. The simulation then runs to completion.
AdaptiveSession adaptive_det_lb(const Policy& policy, int k, int t, int l);

// --- randomized constructions ---------------------------------------------

// Per slot 1..T: with probability p, K/2 unit jobs and one need-K job
// arrive; otherwise one need-K job. Deterministic given seed.
Trace rand_lb_trace(int k, int t, double p, std::uint64_t seed);

// The trace the theta experiments run on: rand_lb main phase, then no
// arrivals for T/(2K) slots, then two need-K/2 jobs per slot for L slots.
Trace rand_lb_tail_trace(int k, int t, int l, double p, std::uint64_t seed);

struct NeedDist {
  enum class Kind { UniformPow2, SpikeP };
  Kind kind = Kind::UniformPow2;
  double p = 0.25;  // probability of need=K under SpikeP

  static NeedDist uniform_pow2() { return {Kind::UniformPow2, 0.0}; }
  static NeedDist spike(double p) { return {Kind::SpikeP, p}; }
};

// arr*horizon unit-size jobs, arrival slots uniform in [1, horizon], needs
// drawn from the given distribution over the powers of two up to K.
Trace stochastic_trace(int k, int arr, int horizon, const NeedDist& dist, std::uint64_t seed);

}  // namespace msj
