#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "msj/engine.hpp"

namespace msj {

// ByNeed: ascending (need, arrival, id).
// ByEffectiveSize: ascending (remaining*need, arrival, id).
enum class OrderMode { ByNeed, ByEffectiveSize };

std::vector<RemainingJob> order_jobs(const SystemState& state, OrderMode mode);

// Window set over an ordered job list: starting at position `start`, the
// longest consecutive run whose needs sum to at most K. One window per
// starting position.
struct WindowSet {
  int start = 0;  // position in the ordered list, 0-based
  std::vector<int> members;  // job ids, in list order
  int need_sum = 0;
};

std::vector<WindowSet> window_sets(const std::vector<RemainingJob>& ordered, int k);

// Single-bank selections. All are pure functions of the state.
//
// ra: order by need; if some window sums to exactly K, process the first
// such window, otherwise process the first window.
SlotDecision ra_select(const SystemState& state, int k);

// sfa: take the shortest earliest-arrived prefix whose needs sum to >= K
// (everything, if the total is smaller), then admit jobs from that prefix
// in decreasing need while they fit.
SlotDecision sfa_select(const SystemState& state, int k);

// greedy: the longest by-need-ordered prefix that fits in K.
SlotDecision greedy_select(const SystemState& state, int k);

// ra_size: ra's window rule over the by-effective-size ordering.
SlotDecision ra_size_select(const SystemState& state, int k);

// ra-e, two banks of K servers each: reserved bank runs ra's rule; the free
// bank runs the first window over the leftover jobs when an exact-fit window
// exists, otherwise it takes the single smallest-need leftover job.
SlotDecision rae_select(const SystemState& state, int k);

// Exact-fit subset search used by the window/monitor machinery.
enum class FitStatus { Found, NotFound, Inconclusive };
struct ExactFit {
  FitStatus status = FitStatus::NotFound;
  std::vector<int> members;  // indices into the input vector
};

// Finds a subset of `needs` summing to exactly K. Greedy from the largest
// need down (provably exact when all needs are powers of two dividing K);
// for other inputs falls back to a bounded backtracking search and reports
// Inconclusive if the node cap (2^20) is hit.
ExactFit exact_fit_subset(const std::vector<int>& needs, int k);

// Named policy front-end used by the harness and the CLI. Stateless.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string_view name() const = 0;
  virtual int banks() const { return 1; }
  // Throws PolicyModeMismatch when the trace's declared modes are unsupported.
  virtual void check_trace(const Trace& trace) const;
  virtual SlotDecision select(const SystemState& state, int k) const = 0;
};

// Known names: ra, sfa, greedy, ra-e, ra-size, immediate-unit, theta0,
// thetaT, batch-unit. Throws std::invalid_argument for anything else.
std::unique_ptr<Policy> make_policy(std::string_view name);
std::vector<std::string> policy_names();

}  // namespace msj
