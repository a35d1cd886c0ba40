#pragma once

#include <string>
#include <vector>

namespace msj {

// One job: arrives at the start of slot `arrival`, needs `size` slots of
// service, and occupies `need` servers simultaneously in every slot it is
// processed. Service is preemptible at slot boundaries at no cost.
struct Job {
  int id = 0;       // unique, assigned in trace order
  int arrival = 1;  // slot index, 1-based
  int size = 1;     // w_j >= 1
  int need = 1;     // s_j in [1, K]

  bool operator==(const Job&) const = default;
};

enum class TraceMode { PowerOfTwo, General };
enum class SizeMode { Unit, Weighted };

// A problem instance: K servers per bank plus the job list. `mode` declares
// whether every need is a power of two; `size_mode` whether every size is 1.
// Policies check these before running.
struct Trace {
  int k = 1;
  TraceMode mode = TraceMode::PowerOfTwo;
  SizeMode size_mode = SizeMode::Unit;
  std::vector<Job> jobs;

  bool operator==(const Trace&) const = default;
};

// One validation failure. job_id is -1 for trace-level problems.
struct Violation {
  int job_id = -1;
  std::string rule;
};

constexpr bool is_pow2(int v) { return v > 0 && (v & (v - 1)) == 0; }

// Checks ids unique and in trace order, arrival/size/need ranges, needs
// against K and the declared mode, sizes against the declared size mode.
// Empty result means the trace is well formed.
std::vector<Violation> validate_trace(const Trace& trace);

}  // namespace msj
