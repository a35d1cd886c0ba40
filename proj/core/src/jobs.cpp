#include "msj/jobs.hpp"

#include <set>
#include <string>

namespace msj {

std::vector<Violation> validate_trace(const Trace& trace) {
  std::vector<Violation> out;
  if (trace.k < 1) out.push_back({-1, "K must be >= 1"});

  std::set<int> seen;
  int prev_id = -1;
  for (const Job& j : trace.jobs) {
    if (!seen.insert(j.id).second) out.push_back({j.id, "duplicate id"});
    if (j.id <= prev_id) out.push_back({j.id, "ids not increasing in trace order"});
    prev_id = j.id;

    if (j.arrival < 1) out.push_back({j.id, "arrival before slot 1"});
    if (j.size < 1) out.push_back({j.id, "size must be >= 1"});
    if (j.need < 1) out.push_back({j.id, "need must be >= 1"});
    if (j.need > trace.k) out.push_back({j.id, "need exceeds K"});
    if (trace.mode == TraceMode::PowerOfTwo && !is_pow2(j.need))
      out.push_back({j.id, "need not a power of two"});
    if (trace.size_mode == SizeMode::Unit && j.size != 1)
      out.push_back({j.id, "size not unit"});
  }
  return out;
}

}  // namespace msj
