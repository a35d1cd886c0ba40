#pragma once

#include <iosfwd>
#include <string>

#include "msj/jobs.hpp"

namespace msj {

// Plain-text trace format, one job per line after a single header line:
//
//   # K=<int> mode=<p2|gen> size=<unit|weighted>
//   <arrival>,<size>,<need>
//   ...
//
// Jobs are listed in id order and ids are assigned by line order on read,
// so write/read round-trips are bit-exact.
std::string format_trace(const Trace& trace);
Trace parse_trace(std::istream& in);

void write_trace_file(const Trace& trace, const std::string& path);
Trace read_trace_file(const std::string& path);

}  // namespace msj
