#include "msj/trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace msj {

namespace {

const char* mode_tag(TraceMode m) { return m == TraceMode::PowerOfTwo ? "p2" : "gen"; }
const char* size_tag(SizeMode m) { return m == SizeMode::Unit ? "unit" : "weighted"; }

[[noreturn]] void bad_format(const std::string& what) {
  throw std::runtime_error("trace parse error: " + what);
}

}  // namespace

std::string format_trace(const Trace& trace) {
  std::ostringstream out;
  out << "# K=" << trace.k << " mode=" << mode_tag(trace.mode)
      << " size=" << size_tag(trace.size_mode) << "\n";
  for (const Job& j : trace.jobs)
    out << j.arrival << "," << j.size << "," << j.need << "\n";
  return out.str();
}

Trace parse_trace(std::istream& in) {
  Trace trace;
  std::string line;
  if (!std::getline(in, line)) bad_format("empty input");

  int k = 0;
  char mode[16] = {0};
  char size[16] = {0};
  if (std::sscanf(line.c_str(), "# K=%d mode=%15s size=%15s", &k, mode, size) != 3)
    bad_format("bad header: " + line);
  trace.k = k;
  if (std::string(mode) == "p2") trace.mode = TraceMode::PowerOfTwo;
  else if (std::string(mode) == "gen") trace.mode = TraceMode::General;
  else bad_format("unknown mode tag: " + std::string(mode));
  if (std::string(size) == "unit") trace.size_mode = SizeMode::Unit;
  else if (std::string(size) == "weighted") trace.size_mode = SizeMode::Weighted;
  else bad_format("unknown size tag: " + std::string(size));

  int id = 0;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      if (in.peek() == EOF) break;
      bad_format("blank line " + std::to_string(line_no));
    }
    Job j;
    if (std::sscanf(line.c_str(), "%d,%d,%d", &j.arrival, &j.size, &j.need) != 3)
      bad_format("bad record at line " + std::to_string(line_no) + ": " + line);
    j.id = id++;
    trace.jobs.push_back(j);
  }
  return trace;
}

void write_trace_file(const Trace& trace, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << format_trace(trace);
}

Trace read_trace_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return parse_trace(in);
}

}  // namespace msj
