#pragma once

#include <tuple>
#include <vector>

#include "msj/jobs.hpp"

namespace test_helpers {

// rows are (arrival, size, need); ids assigned in order
inline msj::Trace make_trace(int k, const std::vector<std::tuple<int, int, int>>& rows,
                             msj::TraceMode mode = msj::TraceMode::PowerOfTwo,
                             msj::SizeMode size_mode = msj::SizeMode::Unit) {
  msj::Trace t;
  t.k = k;
  t.mode = mode;
  t.size_mode = size_mode;
  int id = 0;
  for (const auto& [a, w, s] : rows) t.jobs.push_back({id++, a, w, s});
  return t;
}

// unit-size jobs all arriving at slot 1, given needs
inline msj::Trace slot1_units(int k, const std::vector<int>& needs,
                              msj::TraceMode mode = msj::TraceMode::PowerOfTwo) {
  std::vector<std::tuple<int, int, int>> rows;
  for (int s : needs) rows.emplace_back(1, 1, s);
  return make_trace(k, rows, mode);
}

}  // namespace test_helpers
