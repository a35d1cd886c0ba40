#pragma once

#include <stdexcept>
#include <string>

namespace msj {

// A slot decision asked for more server capacity than one bank has.
struct CapacityExceeded : std::runtime_error {
  explicit CapacityExceeded(const std::string& what) : std::runtime_error(what) {}
};

// A slot decision referenced a job id that is not currently in the system.
struct UnknownJob : std::runtime_error {
  explicit UnknownJob(const std::string& what) : std::runtime_error(what) {}
};

// The exact solver refused an instance above its size guideline / node budget.
struct TooLarge : std::runtime_error {
  explicit TooLarge(const std::string& what) : std::runtime_error(what) {}
};

// A policy was asked to run on a trace whose mode it does not support
// (e.g. a power-of-two-only policy on a general-needs trace), or with the
// wrong number of server banks.
struct PolicyModeMismatch : std::runtime_error {
  explicit PolicyModeMismatch(const std::string& what) : std::runtime_error(what) {}
};

// A scripted offline schedule was requested for a trace that does not have
// the shape its construction assumes.
struct ScenarioMismatch : std::runtime_error {
  explicit ScenarioMismatch(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace msj
