#pragma once

#include <string>

#include "mfg/grid.hpp"
#include "mfg/model.hpp"
#include "mfg/solver.hpp"

namespace mfg {

// Raised on malformed configs; the message names the offending field.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  ProblemSpec problem;
  GridSpec grid;
  NewtonSettings newton;
  ContinuationSettings continuation;
  double diagnostics_tol = 1e-3;
  std::string output_dir = "out";
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

}  // namespace mfg
