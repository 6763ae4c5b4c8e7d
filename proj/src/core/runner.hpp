#pragma once

#include "core/config.hpp"

#include <string>

namespace grushin {

struct RunResult {
  int exit_code = 0;      // 0: all enabled verdicts pass; 1: some verdict failed
  std::string json;       // serialized report (always produced)
  std::string csv;        // profile table; empty when neither profile nor mvf ran
  std::string json_path;  // files actually written ("" = not written)
  std::string csv_path;
};

// Executes the selected suites in dependency order (identities first, solve
// before mvf when the field is solver-produced) and assembles the report.
// Relative output paths are resolved under out_dir when it is non-empty; an
// empty configured path disables that file. GRUSHIN_WORKERS in the
// environment overrides the configured quadrature worker count.
// Throws argument_error for configuration problems and io_error for
// unwritable outputs; callers map those to exit code 2.
RunResult run_config(const RunConfig& cfg, const std::string& out_dir = "");

}  // namespace grushin
