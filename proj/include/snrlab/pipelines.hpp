#pragma once

// Subcommand pipelines behind the CLI. Each takes a JSON config and returns
// the report {manifest, results, pass} plus the files to write. Nothing here
// touches the filesystem except reading inputs named in the config.

#include <string>
#include <string_view>
#include <vector>

#include "snrlab/io.hpp"

namespace snrlab {

struct Artifact {
  std::string path;
  std::string content;
};

struct RunResult {
  io::Json report;
  std::vector<Artifact> artifacts;  // written before the report
  std::string report_path;          // empty when the report only goes to stdout
  int exit_code = 0;                // 0 ok, 2 an acceptance check failed
  std::string summary;              // short human-readable result
};

// Subcommands: estimate, oracle, compare, table, witness, hunt. Bad configs
// throw SpecError (the CLI maps that to exit code 1).
RunResult run_pipeline(std::string_view subcommand, const io::Json& config);

// "1..35", "1,4,7..9".
std::vector<int> parse_row_list(std::string_view text);
// "1,2,inf".
std::vector<Exponent> parse_exponent_list(std::string_view text);
// "16x8" -> {16, 8}.
std::pair<std::size_t, std::size_t> parse_grid(std::string_view text);

std::string library_version();

}  // namespace snrlab
