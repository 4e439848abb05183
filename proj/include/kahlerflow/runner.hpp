#pragma once

#include <iosfwd>
#include <string>

#include "kahlerflow/config.hpp"

namespace kahlerflow {

enum class OutputFormat { Json, Csv };
OutputFormat parse_format(const std::string& name);

// worker cap: hardware concurrency bounded by KAHLERFLOW_THREADS
int max_threads();

// Runs one subcommand against a loaded configuration and renders the full
// report (built in memory first, so failed runs emit nothing). Returns the
// report text.
std::string run_command(const std::string& command, const RunConfig& cfg, OutputFormat format,
                        std::ostream& diag);

// CLI entry: loads the config, runs, writes the report to `out`.
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.
int run_cli(const std::string& command, const std::string& config_path,
            const std::string& out_path, const std::string& format, std::ostream& out,
            std::ostream& diag);

}  // namespace kahlerflow
