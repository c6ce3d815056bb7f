#pragma once

// Subcommand dispatch behind the command-line tool. Kept in the library so
// tests can invoke subcommands in-process and byte-compare their outputs.

#include <iosfwd>
#include <string>
#include <vector>

#include "mshom/config.hpp"

namespace mshom {

inline constexpr const char* kVersion = "0.1.0";

// names: cell, fine, averaged, converge, mixing, khasminskii, corrector,
// validate. Writes the report CSVs plus summary.txt under cfg.output_dir;
// removes partial outputs and rethrows on error.
void run_subcommand(const std::string& name, const RunConfig& cfg, std::ostream& out);

// exit codes: 0 ok, 1 config error, 2 numerical failure
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mshom
