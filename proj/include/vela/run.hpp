#pragma once

// Drivers behind the command-line subcommands.

#include <iosfwd>
#include <string>

#include "vela/config.hpp"
#include "vela/diagnostics.hpp"

namespace vela {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitAbort = 3;

/// Column names of the time-series CSV, in order, without the trailing
/// status column.
const std::vector<std::string>& csv_columns();
/// Header line (columns plus "status").
std::string csv_header();
/// One CSV line; every number printed with 17 significant digits.
std::string csv_row(const DiagnosticsReport& r, const std::string& status);

State initial_state(const RunConfig& cfg);

/// Time loop with a CSV row every output_every steps (and at t = 0 and at the
/// end). On NumericalAbort a final row carrying the reason is written and
/// kExitAbort is returned. The final state is checkpointed when
/// cfg.checkpoint_out is set. cfg.csv = "-" writes the series to `out`.
int run_simulation(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// One line per identity for the initial state of `cfg` (or its checkpoint):
/// name, residual, tolerance and PASS/FAIL or INFO. Returns kExitCheckFailed
/// iff a hard check fails.
int check_identities(const RunConfig& cfg, std::ostream& out);

/// Header fields and field ranges of a checkpoint file.
int inspect_checkpoint(const std::string& path, std::ostream& out);

/// Convergence study on the standard manufactured spec. Writes one CSV line
/// per run and the fitted orders.
int run_mms(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace vela
