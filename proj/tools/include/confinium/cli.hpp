/** \file cli.hpp
 *  \brief Command-line front end: solve single systems, reproduce catalogue
 *         tables, run parameter sweeps, and emit text/JSON/CSV reports.
 *
 *  The front end is a single entry point, run(), taking the argument list
 *  (program name excluded) plus the two output streams, so the test-suite
 *  can drive it in-process.  Commands:
 *
 *      solve    --system KIND [param flags] --state LABEL
 *               solve one bound state, print its energy and the full
 *               fluctuation report, and check the stationary-state
 *               identities on it.
 *      table    --id I..VII|all
 *               recompute one (or every) reference-catalogue table and
 *               compare cell by cell at the pinned tolerances.
 *      sweep    --system KIND --state LABEL --param KEY --values V1,V2,...
 *               solve the same state across a parameter sweep.
 *      selftest run the quick analytic invariant suite (free-limit anchors,
 *               identity checks, matrix-vs-shooting agreement).
 *
 *  Option values come from command-line flags, an optional key=value config
 *  file (--config; `#` starts a comment), and the CONFINIUM_GRID_N
 *  environment variable, in that order of precedence (flags win).
 *
 *  Exit codes: 0 = success / all comparisons passed; 1 = at least one
 *  comparison or identity check failed (or a numeric failure occurred);
 *  2 = usage error (malformed flags, out-of-domain parameters).
 */
#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace confinium::cli {

/// Options of one invocation after flags, config file, and environment have
/// been merged.  Produced by the flag parser; consumed by the command
/// implementations.  Zero values mean "library default".
struct RunConfig {
    std::string command;          ///< "solve", "table", "sweep" or "selftest"
    std::string system;           ///< system kind name (solve/sweep)
    std::string state = "1s";     ///< state label: "1s", "2p", "n=0", ...
    std::string table_id;         ///< catalogue table id or "all" (table)
    std::string param;            ///< swept parameter key (sweep)
    std::vector<double> values;   ///< swept parameter values (sweep)
    int ell = -1;                 ///< angular momentum; -1 = take it from the label
    int grid_n = 0;               ///< per-element polynomial degree; 0 = default
    double rmax = 0.0;            ///< initial truncation radius; 0 = default
    int digits = 10;              ///< significant digits in text output
    std::string output = "text";  ///< "text", "json" or "csv"
    std::string out_path;         ///< write the report here; empty = stdout

    /// System-parameter assignments in flag order (canonical keys:
    /// "omega", "x_c", "r_c", "r_a", "r_b", "k", "V0", "U0", "w").
    std::vector<std::pair<std::string, double>> fields;
};

/// Parse `args`, execute the requested command, write the report to `out`
/// and diagnostics to `err`; returns the process exit code (see file
/// comment).  Never throws: all library errors are mapped to exit codes
/// (numeric failures are reported as a JSON error object when the selected
/// output format is "json").
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace confinium::cli
