/** \file errors.hpp
 *  \brief Exception hierarchy used throughout the library.
 *
 *  All failures are reported as typed exceptions deriving from Error so that
 *  callers (and the CLI) can distinguish usage mistakes (ParameterError, exit
 *  code 2) from numerical failures (everything else, exit code 1) and attach
 *  diagnostics where partial results exist.
 */
#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace confinium {

/// Base class for every exception thrown by the library.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid input: bad parameters, malformed labels, contract violations.
class ParameterError : public Error {
  public:
    explicit ParameterError(const std::string& what) : Error(what) {}
};

/// A series failed to converge. Carries the partial sum and the number of
/// terms accumulated so the caller can inspect how far the evaluation got.
class SeriesError : public Error {
  public:
    SeriesError(const std::string& what, double partial_sum, long terms)
        : Error(what), partial_sum(partial_sum), terms(terms) {}
    double partial_sum;
    long terms;
};

/// Root bracketing failed: no sign change over the supplied interval.
class BracketError : public Error {
  public:
    BracketError(const std::string& what, double lo, double hi, double f_lo, double f_hi)
        : Error(what), lo(lo), hi(hi), f_lo(f_lo), f_hi(f_hi) {}
    double lo, hi, f_lo, f_hi;
};

/// An iteration exhausted its round budget. `trace` records the per-round
/// scalar being driven to convergence (e.g. (r_max, energy) pairs).
class ConvergenceError : public Error {
  public:
    ConvergenceError(const std::string& what, std::vector<std::pair<double, double>> trace)
        : Error(what), trace(std::move(trace)) {}
    std::vector<std::pair<double, double>> trace;
};

/// Fewer states satisfied the request than asked for. `found` holds how many
/// were valid; the caller's container of completed states accompanies the
/// throw site where applicable.
class PartialResultError : public Error {
  public:
    PartialResultError(const std::string& what, int found, int requested)
        : Error(what), found(found), requested(requested) {}
    int found, requested;
};

}  // namespace confinium
