#pragma once

#include <stdexcept>
#include <string>

namespace optodistill {

// Base class for all failures raised by the library.  CLI maps ConfigError to
// exit code 2 and every other Error to exit code 3.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid or inconsistent user-facing configuration (bad key, empty grid, ...).
struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Numerical failure while executing an experiment.
struct ComputeError : Error {
    explicit ComputeError(const std::string& msg) : Error(msg) {}
};

// A matrix handed to the Hermitian eigensolver is not Hermitian.
struct NotHermitian : Error {
    explicit NotHermitian(const std::string& msg) : Error(msg) {}
};

// The Fock-space cutoff cannot represent the requested squeezing within the
// configured tail tolerance.
struct TruncationError : Error {
    explicit TruncationError(const std::string& msg) : Error(msg) {}
};

// A conditional state was requested at an outcome whose raw weight underflows.
struct DegenerateOutcome : Error {
    explicit DegenerateOutcome(const std::string& msg) : Error(msg) {}
};

// Adaptive quadrature exhausted its subdivision budget before reaching the
// requested tolerance.
struct QuadratureNotConverged : Error {
    explicit QuadratureNotConverged(const std::string& msg) : Error(msg) {}
};

// A power series (coherent-state expansion) cannot reach its tail bound at the
// available cutoff.
struct SeriesNotConverged : Error {
    explicit SeriesNotConverged(const std::string& msg) : Error(msg) {}
};

// Sign-boundary refinement ran out of bisection budget on the outcome grid.
struct GridTooCoarse : Error {
    explicit GridTooCoarse(const std::string& msg) : Error(msg) {}
};

// A distillation ratio was requested against a zero-entanglement reference.
struct ZeroBaseline : Error {
    explicit ZeroBaseline(const std::string& msg) : Error(msg) {}
};

// An index is outside the range permitted by its operation.
struct IndexError : Error {
    explicit IndexError(const std::string& msg) : Error(msg) {}
};

// A plot or table referenced a column that does not exist.
struct SpecError : Error {
    explicit SpecError(const std::string& msg) : Error(msg) {}
};

// Filesystem failure (unwritable output directory, ...).
struct IoError : Error {
    explicit IoError(const std::string& msg) : Error(msg) {}
};

// Maps the in-flight exception to the per-cell status code used by sweep and
// map tables: 0 ok, 1 invalid parameters, 2 truncation, 3 degenerate outcome,
// 4 grid too coarse, 6 zero baseline, 5 any other failure.  Call only from a
// catch block.
inline int current_exception_status() {
    try {
        throw;
    } catch (const ConfigError&) {
        return 1;
    } catch (const TruncationError&) {
        return 2;
    } catch (const DegenerateOutcome&) {
        return 3;
    } catch (const GridTooCoarse&) {
        return 4;
    } catch (const ZeroBaseline&) {
        return 6;
    } catch (...) {
        return 5;
    }
}

}  // namespace optodistill
