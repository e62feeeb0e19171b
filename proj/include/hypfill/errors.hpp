#ifndef HYPFILL_ERRORS_HPP
#define HYPFILL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hypfill {

// Bad or inconsistent input: malformed files, metric violations beyond
// tolerance, parameter constraints (tau, window bounds).  CLI exit code 2.
struct InputError : std::runtime_error {
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical oracle missed its pinned tolerance.  CLI exit code 3.
struct OracleError : std::runtime_error {
    explicit OracleError(const std::string& what) : std::runtime_error(what) {}
};

// An invariant that should hold unconditionally failed at runtime; indicates
// a construction bug, not bad input.  CLI exit code 4.
struct CheckError : std::runtime_error {
    explicit CheckError(const std::string& what) : std::runtime_error(what) {}
};

inline void check(bool cond, const std::string& what) {
    if (!cond) throw CheckError(what);
}

}  // namespace hypfill

#endif
