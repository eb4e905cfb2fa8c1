#pragma once

#include <stdexcept>
#include <string>

namespace snoc {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid or inconsistent configuration values (bad parameter files,
// violated type invariants, non-integer derived quantities).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

// A design point that cannot be realized (e.g. the laser power needed to
// close the link budget exceeds the per-waveguide ceiling).
class InfeasibleDesignError : public Error {
public:
    explicit InfeasibleDesignError(const std::string& what) : Error(what) {}
};

// Malformed input files (traces, traffic matrices); carries a line number.
class ParseError : public Error {
public:
    ParseError(const std::string& what, long long line)
        : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    long long line() const { return line_; }

private:
    long long line_;
};

// Simulation-level failures (bad trace references, non-draining runs).
class SimError : public Error {
public:
    explicit SimError(const std::string& what) : Error(what) {}
};

} // namespace snoc
