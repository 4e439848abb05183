#pragma once

#include <stdexcept>
#include <string>

namespace kahlerflow {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : Error {
    ParseError(int line, int col, const std::string& what)
        : Error("parse error at " + std::to_string(line) + ":" + std::to_string(col) + ": " + what),
          line(line), col(col) {}
    int line;
    int col;
};

struct EvalError : Error {
    using Error::Error;
};

// Newton iteration failed to converge; carries the last residual seen.
struct NewtonError : Error {
    NewtonError(const std::string& what, double residual)
        : Error(what + " (last residual " + std::to_string(residual) + ")"), residual(residual) {}
    double residual;
};

// Leaf of the time-evolved foliation does not meet the real locus transversally.
struct LeafProjectionError : Error {
    using Error::Error;
};

struct IntegratorError : Error {
    IntegratorError(const std::string& what, double reached)
        : Error(what + " (reached t=" + std::to_string(reached) + ")"), reached_time(reached) {}
    double reached_time;
};

struct ConfigError : Error {
    using Error::Error;
};

}  // namespace kahlerflow
