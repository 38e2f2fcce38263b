#pragma once

#include <stdexcept>
#include <string>

namespace swb {

// Base for every error the library raises on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input files (dataset lines, lexicon entries, configs).
class ParseError : public Error {
public:
    ParseError(const std::string& what, long line = -1)
        : Error(line >= 0 ? what + " (line " + std::to_string(line) + ")" : what),
          line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

// Structurally valid input that violates a declared invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Numerical preconditions (rank deficiency, bad domains, infeasible configs).
class NumericError : public Error {
public:
    using Error::Error;
};

// Bad command-line usage; the CLI maps this to its own exit code.
class UsageError : public Error {
public:
    using Error::Error;
};

}  // namespace swb
