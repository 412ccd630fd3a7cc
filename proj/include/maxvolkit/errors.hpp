#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace maxvolkit {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Incompatible or unsupported matrix shapes.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A factorization step found no usable pivot (matrix not of full column rank).
class RankDeficientError : public Error {
public:
    using Error::Error;
};

/// Exhaustive search would exceed the subset-enumeration guard.
class CombinatorialLimitError : public Error {
public:
    using Error::Error;
};

/// Row-count bounds passed to a selection routine are inconsistent.
class InvalidBoundsError : public Error {
public:
    using Error::Error;
};

/// I/O failure (file missing, unreadable, unwritable).
class IoError : public Error {
public:
    using Error::Error;
};

/// Malformed input file; carries the 1-based line number when known.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& message, std::size_t line = 0)
        : Error(line == 0 ? message : message + " (line " + std::to_string(line) + ")"),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A ratings file parsed cleanly but contained no usable triples.
class EmptyDatasetError : public Error {
public:
    using Error::Error;
};

}  // namespace maxvolkit
