#pragma once

#include <stdexcept>
#include <string>

namespace cosep {

// Base of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Shape mismatch, out-of-range index, or a rank/size outside the allowed range.
class DimensionError : public Error {
public:
    using Error::Error;
};

// Input violates a documented precondition (negative entry, zero column, ...).
class InvalidInputError : public Error {
public:
    using Error::Error;
};

class InvalidWeightError : public Error {
public:
    using Error::Error;
};

class UnsupportedSizeError : public Error {
public:
    using Error::Error;
};

class BalanceError : public Error {
public:
    using Error::Error;
};

class DegenerateCoreError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace cosep
