#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sinr {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text. Carries the source name and 1-based line number.
class ParseError : public Error {
public:
    ParseError(std::string source, std::size_t line, const std::string &message);

    const std::string &source() const noexcept { return source_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string source_;
    std::size_t line_;
};

/// A value violates a documented precondition or data invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

} // namespace sinr
