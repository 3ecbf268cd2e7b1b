#pragma once

#include <stdexcept>
#include <string>

namespace zipfstrat {

/// Bad user input: malformed CSV, invalid configuration, misaligned data.
/// The CLI maps this to exit code 2.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A rank table that cannot support a power-law fit (fewer than two ranks).
class DegenerateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A file or directory could not be written.
class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace zipfstrat
