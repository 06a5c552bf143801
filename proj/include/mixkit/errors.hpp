#ifndef MIXKIT_ERRORS_HPP
#define MIXKIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mixkit {

// Error taxonomy mirrored by the CLI exit codes:
//   UsageError -> 1, ValidationError/DataError -> 2,
//   NumericalError/ResourceError -> 3.
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when the sufficient-statistic table would exceed its entry cap.
class ResourceError : public std::runtime_error {
public:
    ResourceError(const std::string& msg, std::size_t cap)
        : std::runtime_error(msg), entry_cap(cap) {}
    std::size_t entry_cap;
};

class UnsupportedFamilyError : public ValidationError {
public:
    explicit UnsupportedFamilyError(const std::string& msg) : ValidationError(msg) {}
};

}  // namespace mixkit

#endif
