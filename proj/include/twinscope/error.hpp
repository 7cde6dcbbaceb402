#pragma once

#include <stdexcept>
#include <string>

namespace twinscope {

// Bad invocation: unknown treatment name, invalid option value. CLI exit code 1.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad or inconsistent data. CLI exit code 2.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public DataError {
public:
    using DataError::DataError;
};

// Too many malformed lines, or a cache file from another schema version.
class FormatError : public DataError {
public:
    using DataError::DataError;
};

class ConfigError : public DataError {
public:
    using DataError::DataError;
};

}  // namespace twinscope
