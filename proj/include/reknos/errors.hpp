#pragma once

#include <stdexcept>
#include <string>

namespace reknos {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input data (triple files, mapping files, datasets).
class LoadError : public Error {
public:
    using Error::Error;
};

// Invalid or inconsistent configuration, detected before any work runs.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Scorer response contained nothing usable.
class ParseFailure : public Error {
public:
    using Error::Error;
};

// HTTP-level failure talking to a remote oracle, after retries.
class TransportError : public Error {
public:
    TransportError(const std::string& msg, int status = 0) : Error(msg), status_(status) {}
    int status() const { return status_; }

private:
    int status_ = 0;
};

}  // namespace reknos
