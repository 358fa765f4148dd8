#pragma once

#include <stdexcept>
#include <string>

namespace resaug {

// Error hierarchy mirrors the pipeline stages; the CLI maps each branch
// to a distinct exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IngestError : public Error {
public:
    using Error::Error;
};

class LearnerError : public Error {
public:
    using Error::Error;
};

class AugmentError : public Error {
public:
    using Error::Error;
};

class EvalError : public Error {
public:
    using Error::Error;
};

}  // namespace resaug
