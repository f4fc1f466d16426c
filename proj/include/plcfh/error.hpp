#pragma once

#include <stdexcept>
#include <string>

namespace plcfh {

// Base of all errors raised by the library. Each subclass maps to one
// failure category reported by the command-line tool.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class GeometryError : public Error {
public:
    using Error::Error;
};

class FitError : public Error {
public:
    using Error::Error;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// A consistency check on generated structures failed.
class InvariantError : public Error {
public:
    using Error::Error;
};

} // namespace plcfh
