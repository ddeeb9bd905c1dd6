#pragma once

#include <stdexcept>
#include <string>

namespace krein {

// Base for every failure the library reports. Callers that sweep a grid
// distinguish the subclasses: exceptional and singular points are skipped,
// everything else is a hard failure.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain (real lambda passed to eval,
// Im T with a negative eigenvalue passed to upper_log, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Real lambda on a pole, box endpoint or branch point of a model.
class ExceptionalPointError : public Error {
public:
    using Error::Error;
};

class SingularError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class QuadratureError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace krein
