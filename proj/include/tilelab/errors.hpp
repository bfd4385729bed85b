#pragma once

#include <stdexcept>
#include <string>

namespace tilelab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad arguments: out-of-range residues, mismatched contexts, malformed input.
class InvalidInput : public Error {
public:
    using Error::Error;
};

class NotATiling : public Error {
public:
    using Error::Error;
};

class PreconditionFailed : public Error {
public:
    using Error::Error;
};

class CollapseError : public Error {
public:
    using Error::Error;
};

class NotFibered : public Error {
public:
    using Error::Error;
};

class PipelineStuck : public Error {
public:
    using Error::Error;
};

// Everything below signals a broken invariant, i.e. a bug.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

class NeitherParity : public InvariantViolation {
public:
    using InvariantViolation::InvariantViolation;
};

class LemmaViolation : public InvariantViolation {
public:
    using InvariantViolation::InvariantViolation;
};

class EquivalenceViolation : public InvariantViolation {
public:
    using InvariantViolation::InvariantViolation;
};

class ImplicationViolation : public InvariantViolation {
public:
    using InvariantViolation::InvariantViolation;
};

} // namespace tilelab
