#pragma once

#include <stdexcept>
#include <string>

namespace qtails {

// Base for every error raised by the library. Callers that only need to
// distinguish "the library refused" from other failures catch this.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Operands built under different parameter specs.
class SpecMismatchError : public Error {
public:
    using Error::Error;
};

// Unknown parameter name, duplicate names, bad caps.
class SpecError : public Error {
public:
    using Error::Error;
};

// A Laurent window would extend below the context's lo_floor.
class LaurentFloorError : public Error {
public:
    using Error::Error;
};

class NotInvertibleError : public Error {
public:
    using Error::Error;
};

// A comparison or coefficient request outside the guaranteed-exact range.
class WindowError : public Error {
public:
    using Error::Error;
};

// Substitution left no guaranteed-exact coefficient at all.
class EmptyWindowError : public WindowError {
public:
    using WindowError::WindowError;
};

// Parameter caps too small for an exact construction.
class CapError : public Error {
public:
    using Error::Error;
};

class DivergentProductError : public Error {
public:
    using Error::Error;
};

// tail_sum found a nonvanishing term past its declared cutoff.
class NonStabilizedTailError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class UnknownIdentityError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace qtails
