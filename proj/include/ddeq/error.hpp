#pragma once

#include <stdexcept>
#include <string>

namespace ddeq {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The stencil is outside the regime det R1 != 0, det R2 == 0. The other
/// regimes have a separate theory (Skubachevskii's monograph, Chapter I) and
/// are classified but never analysed here.
class UnsupportedRegime : public Error {
public:
    using Error::Error;
};

/// A rank identity that must hold in the supported regime failed. Signals a bug.
class InternalRankError : public Error {
public:
    using Error::Error;
};

class NoValidL : public Error {
public:
    using Error::Error;
};

class DomainMismatch : public Error {
public:
    using Error::Error;
};

class SingularShiftMatrix : public Error {
public:
    using Error::Error;
};

class ProbeTooSmall : public Error {
public:
    using Error::Error;
};

class DegreeCapExceeded : public Error {
public:
    using Error::Error;
};

class IndexOutOfRange : public Error {
public:
    using Error::Error;
};

class InvalidStencil : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

} // namespace ddeq
