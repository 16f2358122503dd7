#ifndef EQUISHOOT_ERRORS_HPP
#define EQUISHOOT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace equishoot {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Rejected model primitives. `code` names the violated inequality.
class ValidationError : public Error {
public:
    enum class Code {
        GammaOutOfRange,
        NonpositiveSigma,
        NonpositiveD0,
        NonpositiveTheta,
        DeltaOutOfRange,
        ACapTooSmall,
        ThetaOutOfRange,
    };

    ValidationError(Code c, const std::string& msg) : Error(msg), code(c) {}
    Code code;

    static const char* name(Code c) {
        switch (c) {
            case Code::GammaOutOfRange:  return "GammaOutOfRange";
            case Code::NonpositiveSigma: return "NonpositiveSigma";
            case Code::NonpositiveD0:    return "NonpositiveD0";
            case Code::NonpositiveTheta: return "NonpositiveTheta";
            case Code::DeltaOutOfRange:  return "DeltaOutOfRange";
            case Code::ACapTooSmall:     return "ACapTooSmall";
            case Code::ThetaOutOfRange:  return "ThetaOutOfRange";
        }
        return "ValidationError";
    }
};

// Evaluation outside a function's domain, e.g. y outside (0,1).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// Numerical procedure failed (bracketing, tolerance, step control, tails).
class NumericalError : public Error {
public:
    enum class Kind {
        StepSizeUnderflow,
        BracketFailure,
        ToleranceFailure,
        InconclusiveTail,
        NotNormalizable,
        NonfiniteState,
    };

    NumericalError(Kind k, const std::string& msg) : Error(msg), kind(k) {}
    Kind kind;

    static const char* name(Kind k) {
        switch (k) {
            case Kind::StepSizeUnderflow: return "StepSizeUnderflow";
            case Kind::BracketFailure:    return "BracketFailure";
            case Kind::ToleranceFailure:  return "ToleranceFailure";
            case Kind::InconclusiveTail:  return "InconclusiveTail";
            case Kind::NotNormalizable:   return "NotNormalizable";
            case Kind::NonfiniteState:    return "NonfiniteState";
        }
        return "NumericalError";
    }
};

// CLI / config file problems.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

} // namespace equishoot

#endif
