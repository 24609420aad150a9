#pragma once

#include <stdexcept>
#include <string>

namespace pfront {

// Domain error with a stable machine-readable code. The CLI maps codes to
// exit statuses; tests match on code().
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

#define PFRONT_DEFINE_ERROR(NAME, CODE)                              \
    class NAME : public Error {                                      \
    public:                                                          \
        explicit NAME(const std::string& what) : Error(CODE, what) {} \
    }

PFRONT_DEFINE_ERROR(InvalidMedium, "invalid-medium");
PFRONT_DEFINE_ERROR(RejectedConfiguration, "rejected-configuration");
PFRONT_DEFINE_ERROR(NumericalBlowup, "numerical-blowup");
PFRONT_DEFINE_ERROR(InvalidShift, "invalid-shift");
PFRONT_DEFINE_ERROR(FrontLeftWindow, "front-left-window");
PFRONT_DEFINE_ERROR(SpeedUnresolved, "speed-unresolved");
PFRONT_DEFINE_ERROR(PossiblyNoFront, "possibly-no-front");
PFRONT_DEFINE_ERROR(CurveUnusable, "curve-unusable");
PFRONT_DEFINE_ERROR(NoPairs, "no-pairs");
PFRONT_DEFINE_ERROR(InvalidAngles, "invalid-angles");
PFRONT_DEFINE_ERROR(InvalidCurve, "invalid-curve");
PFRONT_DEFINE_ERROR(OutOfAtlas, "out-of-atlas");
PFRONT_DEFINE_ERROR(InvalidAuxiliaryAngle, "invalid-auxiliary-angle");
PFRONT_DEFINE_ERROR(OutsideValidity, "outside-validity");
PFRONT_DEFINE_ERROR(DiagnosticFailure, "diagnostic-failure");
PFRONT_DEFINE_ERROR(ConstructionFaulted, "construction-faulted");
PFRONT_DEFINE_ERROR(WindowTooSmall, "window-too-small");
PFRONT_DEFINE_ERROR(InvalidInitialData, "invalid-initial-data");
PFRONT_DEFINE_ERROR(InvalidTriple, "invalid-triple");
PFRONT_DEFINE_ERROR(RadiiExceedWindow, "radii-exceed-window");
PFRONT_DEFINE_ERROR(InvalidShiftParam, "invalid-shift-parameter");
PFRONT_DEFINE_ERROR(ConfigError, "config-error");
PFRONT_DEFINE_ERROR(IoError, "io-error");
PFRONT_DEFINE_ERROR(MissingArtifact, "missing-artifact");

#undef PFRONT_DEFINE_ERROR

}  // namespace pfront
