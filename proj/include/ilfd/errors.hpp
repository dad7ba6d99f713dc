#pragma once

#include <stdexcept>
#include <string>

namespace ilfd {

// Base class for every failure the library reports. kind() is a stable
// identifier used by the CLI in its machine-readable error line.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define ILFD_DEFINE_ERROR(Name)                                        \
    class Name : public Error {                                        \
    public:                                                            \
        explicit Name(const std::string& what) : Error(#Name, what) {} \
    }

ILFD_DEFINE_ERROR(InvalidParams);
ILFD_DEFINE_ERROR(ParseError);
ILFD_DEFINE_ERROR(NoConvergence);
ILFD_DEFINE_ERROR(StepUnderflow);
ILFD_DEFINE_ERROR(DegenerateWeight);
ILFD_DEFINE_ERROR(SingularitySpacing);
ILFD_DEFINE_ERROR(CrossCheckFailure);
ILFD_DEFINE_ERROR(DegenerateExtremum);
ILFD_DEFINE_ERROR(CompatibilityViolated);
ILFD_DEFINE_ERROR(NoBracket);
ILFD_DEFINE_ERROR(TooFewPoints);
ILFD_DEFINE_ERROR(NewtonDiverged);

#undef ILFD_DEFINE_ERROR

}  // namespace ilfd
