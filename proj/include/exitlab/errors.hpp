#pragma once

#include <stdexcept>
#include <string>

namespace exitlab {

enum class Err {
    BadSpec,
    PointOutsideDomain,
    DegenerateSegment,
    MaxStepsExceeded,
    NotNested,
    TooFewSamples,
    DivergentMoment,
    BranchPole,
    QuadratureStall,
    EmptyPlus,
    MaxAlternationsExceeded,
    NotInUpperHalfPlane,
    DiskNotContained,
    EvaluationFailure,
};

class Error : public std::runtime_error {
public:
    Error(Err code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Err code() const noexcept { return code_; }

private:
    Err code_;
};

const char* err_name(Err code);

} // namespace exitlab
