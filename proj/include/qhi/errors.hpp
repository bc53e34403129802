#pragma once

#include <stdexcept>
#include <string>

namespace qhi {

// Two families, matching the CLI exit codes: bad input (2) and numerical failure (3).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define QHI_DEFINE_ERROR(Name, Base)                                         \
    class Name : public Base {                                              \
    public:                                                                 \
        explicit Name(const std::string& what) : Base(#Name ": " + what) {} \
    };

QHI_DEFINE_ERROR(CutViolation, ValidationError)
QHI_DEFINE_ERROR(DegenerateInput, ValidationError)
QHI_DEFINE_ERROR(CurveViolation, ValidationError)
QHI_DEFINE_ERROR(StripViolation, ValidationError)
QHI_DEFINE_ERROR(WeightViolation, ValidationError)
QHI_DEFINE_ERROR(RelationViolation, ValidationError)
QHI_DEFINE_ERROR(ContourInvalid, ValidationError)
QHI_DEFINE_ERROR(NoAdmissibleRoot, ValidationError)

QHI_DEFINE_ERROR(PoleHit, NumericError)
QHI_DEFINE_ERROR(ZeroHit, NumericError)
QHI_DEFINE_ERROR(ShiftOverflow, NumericError)
QHI_DEFINE_ERROR(DivisionByZero, NumericError)
QHI_DEFINE_ERROR(PoleOnContour, NumericError)
QHI_DEFINE_ERROR(NonConvergent, NumericError)
QHI_DEFINE_ERROR(DegenerateSaddle, NumericError)
QHI_DEFINE_ERROR(IllConditioned, NumericError)

#undef QHI_DEFINE_ERROR

}  // namespace qhi
