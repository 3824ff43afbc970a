#pragma once

#include <stdexcept>
#include <string>

namespace qsum {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Adaptive quadrature ran out of window before the tail stabilized.
// Signals an evaluation point outside the transform's domain, or an
// integrand growing faster than the kernel can absorb.
struct WindowExhausted : Error {
    explicit WindowExhausted(const std::string& what, int stage_index = -1)
        : Error(what), stage(stage_index) {}
    int stage;  // multisum stage that failed, -1 if not applicable
};

struct NonFinite : Error {
    using Error::Error;
};

struct SingularDirection : Error {
    using Error::Error;
};

struct PoleHit : Error {
    using Error::Error;
};

struct NonConvergent : Error {
    using Error::Error;
};

struct DivisionNearZero : Error {
    using Error::Error;
};

struct NotIncreasing : Error {
    using Error::Error;
};

struct DegenerateOperator : Error {
    using Error::Error;
};

struct ZeroParameter : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

}  // namespace qsum
