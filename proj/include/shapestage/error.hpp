#pragma once

#include <stdexcept>
#include <string>

namespace shapestage {

// Numeric values are shared with the C boundary (see shapestage.h).
enum class ErrorCode : int {
    invalid_argument = -2,
    degenerate_polygon = -3,
    no_such_shape = -4,
    drag_active = -5,
    no_active_drag = -6,
    malformed_document = -7,
    containment_violation = -8,
    no_polygon_in_progress = -9,
    io_failure = -10,
    out_of_bounds = -11,
    duplicate_vertex = -12,
    unknown_style = -13,
    malformed_image = -14,
    reentrant_mutation = -15,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace shapestage
