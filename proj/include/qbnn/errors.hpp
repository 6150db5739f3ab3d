#pragma once

#include <stdexcept>
#include <string>

namespace qbnn {

/// Malformed input file or flag value; carries a human-readable diagnostic
/// (with file:line where applicable). The CLI maps this to its own exit code,
/// distinct from numerical failures.
struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qbnn
