#pragma once

#include <stdexcept>
#include <string>

namespace workbench {

// Base class for all library errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operand mismatch (base/arity disagreement) or malformed argument.
struct invalid_argument_error : error {
    using error::error;
};

// A construction exceeded its configured state cap. Never silently truncated.
struct resource_limit_error : error {
    using error::error;
};

// Text input could not be parsed; carries a 1-based position.
struct parse_error : error {
    parse_error(const std::string& msg, int line, int column)
        : error(msg), line(line), column(column) {}
    int line;
    int column;
};

// Expression is syntactically fine but ill-typed (base/arity mismatch).
struct type_error : error {
    using error::error;
};

struct io_error : error {
    using error::error;
};

// A decision procedure declined to answer rather than guess.
struct refusal_error : error {
    using error::error;
};

} // namespace workbench
