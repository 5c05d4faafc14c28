#pragma once

#include <string>

#include "hslab/errors.hpp"
#include "hslab/hpop.hpp"

namespace hslab {

// Malformed or semantically invalid operator description; the message
// names the offending key path ("$.coeffs.2" style) where one exists.
struct ConfigError : Error {
    using Error::Error;
};

// Builds an operator from a JSON document of exactly one of the shapes
//   {"coeffs":    {"<order>": [c0, c1, ...], ...}}
//   {"classical": {"alphas": [...], "gammas": [...]}}
//   {"sandwich":  {"p_roots": [...], "p_leading": x, "m": int, "n": int}}
//   {"pencil":    {"a": [[...]], "b": [[...]], "c": [[...]]}}
// Construction errors from the operator factories are rethrown as
// ConfigError with the responsible key path prepended.
DifferentialOperator operator_from_json_text(const std::string& text);

// Reads and parses a config file; unreadable or unparsable files also
// raise ConfigError.
DifferentialOperator load_operator_file(const std::string& path);

}  // namespace hslab
