#pragma once

#include <string>

#include "renewal/distribution.hpp"

namespace renewal {

// Model files are JSON objects {"kind": string, "params": object, "lattice": bool}.
// The optional "lattice" field is validated against the family. See the README
// for the per-kind parameter schemas.
Distribution parse_model_json(const std::string& text);
Distribution load_model_file(const std::string& path);

} // namespace renewal
