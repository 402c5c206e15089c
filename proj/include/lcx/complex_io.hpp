#pragma once

#include <iosfwd>

#include <json.hpp>

#include "lcx/complex.hpp"

namespace lcx {

using ojson = nlohmann::ordered_json;

/// {"v":version,"s":[ids],"a":agent,"o":observation_index}
ojson record_to_json(const InsertionRecord& r);
InsertionRecord record_from_json(const nlohmann::ordered_json& j);

/// One record per line; cells are never written.
void write_log(std::ostream& out, const LandmarkComplex& complex);
LandmarkComplex read_log(std::istream& in, int max_dim = 2);

}  // namespace lcx
