#pragma once

#include "json.hpp"

namespace moo {

// Insertion-ordered so serialized field order is fixed.
using Json = nlohmann::ordered_json;

}  // namespace moo
