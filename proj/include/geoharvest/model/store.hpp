#pragma once

#include <string>

#include "geoharvest/model/evaluate.hpp"

namespace geoharvest::model {

// Versioned binary blob with an embedded JSON header (spec, structure,
// metrics) and a raw little-endian double payload, so that a reloaded model
// predicts bit-identically.
void save_model(const FittedModel& m, const std::string& path);
FittedModel load_model(const std::string& path);  // throws ParseError / IoError

}  // namespace geoharvest::model
