#pragma once

#include <string>

#include "growth/eventmodel.hpp"

namespace growth::modelfile {

inline constexpr const char* kFormat = "growth-model/1";

// Canonical serialization: covering relations for the order (joins are
// re-derived on load), mapping tables as flip entries keyed by type labels
// with identity entries omitted. Saving is deterministic, so files
// round-trip byte-identically through load/save.
std::string saveToString(const GrowthModel& m);
GrowthModel loadFromString(const std::string& text);

void save(const GrowthModel& m, const std::string& path);
GrowthModel load(const std::string& path);

}  // namespace growth::modelfile
