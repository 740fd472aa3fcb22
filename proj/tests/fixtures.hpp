#pragma once

#include <string>

#include "planar/parser.hpp"

#ifndef PLANAR_FIXTURE_DIR
#error "PLANAR_FIXTURE_DIR must point at the fixture maps"
#endif

inline std::string fixture_path(const std::string& name) { return std::string(PLANAR_FIXTURE_DIR) + "/" + name + ".map"; }
inline planar::MapSpec fixture(const std::string& name) { return planar::load_map_file(fixture_path(name)); }
