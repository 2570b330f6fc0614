#pragma once

#include <string>

#include "sklab/cadlag.hpp"
#include "sklab/pointproc.hpp"

namespace sklab {

// Serialization schemas used by the CLI and the test corpus:
//   path:    {"dim": d, "t": [...], "v": [[...], ...], "v0": [...]}
//   measure: {"atoms": [[t, x], ...]}
// Keys are emitted in sorted order so artifacts diff cleanly.

std::string path_to_json(const CadlagPath& path);
CadlagPath path_from_json(const std::string& text);

std::string measure_to_json(const TimeSpacePointMeasure& measure);
TimeSpacePointMeasure measure_from_json(const std::string& text);

}  // namespace sklab
