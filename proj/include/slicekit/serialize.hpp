#pragma once

#include "slicekit/analysis.hpp"
#include "slicekit/io.hpp"
#include "slicekit/slice.hpp"

#include <json.hpp>

namespace slicekit {

using json = nlohmann::json;

json to_json(const LoadReport& report);
json to_json(const TopologySummary& summary);
/// One key per index set, indices ascending.
json to_json(const RiskReport& report);
json to_json(const SliceMetrics& metrics);
/// Plane, frame, loops (2-D points in the frame), open chains, metrics and counts.
json to_json(const SliceResult& result);

}  // namespace slicekit
