#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "hardcore/experiments.hpp"
#include "hardcore/graph_lab.hpp"
#include "hardcore/model_core.hpp"
#include "hardcore/moment_engine.hpp"
#include "hardcore/tree_recon.hpp"

namespace hardcore {

using Json = nlohmann::json;

Json to_json(const HardcoreParams& p);
Json to_json(const MarkovKernel& k);
Json to_json(const DerivedConstants& c);
Json to_json(const ThresholdReport& r);
Json to_json(const MagnetizationStats& s);
Json to_json(const PosteriorAtoms& a);
Json to_json(const Depth3Report& r);
Json to_json(const Depth3Scan& s);
Json to_json(const ContractionReport& r);
Json to_json(const OverlapPoint& p);
Json to_json(const AlphaStar& a);
Json to_json(const MaxReport& r);
Json to_json(const PuncturedCensus& c);
Json to_json(const LwcReport& r);
Json to_json(const ReconScanReport& r);
Json to_json(const MomentAuditReport& r);
Json to_json(const OracleReport& r);
Json to_json(const PointToSetReport& r);

// Wraps a report with the tool version and the command that produced it.
Json envelope(const std::string& command, Json config, Json result);

// Flat CSV: the "rows" array of the result when present, otherwise one row of its scalar fields.
std::string to_csv(const Json& result);

}  // namespace hardcore
