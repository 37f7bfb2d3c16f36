#pragma once

#include <json.hpp>

#include "sps/bubbles.hpp"
#include "sps/constants.hpp"
#include "sps/solvers.hpp"
#include "sps/sweep.hpp"

namespace sps {

using Json = nlohmann::ordered_json;

/// Build and ISA information only; no clocks or host names, so that a fixed
/// spec and seed give identical documents.
Json environment_stamp();

Json to_json(const ProblemParams& p);
Json to_json(const SolverConfig& c);
Json to_json(const SharpConstants& k);
Json to_json(const LineFit& f);
/// Scalars only unless with_profile; the profile adds r and u arrays.
Json to_json(const BranchResult& r, bool with_profile = false);
Json to_json(const BranchSummary& s);
Json to_json(const SweepSpec& s);
Json to_json(const SweepReport& r);
Json to_json(const NonexistenceReport& r);
Json to_json(const BubbleEstimates& b);
Json to_json(const InteractionStudy& s);
Json to_json(const std::vector<RegimeRow>& rows);

/// {"config": ..., "results": ..., "environment": ...}
Json document(Json config, Json results);

}  // namespace sps
