#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "json.hpp"

#include "dstlab/causal.hpp"
#include "dstlab/correlation.hpp"
#include "dstlab/indefinite.hpp"
#include "dstlab/lattice.hpp"
#include "dstlab/lightcone.hpp"
#include "dstlab/sea.hpp"
#include "dstlab/solver.hpp"

namespace dstlab {

using json = nlohmann::json;

// {"n":..,"m":..,"basis":{"re":[[..]],"im":[[..]]}}, rows = 2nm, columns = f.
json to_json(const FermionicProjector& P);
FermionicProjector projector_from_json(const json& j);

json to_json(const Tolerances& t);
// Unknown keys are rejected.
Tolerances tolerances_from_json(const json& j, Tolerances base = {});

json to_json(const CausalClass& c);
json to_json(const SolverResult& r, SolverMode mode);  // wall time excluded
json to_json(const LocalCorrelation& L);
json to_json(const GeometryReport& g);
json to_json(const ImpossibilityCertificate& c);
json to_json(const StabilityVerdict& v);
json to_json(const LandscapeSurface& s);  // minima only, the surface goes to CSV

// Rationals as [numerator, denominator] strings.
json to_json(const lightcone::Expansion& e);
lightcone::Rational rational_from_string(const std::string& s);

std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t v);
// Hash of the canonical dump (sorted keys, no whitespace).
std::string config_hash(const json& j);

std::string solver_traces_csv(const SolverResult& r);
std::string pauli_vectors_csv(const LocalCorrelation& L);
std::string landscape_csv(const LandscapeSurface& s);
std::string fig3_csv(const std::vector<LandscapeRow>& rows);

StateStabilityFunctions stability_functions_from_csv(const std::string& text);

}  // namespace dstlab
