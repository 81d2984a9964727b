#pragma once

#include <string>
#include <vector>

#include "caus/io.hpp"

namespace caus {

// A worked example shipped as JSON under data/scenarios. Besides the model,
// `data` keeps whatever else the file carries (named functions, witnesses,
// a printed decomposition) and `expected` the claims the checker verifies.
struct Scenario {
    std::string name, description;
    SpacePtr space;
    EmpiricalModel model;
    Json expected;
    Json data;
};

std::string scenario_dir();
std::vector<std::string> scenario_names();
Scenario scenario(const std::string& name);
Scenario scenario_from_json(const Json& j);

// joint input/output table {"000": "100", ...} as a function on s
CausalFunction function_from_joint(const SpacePtr& s, const Outputs& o, const Json& table);
// named function from the scenario's "functions" block
CausalFunction scenario_function(const Scenario& sc, const std::string& name);

struct ClaimResult {
    std::string claim;
    std::string expected, actual;
    bool pass = false;
};

std::vector<ClaimResult> check_scenario(const Scenario& sc);

struct LiftTarget {
    std::string name;
    SpacePtr space;
};

// the two spaces of orders A ∨ (C⇝B) and B ∨ (C⇝A), then the two non-tight
// class-2 spaces below them to which the fork model also lifts
std::vector<LiftTarget> fork_lift_targets();

// Spaces on A,B,C below the base space holding {A:a} (or {B:b}) and {C:c},
// plus at most max_extra further histories through the event downstream of
// C, that are causally complete, not tight, have free choice and 64 binary
// functions, and on which the fork table is a valid model.
std::vector<SpacePtr> search_fork_lifts(const std::string& base, int max_extra);

}  // namespace caus
