#pragma once

#include <string>

#include <json.hpp>

#include "caus/empirical.hpp"

namespace caus {

using Json = nlohmann::json;

// "3", "-1/4", "0.933" (decimals are read exactly)
Rational parse_rational(const std::string& text);
std::string rational_string(const Rational& q);
// "1/4 (0.25)" style, for reports
std::string rational_report(const Rational& q, int digits = 6);

Json order_to_json(const CausalOrder& o);
CausalOrder order_from_json(const Json& j);

// A space is written as {"events", "inputs", "histories": codes}. It can be read
// back from that, from a builtin name (plain string or {"builtin": name}), or
// from {"order": ..., "inputs": n} for the space an order induces.
Json space_to_json(const HistorySpace& s);
SpacePtr space_from_json(const Json& j);

// {"space", "outputs", "table": {"B|{A:0,B:1}": 1, ...}} keyed by class representatives
Json function_to_json(const CausalFunction& f, const Json& space_ref);
CausalFunction function_from_json(const Json& j);
// joint input/output truth table, one line per total input assignment
std::string function_csv(const CausalFunction& f);

// Models are written with a "rows" table when every open is a principal
// downset, and as "components" (open as history codes, weights keyed by the
// class values of the open) otherwise. The cover is "standard",
// "solipsistic", "classical", or a list of opens.
Json model_to_json(const EmpiricalModel& e, const Json& space_ref);
EmpiricalModel model_from_json(const Json& j);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace caus
