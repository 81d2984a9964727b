#include "caus/scenarios.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <stdexcept>

#include "caus/builtins.hpp"

#ifndef CAUS_DATA_DIR
#define CAUS_DATA_DIR "data"
#endif

namespace caus {

std::string scenario_dir() {
    if (const char* env = std::getenv("CAUS_DATA_DIR")) return std::string(env) + "/scenarios";
    return std::string(CAUS_DATA_DIR) + "/scenarios";
}

std::vector<std::string> scenario_names() {
    std::vector<std::string> out;
    for (auto& entry : std::filesystem::directory_iterator(scenario_dir()))
        if (entry.path().extension() == ".json") out.push_back(entry.path().stem().string());
    std::sort(out.begin(), out.end());
    return out;
}

Scenario scenario_from_json(const Json& j) {
    Scenario sc;
    sc.name = j.value("name", "");
    sc.description = j.value("description", "");
    sc.model = model_from_json(j.at("model"));
    sc.space = sc.model.space;
    sc.expected = j.value("expected", Json::object());
    sc.data = j;
    return sc;
}

Scenario scenario(const std::string& name) {
    auto path = scenario_dir() + "/" + name + ".json";
    if (!std::filesystem::exists(path)) throw std::invalid_argument("unknown scenario: " + name);
    return scenario_from_json(read_json_file(path));
}

CausalFunction function_from_joint(const SpacePtr& s, const Outputs& o, const Json& table) {
    JointIO F;
    F.n = s->num_events();
    for (auto& k : total_assignments(*s)) {
        auto key = to_code(k, F.n);
        if (!table.contains(key)) throw std::invalid_argument("joint table misses input " + key);
        F.rows.push_back(from_code(table.at(key).get<std::string>()));
    }
    auto f = try_from_joint_io(F, s, o);
    if (!f) throw std::invalid_argument("joint table is not a causal function on this space");
    return *f;
}

CausalFunction scenario_function(const Scenario& sc, const std::string& name) {
    return function_from_joint(sc.space, sc.model.outputs, sc.data.at("functions").at(name));
}

namespace {

std::string yes_no(bool b) { return b ? "true" : "false"; }

InseparabilityWitness witness_from_json(const HistorySpace& s, const Json& j) {
    InseparabilityWitness w;
    w.k = from_code(j.at("k").get<std::string>());
    for (int e = 0; e < s.num_events(); ++e) {
        if (!w.k.defined(e)) continue;
        const auto& name = s.names()[e];
        w.entries.push_back({e, from_code(j.at("k_prime").at(name).get<std::string>()),
                             s.event_index(j.at("xi").at(name).get<std::string>())});
    }
    return w;
}

bool localizes(const EmpiricalModel& e) {
    if (!is_switch_space(*e.space)) return false;
    for (auto cp : {Coupling::product, Coupling::quantile}) {
        auto d = localize_switch_model(e, cp);
        if (d.total() != 1 || restrict_model(d, e.cover).components != e.components) return false;
    }
    return true;
}

}  // namespace

std::vector<ClaimResult> check_scenario(const Scenario& sc) {
    std::vector<ClaimResult> out;
    const auto& e = sc.model;
    auto add = [&](std::string claim, std::string expected, std::string actual) {
        bool pass = expected == actual;
        out.push_back({std::move(claim), std::move(expected), std::move(actual), pass});
    };
    auto add_rational = [&](std::string claim, const Json& expected, const Rational& actual) {
        Rational want = expected.is_string() ? parse_rational(expected.get<std::string>()) : Rational(expected.get<long>());
        add(std::move(claim), rational_string(want), rational_string(actual));
    };

    for (auto& [key, value] : sc.expected.items()) {
        if (key == "valid") {
            add(key, yes_no(value.get<bool>()), yes_no(validate_model(e).ok));
        } else if (key == "fraction" || key == "separable_fraction") {
            auto r = key == "fraction" ? noncontextual_fraction(e) : separable_noncontextual_fraction(e);
            add_rational(key, value, r.value);
            add(key + " certificate", "true", yes_no(check_certificate(e, r)));
        } else if (key == "fraction_on" || key == "valid_on") {
            for (auto& [target, v] : value.items()) {
                auto lifted = lift_model(e, builtin_space(target));
                if (key == "fraction_on")
                    add_rational(key + " " + target, v, noncontextual_fraction(lifted).value);
                else
                    add(key + " " + target, yes_no(v.get<bool>()), yes_no(validate_model(lifted).ok));
            }
        } else if (key == "standard_extension") {
            add(key, yes_no(value.get<bool>()), yes_no(solipsistic_extension_exists(e)));
        } else if (key == "deterministic") {
            add(key, yes_no(value.get<bool>()), yes_no(is_deterministic(e)));
        } else if (key == "globally_deterministic") {
            add(key, yes_no(value.get<bool>()), yes_no(is_globally_deterministic(e)));
        } else if (key == "tight") {
            add(key, yes_no(value.get<bool>()), yes_no(is_tight(*sc.space)));
        } else if (key == "causally_complete") {
            add(key, yes_no(value.get<bool>()), yes_no(is_causally_complete(*sc.space)));
        } else if (key == "localizes") {
            add(key, yes_no(value.get<bool>()), yes_no(localizes(e)));
        } else if (key == "quantile_support") {
            auto d = localize_switch_model(e, Coupling::quantile);
            add(key, std::to_string(value.get<int>()), std::to_string(d.weights.size()));
        } else if (key == "correlator") {
            Rational got = value.contains("rows")
                               ? parity_sum(e, value.at("rows").get<std::vector<std::string>>())
                               : parity_sum(e, e.cover.opens);
            add_rational(key, value.at("value"), got);
        } else if (key == "correlator_bound") {
            // every deterministic global function respects the bound
            Rational bound = parse_rational(value.get<std::string>());
            Rational worst;
            bool first = true;
            for_each_function(sc.space, e.outputs, [&](const CausalFunction& f) {
                auto d = restrict_model(delta_distribution(sc.space, full_lowerset(*sc.space), f), e.cover);
                Rational p = parity_sum(d, d.cover.opens);
                if (first || p < worst) worst = p;
                first = false;
            });
            add(key, rational_string(bound), rational_string(worst));
        } else if (key == "mixture_matches") {
            auto d = empty_distribution(sc.space, full_lowerset(*sc.space), e.outputs);
            for (auto& part : sc.data.at("mixture"))
                d.add(function_index(scenario_function(sc, part.at("function").get<std::string>())),
                      parse_rational(part.at("weight").get<std::string>()));
            add(key, yes_no(value.get<bool>()), yes_no(restrict_model(d, e.cover).components == e.components));
        } else if (key == "functions_inseparable") {
            bool all = true;
            for (auto& [name, t] : sc.data.at("functions").items()) all = all && !is_separable(scenario_function(sc, name));
            add(key, yes_no(value.get<bool>()), yes_no(all));
        } else if (key == "witnesses_hold") {
            bool all = true;
            for (auto& [name, w] : sc.data.at("witnesses").items())
                all = all && check_inseparability_witness(scenario_function(sc, name), witness_from_json(*sc.space, w));
            add(key, yes_no(value.get<bool>()), yes_no(all));
        } else {
            out.push_back({key, value.dump(), "unknown claim", false});
        }
    }
    return out;
}

std::vector<LiftTarget> fork_lift_targets() {
    std::vector<LiftTarget> out;
    for (auto name : {"fork_a_cb", "fork_b_ca", "class2_a_cb", "class2_b_ca"}) out.push_back({name, builtin_space(name)});
    return out;
}

std::vector<SpacePtr> search_fork_lifts(const std::string& base, int max_extra) {
    if (base != "fork_a_cb" && base != "fork_b_ca") throw std::invalid_argument("lift search needs fork_a_cb or fork_b_ca");
    auto b = builtin_space(base);
    const int free_event = base == "fork_a_cb" ? 0 : 1;
    const int downstream = 1 - free_event;
    const Outputs o(3, 2);
    auto fork = scenario("causal_fork");
    auto table = *model_table(fork.model);

    std::vector<History> required, candidates;
    for (int x = 0; x < 2; ++x) {
        History h;
        h.set(free_event, x);
        required.push_back(h);
        History c;
        c.set(2, x);
        required.push_back(c);
    }
    for (EventSet m = 1; m < 8; ++m) {
        if (!((m >> downstream) & 1)) continue;
        const int n = popcount(m);
        for (int v = 0; v < (1 << n); ++v) {
            History h;
            for (int e = 0, q = 0; e < 3; ++e)
                if ((m >> e) & 1) h.set(e, (v >> q++) & 1);
            candidates.push_back(h);
        }
    }

    std::vector<SpacePtr> out;
    const std::size_t nc = candidates.size();
    // subsets in order of size, each as a sorted index list
    std::vector<std::size_t> pick;
    std::function<void(std::size_t)> grow = [&](std::size_t from) {
        auto hs = required;
        for (auto i : pick) hs.push_back(candidates[i]);
        try {
            auto s = HistorySpace::make({"A", "B", "C"}, {2, 2, 2}, hs);
            if (validate_space(*s).ok && space_leq(*s, *b) && is_causally_complete(*s) && !is_tight(*s) &&
                has_free_choice(*s) && count_causal_functions_u64(*s, o) == 64 &&
                validate_model(model_from_table(s, o, table)).ok)
                out.push_back(s);
        } catch (const std::exception&) {
            // not a valid space, or the table does not fit it
        }
        if (static_cast<int>(pick.size()) == max_extra) return;
        for (std::size_t i = from; i < nc; ++i) {
            pick.push_back(i);
            grow(i + 1);
            pick.pop_back();
        }
    };
    grow(0);
    return out;
}

}  // namespace caus
