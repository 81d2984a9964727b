#include <CLI11.hpp>

#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "caus/builtins.hpp"
#include "caus/scenarios.hpp"

using namespace caus;

namespace {

// exit codes
constexpr int kOk = 0, kFailed = 1, kUsage = 2;

struct SemanticFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string yes(bool b) { return b ? "yes" : "no"; }

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream in(s);
    for (std::string item; std::getline(in, item, sep);)
        if (!item.empty()) out.push_back(item);
    return out;
}

struct SpaceArgs {
    std::string file, builtin;
    std::vector<int> outputs;

    void attach(CLI::App* app) {
        app->add_option("file", file, "space JSON file");
        app->add_option("--builtin,-b", builtin, "builtin space name");
        app->add_option("--outputs,-o", outputs, "output set sizes (one value for all events, or one per event)");
    }
    Json ref() const {
        if (!builtin.empty()) return builtin;
        return read_json_file(file);
    }
    SpacePtr load() const {
        if (builtin.empty() == file.empty()) throw std::invalid_argument("give exactly one of FILE or --builtin");
        return space_from_json(ref());
    }
    Outputs outs(const HistorySpace& s) const {
        if (outputs.empty()) return builtin.empty() ? Outputs(s.num_events(), 2) : builtin_outputs(builtin);
        if (outputs.size() == 1) return Outputs(s.num_events(), outputs[0]);
        if (static_cast<int>(outputs.size()) != s.num_events()) throw std::invalid_argument("one output size per event");
        return outputs;
    }
};

void describe(const HistorySpace& s) {
    std::cout << "histories=" << s.size() << " ext=" << s.ext_size() << " tight=" << yes(is_tight(s))
              << " complete=" << yes(is_causally_complete(s)) << " free_choice=" << yes(has_free_choice(s)) << "\n";
    std::cout << "events=";
    for (int e = 0; e < s.num_events(); ++e) std::cout << (e ? "," : "") << s.names()[e] << ":" << s.inputs()[e];
    std::cout << "\n";
    for (int i = 0; i < s.size(); ++i) {
        std::cout << "  " << to_string(s.histories()[i], s.names()) << " tips=";
        EventSet t = s.tips(i);
        for (int e = 0, first = 1; e < s.num_events(); ++e)
            if ((t >> e) & 1) {
                std::cout << (first ? "" : ",") << s.names()[e];
                first = 0;
            }
        std::cout << "\n";
    }
    std::cout << "tip classes=" << s.num_classes() << "\n";
    for (int c = 0; c < s.num_classes(); ++c) {
        std::cout << "  " << s.names()[s.class_event(c)] << ":";
        for (int i : s.class_members(c)) std::cout << " " << to_code(s.histories()[i], s.num_events());
        std::cout << "\n";
    }
}

int run_space(const SpaceArgs& a, bool validate, bool desc, const std::string& dot, const std::string& json,
              bool completions) {
    auto s = a.load();
    int rc = kOk;
    if (validate) {
        auto r = validate_space(*s);
        if (r.ok) {
            std::cout << "valid\n";
        } else {
            rc = kFailed;
            std::cout << "invalid\n";
            for (auto& v : r.violations) {
                std::cout << "  " << to_code(v.h, s->num_events()) << ": " << v.message;
                if (v.decomposition)
                    std::cout << " (" << to_code(v.decomposition->first, s->num_events()) << " v "
                              << to_code(v.decomposition->second, s->num_events()) << ")";
                std::cout << "\n";
            }
        }
    }
    if (desc || (!validate && dot.empty() && json.empty() && !completions)) describe(*s);
    if (completions) {
        auto cs = enumerate_causal_completions(*s);
        std::cout << "causal completions=" << cs.size() << "\n";
        for (auto& c : cs) {
            std::cout << " ";
            for (auto& h : c->histories()) std::cout << " " << to_code(h, c->num_events());
            std::cout << "\n";
        }
    }
    if (!dot.empty()) write_text_file(dot, space_dot(*s));
    if (!json.empty()) write_text_file(json, space_to_json(*s).dump(2) + "\n");
    return rc;
}

int run_functions(const SpaceArgs& a, bool count, long list, bool separable, const std::string& csv_of) {
    auto s = a.load();
    auto o = a.outs(*s);
    if (count) std::cout << count_causal_functions(*s, o).get_str() << "\n";
    if (separable) std::cout << count_separable(s, o) << "\n";
    if (list > 0) {
        auto n = count_causal_functions_u64(*s, o);
        for (std::uint64_t i = 0; i < n && i < static_cast<std::uint64_t>(list); ++i)
            std::cout << i << " " << function_key(function_at(s, o, i)) << "\n";
    }
    if (!csv_of.empty()) std::cout << function_csv(function_at(s, o, std::stoull(csv_of)));
    if (!count && !separable && list <= 0 && csv_of.empty()) std::cout << count_causal_functions(*s, o).get_str() << "\n";
    return kOk;
}

int run_covers(const SpaceArgs& a, bool count, bool list, const std::string& dot, const std::string& rule_name) {
    auto s = a.load();
    CoverRule rule = CoverRule::supported;
    if (rule_name == "antichain") rule = CoverRule::antichain;
    else if (rule_name != "supported") throw std::invalid_argument("--rule is supported or antichain");
    if (!dot.empty()) {
        write_text_file(dot, hierarchy_dot(*s, cover_hierarchy(*s, rule)));
        if (!count && !list) return kOk;
    }
    auto covers = enumerate_covers(*s, kDefaultLowersetBound, rule);
    if (count || !list) std::cout << covers.size() << "\n";
    if (list)
        for (auto& c : covers) std::cout << cover_string(*s, c) << "\n";
    return kOk;
}

struct ModelArgs {
    std::string file, builtin, random;
    bool validate = false, fraction = false, separable = false, solipsistic = false, localize = false, table = false,
         verbose = false;
    std::string coupling = "product", json, parity;
    int granularity = 12;
};

std::string function_line(const CausalFunction& f) {
    if (has_free_choice(*f.space())) {
        auto F = to_joint_io(f);
        auto ks = total_assignments(*f.space());
        std::string out;
        for (std::size_t i = 0; i < ks.size(); ++i)
            out += (i ? " " : "") + to_code(ks[i], F.n) + ">" + to_code(F.rows[i], F.n);
        return out;
    }
    return function_key(f);
}

int run_model(const ModelArgs& a, std::uint64_t seed) {
    EmpiricalModel e;
    Json space_ref;
    if (!a.builtin.empty()) {
        auto sc = scenario(a.builtin);
        e = sc.model;
        space_ref = sc.data.at("model").at("space");
    } else if (!a.random.empty()) {
        std::mt19937_64 rng(seed);
        auto s = builtin_space(a.random);
        e = random_switch_model(s, builtin_outputs(a.random), rng, a.granularity);
        space_ref = a.random;
    } else if (!a.file.empty()) {
        auto j = read_json_file(a.file);
        if (j.contains("model")) j = j.at("model");
        e = model_from_json(j);
        space_ref = j.at("space");
    } else {
        throw std::invalid_argument("give a model FILE, --builtin SCENARIO or --random SPACE");
    }

    int rc = kOk;
    bool any = false;
    if (a.validate) {
        any = true;
        auto r = validate_model(e);
        std::cout << (r.ok ? "valid" : "invalid: " + r.message) << "\n";
        if (!r.ok) rc = kFailed;
    }
    if (a.fraction) {
        any = true;
        auto r = noncontextual_fraction(e);
        std::cout << "noncontextual=" << rational_string(r.value) << " contextual=" << rational_string(1 - r.value)
                  << "\n";
        if (a.verbose)
            for (auto& [f, w] : r.decomposition) std::cout << "  " << rational_string(w) << "  " << function_line(f) << "\n";
    }
    if (a.separable) {
        any = true;
        auto r = separable_noncontextual_fraction(e);
        std::cout << "separable_noncontextual=" << rational_string(r.value) << "\n";
        if (a.verbose)
            for (auto& [f, w] : r.decomposition) std::cout << "  " << rational_string(w) << "  " << function_line(f) << "\n";
    }
    if (a.solipsistic) {
        any = true;
        std::cout << (solipsistic_extension_exists(e) ? "standard extension exists" : "no standard extension") << "\n";
    }
    if (a.localize) {
        any = true;
        if (!is_switch_space(*e.space)) throw SemanticFailure("not a causal switch space");
        if (auto r = validate_model(e); !r.ok) throw SemanticFailure("invalid model: " + r.message);
        Coupling cp = Coupling::product;
        if (a.coupling == "quantile") cp = Coupling::quantile;
        else if (a.coupling != "product") throw std::invalid_argument("--coupling is product or quantile");
        auto d = localize_switch_model(e, cp);
        bool exact = restrict_model(d, e.cover).components == e.components;
        std::cout << "classical functions=" << d.weights.size() << " restricts=" << yes(exact) << "\n";
        for (auto& [idx, w] : d.weights)
            std::cout << "  " << rational_report(w) << "  " << function_line(d.function(idx)) << "\n";
        if (!exact) rc = kFailed;
    }
    if (!a.parity.empty()) {
        any = true;
        std::cout << "parity_sum=" << rational_string(parity_sum(e, split(a.parity, ','))) << "\n";
    }
    if (a.table) {
        any = true;
        std::cout << model_csv(e);
    }
    if (!a.json.empty()) {
        any = true;
        write_text_file(a.json, model_to_json(e, space_ref).dump(2) + "\n");
    }
    if (!any) std::cout << model_to_json(e, space_ref).dump(2) << "\n";
    return rc;
}

int run_scenario(const std::string& name, bool list) {
    if (list || name.empty()) {
        for (auto& n : scenario_names()) std::cout << n << "\n";
        return kOk;
    }
    auto sc = scenario(name);
    std::cout << sc.name << ": " << sc.description << "\n";
    int rc = kOk;
    for (auto& r : check_scenario(sc)) {
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.claim << " expected=" << r.expected << " actual=" << r.actual
                  << "\n";
        if (!r.pass) rc = kFailed;
    }
    return rc;
}

int run_orders(const std::string& events, const std::string& pairs, bool count, bool list, bool classes,
               const std::string& dot) {
    auto names = split(events, ',');
    if (names.empty()) throw std::invalid_argument("--events needs at least one name");
    if (!pairs.empty() || !dot.empty()) {
        std::vector<std::pair<std::string, std::string>> ps;
        for (auto& p : split(pairs, ',')) {
            auto lt = p.find('<');
            if (lt == std::string::npos) throw std::invalid_argument("pairs look like A<B");
            ps.emplace_back(p.substr(0, lt), p.substr(lt + 1));
        }
        auto o = make_order(names, ps);
        std::cout << "definite=" << yes(is_definite(o)) << " lowersets=" << lowersets(o).size() << "\n";
        for (auto& c : equivalence_classes(o))
            if (c.size() > 1) {
                std::cout << "indefinite:";
                for (int i : c) std::cout << " " << o.names()[i];
                std::cout << "\n";
            }
        if (!dot.empty()) write_text_file(dot, hasse_dot(o));
        return kOk;
    }
    auto all = enumerate_orders(names, 6);
    if (count || (!list && !classes)) std::cout << all.size() << "\n";
    if (classes) {
        std::set<std::uint64_t> codes;
        for (auto& o : all) codes.insert(canonical_code(o));
        std::cout << "up to relabelling=" << codes.size() << "\n";
    }
    if (list)
        for (auto& o : all) std::cout << order_to_json(o).at("pairs").dump() << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Causal histories, causal functions and empirical models"};
    app.require_subcommand(1);
    std::uint64_t seed = 1;
    app.add_option("--seed", seed, "seed for randomized commands")->capture_default_str();

    SpaceArgs space_a, fun_a, cov_a;
    bool s_validate = false, s_describe = false, s_completions = false;
    std::string s_dot, s_json;
    auto* sp = app.add_subcommand("space", "inspect a history space");
    space_a.attach(sp);
    sp->add_flag("--validate", s_validate, "check the space conditions");
    sp->add_flag("--describe", s_describe, "counts, flags and tip classes");
    sp->add_flag("--completions", s_completions, "list the causal completions");
    sp->add_option("--dot", s_dot, "write the space as DOT");
    sp->add_option("--json", s_json, "write the space as JSON");

    bool f_count = false, f_sep = false;
    long f_list = 0;
    std::string f_csv;
    auto* fn = app.add_subcommand("functions", "count or list causal functions");
    fun_a.attach(fn);
    fn->add_flag("--count", f_count, "number of causal functions");
    fn->add_flag("--separable-count", f_sep, "number of separable causal functions");
    fn->add_option("--list", f_list, "list the first N functions");
    fn->add_option("--truth-table", f_csv, "joint input/output table of function number N");

    bool c_count = false, c_list = false;
    std::string c_dot, c_rule = "supported";
    auto* cv = app.add_subcommand("covers", "enumerate covers of a space");
    cov_a.attach(cv);
    cv->add_flag("--count", c_count, "number of covers");
    cv->add_flag("--list", c_list, "list covers");
    cv->add_option("--hierarchy-dot", c_dot, "write the cover hierarchy as DOT");
    cv->add_option("--rule", c_rule, "supported (default) or antichain");

    ModelArgs m;
    auto* md = app.add_subcommand("model", "analyse an empirical model");
    md->add_option("file", m.file, "model JSON (or scenario JSON)");
    md->add_option("--builtin,-b", m.builtin, "scenario name");
    md->add_option("--random", m.random, "random standard model on a builtin switch space (uses --seed)");
    md->add_option("--granularity", m.granularity, "weight granularity for --random");
    md->add_flag("--validate", m.validate, "check normalization and compatibility");
    md->add_flag("--fraction", m.fraction, "noncontextual fraction");
    md->add_flag("--separable-fraction", m.separable, "noncontextual fraction over separable functions");
    md->add_flag("--solipsistic-check", m.solipsistic, "does the model extend to the standard cover");
    md->add_flag("--localize", m.localize, "classical distribution on a switch space");
    md->add_option("--coupling", m.coupling, "product (default) or quantile");
    md->add_option("--parity", m.parity, "parity sum over the listed rows, e.g. 011,101,110");
    md->add_flag("--table", m.table, "print the model as CSV");
    md->add_option("--json", m.json, "write the model as canonical JSON");
    md->add_flag("--verbose,-v", m.verbose, "print decompositions");

    std::string sc_name;
    bool sc_list = false;
    auto* sc = app.add_subcommand("scenario", "check a shipped worked example");
    sc->add_option("name", sc_name, "scenario name");
    sc->add_flag("--list", sc_list, "list scenarios");

    std::string o_events = "A,B,C", o_pairs, o_dot;
    bool o_count = false, o_list = false, o_classes = false;
    auto* od = app.add_subcommand("orders", "causal orders on a set of events");
    od->add_option("--events", o_events, "comma separated event names")->capture_default_str();
    od->add_option("--pairs", o_pairs, "one order, as A<B,C<B");
    od->add_flag("--count", o_count, "number of orders");
    od->add_flag("--list", o_list, "list all orders");
    od->add_flag("--classes", o_classes, "count orders up to relabelling");
    od->add_option("--dot", o_dot, "write the Hasse diagram of --pairs as DOT");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        int code = app.exit(err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (sp->parsed()) return run_space(space_a, s_validate, s_describe, s_dot, s_json, s_completions);
        if (fn->parsed()) return run_functions(fun_a, f_count, f_list, f_sep, f_csv);
        if (cv->parsed()) return run_covers(cov_a, c_count, c_list, c_dot, c_rule);
        if (md->parsed()) return run_model(m, seed);
        if (sc->parsed()) return run_scenario(sc_name, sc_list);
        if (od->parsed()) return run_orders(o_events, o_pairs, o_count, o_list, o_classes, o_dot);
    } catch (const SemanticFailure& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kFailed;
    } catch (const Json::exception& err) {
        std::cerr << "parse error: " << err.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kUsage;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kFailed;
    }
    return kUsage;
}
