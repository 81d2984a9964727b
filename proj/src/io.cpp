#include "caus/io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "caus/builtins.hpp"

namespace caus {

Rational parse_rational(const std::string& text) {
    std::string t = text;
    auto dot = t.find('.');
    Rational q;
    try {
        if (dot != std::string::npos) {
            if (t.find('/') != std::string::npos) throw std::invalid_argument("");
            std::string frac = t.substr(dot + 1);
            std::string whole = t.substr(0, dot);
            bool neg = !whole.empty() && whole[0] == '-';
            if (neg) whole.erase(0, 1);
            if (whole.empty()) whole = "0";
            if (frac.empty() || frac.find_first_not_of("0123456789") != std::string::npos ||
                whole.find_first_not_of("0123456789") != std::string::npos)
                throw std::invalid_argument("");
            mpz_class den = 1;
            for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
            q = Rational(mpz_class(whole + frac, 10), den);
            if (neg) q = -q;
        } else {
            if (t.empty() || t.find_first_not_of("-0123456789/") != std::string::npos) throw std::invalid_argument("");
            if (q.set_str(t, 10) != 0) throw std::invalid_argument("");
        }
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("not a rational number: '" + text + "'");
    }
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    q.canonicalize();
    return q;
}

std::string rational_string(const Rational& q) { return q.get_str(); }

std::string rational_report(const Rational& q, int digits) {
    std::ostringstream os;
    os << q.get_str();
    if (q.get_den() != 1) os << " (" << std::fixed << std::setprecision(digits) << q.get_d() << ")";
    return os.str();
}

static Rational json_rational(const Json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    throw std::invalid_argument("probabilities must be integers or strings such as \"1/4\"");
}

Json order_to_json(const CausalOrder& o) {
    Json pairs = Json::array();
    for (auto [i, j] : o.pairs()) pairs.push_back({o.names()[i], o.names()[j]});
    return {{"events", o.names()}, {"pairs", pairs}};
}

CausalOrder order_from_json(const Json& j) {
    auto events = j.at("events").get<std::vector<std::string>>();
    std::vector<std::pair<std::string, std::string>> pairs;
    if (j.contains("pairs"))
        for (auto& p : j.at("pairs")) pairs.emplace_back(p.at(0).get<std::string>(), p.at(1).get<std::string>());
    return make_order(events, pairs);
}

Json space_to_json(const HistorySpace& s) {
    Json hs = Json::array();
    for (auto& h : s.histories()) hs.push_back(to_code(h, s.num_events()));
    return {{"events", s.names()}, {"inputs", s.inputs()}, {"histories", hs}};
}

SpacePtr space_from_json(const Json& j) {
    if (j.is_string()) return builtin_space(j.get<std::string>());
    if (j.contains("builtin")) return builtin_space(j.at("builtin").get<std::string>());
    if (j.contains("order")) {
        auto o = order_from_json(j.at("order"));
        const Json& in = j.contains("inputs") ? j.at("inputs") : Json(2);
        if (in.is_number_integer()) return induced_space(o, in.get<int>());
        return induced_space(o, in.get<std::vector<int>>());
    }
    auto names = j.at("events").get<std::vector<std::string>>();
    std::vector<int> inputs;
    if (!j.contains("inputs"))
        inputs.assign(names.size(), 2);
    else if (j.at("inputs").is_number_integer())
        inputs.assign(names.size(), j.at("inputs").get<int>());
    else
        inputs = j.at("inputs").get<std::vector<int>>();
    std::vector<History> hs;
    for (auto& c : j.at("histories")) {
        auto code = c.get<std::string>();
        if (code.size() != names.size()) throw std::invalid_argument("history code '" + code + "' has the wrong length");
        History h = from_code(code);
        for (std::size_t e = 0; e < names.size(); ++e)
            if (h.defined(static_cast<int>(e)) && h[static_cast<int>(e)] >= inputs[e])
                throw std::invalid_argument("history code '" + code + "' uses an input out of range");
        hs.push_back(h);
    }
    return HistorySpace::make(names, inputs, hs);
}

static Outputs outputs_from_json(const Json& j, const HistorySpace& s) {
    if (!j.contains("outputs")) return Outputs(s.num_events(), 2);
    if (j.at("outputs").is_number_integer()) return Outputs(s.num_events(), j.at("outputs").get<int>());
    auto o = j.at("outputs").get<Outputs>();
    if (static_cast<int>(o.size()) != s.num_events()) throw std::invalid_argument("one output size per event is needed");
    return o;
}

static std::string class_name(const HistorySpace& s, int c) {
    return s.names()[s.class_event(c)] + "|" + to_string(s.histories()[s.class_members(c)[0]], s.names());
}

Json function_to_json(const CausalFunction& f, const Json& space_ref) {
    const auto& s = *f.space();
    Json table = Json::object();
    for (int c = 0; c < s.num_classes(); ++c) table[class_name(s, c)] = f.value(c);
    return {{"space", space_ref}, {"outputs", f.outputs()}, {"table", table}};
}

CausalFunction function_from_json(const Json& j) {
    auto s = space_from_json(j.at("space"));
    auto o = outputs_from_json(j, *s);
    const auto& table = j.at("table");
    std::vector<std::uint8_t> values(s->num_classes());
    for (int c = 0; c < s->num_classes(); ++c) {
        auto key = class_name(*s, c);
        if (!table.contains(key)) throw std::invalid_argument("function table misses class " + key);
        int v = table.at(key).get<int>();
        if (v < 0 || v >= o[s->class_event(c)]) throw std::invalid_argument("output out of range for " + key);
        values[c] = static_cast<std::uint8_t>(v);
    }
    if (table.size() != values.size()) throw std::invalid_argument("function table has unknown classes");
    return CausalFunction(s, o, values);
}

std::string function_csv(const CausalFunction& f) {
    const auto& s = *f.space();
    const int n = s.num_events();
    if (!has_free_choice(s)) throw std::invalid_argument("truth tables need free choice");
    auto F = to_joint_io(f);
    auto ks = total_assignments(s);
    std::ostringstream os;
    os << "inputs,outputs\n";
    for (std::size_t i = 0; i < ks.size(); ++i) os << to_code(ks[i], n) << "," << to_code(F.rows[i], n) << "\n";
    return os.str();
}

static Json open_codes(const HistorySpace& s, Lowerset l) {
    Json out = Json::array();
    for (int i : lowerset_indices(l)) out.push_back(to_code(s.histories()[i], s.num_events()));
    return out;
}

static Lowerset open_from_codes(const HistorySpace& s, const Json& codes) {
    Lowerset l = 0;
    for (auto& c : codes) {
        int i = s.index_of(from_code(c.get<std::string>()));
        if (i < 0) throw std::invalid_argument("open names a history outside the space: " + c.get<std::string>());
        l |= Lowerset(1) << i;
    }
    if (!is_lowerset(s, l)) throw std::invalid_argument("open is not a lowerset");
    return l;
}

static Json cover_to_json(const HistorySpace& s, const Cover& c) {
    if (c == standard_cover(s)) return "standard";
    if (c == solipsistic_cover(s)) return "solipsistic";
    if (c == classical_cover(s)) return "classical";
    Json out = Json::array();
    for (Lowerset l : c.opens) out.push_back(open_codes(s, l));
    return out;
}

static Cover cover_from_json(const HistorySpace& s, const Json& j) {
    if (j.is_string()) {
        auto name = j.get<std::string>();
        if (name == "standard") return standard_cover(s);
        if (name == "solipsistic") return solipsistic_cover(s);
        if (name == "classical") return classical_cover(s);
        throw std::invalid_argument("unknown cover name: " + name);
    }
    std::vector<Lowerset> opens;
    for (auto& o : j) opens.push_back(open_from_codes(s, o));
    Cover c = make_cover(opens);
    if (!is_cover(s, c)) throw std::invalid_argument("the listed opens do not form a cover");
    return c;
}

static std::string values_code(const CausalFunction& f) {
    std::string out;
    for (auto v : f.values()) out += static_cast<char>('0' + v);
    return out;
}

Json model_to_json(const EmpiricalModel& e, const Json& space_ref) {
    Json j{{"space", space_ref}, {"outputs", e.outputs}, {"cover", cover_to_json(*e.space, e.cover)}};
    if (auto t = model_table(e)) {
        Json rows = Json::object();
        for (auto& [in, row] : *t) {
            Json r = Json::object();
            for (auto& [out, p] : row)
                if (sgn(p) != 0) r[out] = rational_string(p);
            rows[in] = r;
        }
        j["rows"] = rows;
        return j;
    }
    Json comps = Json::array();
    for (auto& d : e.components) {
        Json w = Json::object();
        for (auto& [idx, p] : d.weights) w[values_code(d.function(idx))] = rational_string(p);
        comps.push_back({{"open", open_codes(*e.space, d.open)}, {"weights", w}});
    }
    j["components"] = comps;
    return j;
}

EmpiricalModel model_from_json(const Json& j) {
    auto s = space_from_json(j.at("space"));
    auto o = outputs_from_json(j, *s);
    Cover c = j.contains("cover") ? cover_from_json(*s, j.at("cover")) : standard_cover(*s);
    if (j.contains("rows")) {
        Table t;
        for (auto& [in, row] : j.at("rows").items()) {
            auto& r = t[in];
            for (auto& [out, p] : row.items()) r[out] = json_rational(p);
        }
        return model_from_table(s, o, t, c);
    }
    if (!j.contains("components")) throw std::invalid_argument("model needs \"rows\" or \"components\"");
    EmpiricalModel e{s, o, c, {}};
    e.components.resize(c.opens.size());
    std::vector<bool> seen(c.opens.size());
    for (auto& comp : j.at("components")) {
        Lowerset l = open_from_codes(*s, comp.at("open"));
        auto it = std::find(c.opens.begin(), c.opens.end(), l);
        if (it == c.opens.end()) throw std::invalid_argument("component on an open outside the cover");
        std::size_t at = it - c.opens.begin();
        if (seen[at]) throw std::invalid_argument("two components on one open");
        seen[at] = true;
        auto d = empty_distribution(s, l, o);
        const auto& sub = *d.space;
        for (auto& [code, p] : comp.at("weights").items()) {
            if (static_cast<int>(code.size()) != sub.num_classes())
                throw std::invalid_argument("weight key '" + code + "' needs one digit per class");
            std::vector<std::uint8_t> v;
            for (int cl = 0; cl < sub.num_classes(); ++cl) {
                int x = code[cl] - '0';
                if (x < 0 || x >= o[sub.class_event(cl)]) throw std::invalid_argument("bad output in '" + code + "'");
                v.push_back(static_cast<std::uint8_t>(x));
            }
            Rational w = json_rational(p);
            if (sgn(w) < 0) throw std::invalid_argument("negative weight");
            d.add(function_index(CausalFunction(d.space, o, v)), w);
        }
        e.components[at] = std::move(d);
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) throw std::invalid_argument("an open has no component");
    return e;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return Json::parse(in);
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

}  // namespace caus
