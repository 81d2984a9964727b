#include "caus/empirical.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <cstring>
#include <unordered_map>

namespace caus {

RestrictionMap::RestrictionMap(const HistorySpace& from, const Outputs& o, const HistorySpace& to) {
    for (int c = 0; c < from.num_classes(); ++c) from_radix_.push_back(o.at(from.class_event(c)));
    std::vector<std::uint64_t> radix(to.num_classes());
    for (int c = 0; c < to.num_classes(); ++c) {
        const int e = to.class_event(c);
        int i = from.index_of(to.histories()[to.class_members(c).front()]);
        if (i < 0) throw std::invalid_argument("restriction: history outside the space");
        int src = from.class_of(i, e);
        if (src < 0) throw std::invalid_argument("restriction: tips differ between the spaces");
        source_class_.push_back(src);
        radix[c] = o.at(e);
    }
    weight_.assign(to.num_classes(), 1);
    for (int c = to.num_classes() - 1; c >= 0; --c) {
        weight_[c] = count_;
        count_ *= radix[c];
    }
}

std::uint64_t RestrictionMap::apply(const std::uint8_t* v) const {
    std::uint64_t idx = 0;
    for (std::size_t c = 0; c < source_class_.size(); ++c) idx += weight_[c] * v[source_class_[c]];
    return idx;
}

std::uint64_t RestrictionMap::apply_index(std::uint64_t from_index) const {
    thread_local std::vector<std::uint8_t> v;
    v.resize(from_radix_.size());
    for (int c = static_cast<int>(from_radix_.size()) - 1; c >= 0; --c) {
        v[c] = static_cast<std::uint8_t>(from_index % from_radix_[c]);
        from_index /= from_radix_[c];
    }
    return apply(v.data());
}

Rational CausalDistribution::total() const {
    Rational t = 0;
    for (auto& [_, w] : weights) t += w;
    return t;
}

Rational CausalDistribution::weight(std::uint64_t index) const {
    auto it = weights.find(index);
    return it == weights.end() ? Rational(0) : it->second;
}

void CausalDistribution::add(std::uint64_t index, const Rational& w) {
    if (sgn(w) == 0) return;
    auto& slot = weights[index];
    slot += w;
    if (sgn(slot) == 0) weights.erase(index);
}

CausalDistribution empty_distribution(const SpacePtr& whole, Lowerset open, const Outputs& o) {
    CausalDistribution d;
    d.whole = whole;
    d.open = open;
    d.space = lowerset_space(*whole, open);
    d.outputs = o;
    return d;
}

CausalDistribution delta_distribution(const SpacePtr& whole, Lowerset open, const CausalFunction& f) {
    auto d = empty_distribution(whole, open, f.outputs());
    if (f.space()->histories() == d.space->histories()) {
        d.add(function_index(f), 1);
    } else {
        RestrictionMap r(*f.space(), f.outputs(), *d.space);
        d.add(r.apply(f.values().data()), 1);
    }
    return d;
}

CausalDistribution marginalize(const CausalDistribution& d, Lowerset sub) {
    if ((sub & ~d.open) != 0) throw std::invalid_argument("marginalize: target is not inside the open");
    auto out = empty_distribution(d.whole, sub, d.outputs);
    RestrictionMap r(*d.space, d.outputs, *out.space);
    for (auto& [idx, w] : d.weights) out.add(r.apply_index(idx), w);
    return out;
}

const CausalDistribution& EmpiricalModel::component(Lowerset open) const {
    for (std::size_t i = 0; i < cover.opens.size(); ++i)
        if (cover.opens[i] == open) return components.at(i);
    throw std::out_of_range("model has no component on " + lowerset_string(*space, open));
}

ModelReport validate_model(const EmpiricalModel& e) {
    const auto& s = *e.space;
    if (e.components.size() != e.cover.opens.size()) return {false, "one component per open is required"};
    for (std::size_t i = 0; i < e.components.size(); ++i) {
        const auto& d = e.components[i];
        if (d.open != e.cover.opens[i]) return {false, "component " + std::to_string(i) + " sits on the wrong open"};
        for (auto& [_, w] : d.weights)
            if (sgn(w) < 0) return {false, "negative weight on " + lowerset_string(s, d.open)};
        Rational t = d.total();
        if (t != 1) return {false, "normalization: " + lowerset_string(s, d.open) + " sums to " + t.get_str()};
    }
    for (std::size_t i = 0; i < e.components.size(); ++i)
        for (std::size_t j = i + 1; j < e.components.size(); ++j) {
            Lowerset meet = e.cover.opens[i] & e.cover.opens[j];
            if (meet == 0) continue;
            if (!(marginalize(e.components[i], meet) == marginalize(e.components[j], meet)))
                return {false, "compatibility: " + lowerset_string(s, e.cover.opens[i]) + " and " +
                                   lowerset_string(s, e.cover.opens[j]) + " disagree on " + lowerset_string(s, meet)};
        }
    return {};
}

EmpiricalModel restrict_model(const CausalDistribution& classical, const Cover& c) {
    EmpiricalModel e{classical.whole, classical.outputs, c, {}};
    for (Lowerset l : c.opens) e.components.push_back(marginalize(classical, l));
    return e;
}

EmpiricalModel restrict_model(const EmpiricalModel& e, const Cover& finer) {
    EmpiricalModel out{e.space, e.outputs, finer, {}};
    for (Lowerset l : finer.opens) {
        auto it = std::find_if(e.cover.opens.begin(), e.cover.opens.end(),
                               [&](Lowerset big) { return (l & ~big) == 0; });
        if (it == e.cover.opens.end()) throw std::invalid_argument("restrict_model: cover is not finer");
        out.components.push_back(marginalize(e.components[it - e.cover.opens.begin()], l));
    }
    return out;
}

// t with open = ↓t, when there is one
static std::optional<History> principal_top(const HistorySpace& s, Lowerset open) {
    History t;
    for (int i : lowerset_indices(open)) {
        if (!compatible(t, s.histories()[i])) return std::nullopt;
        t = join(t, s.histories()[i]);
    }
    if (ext_lowerset(s, t) != open) return std::nullopt;
    return t;
}



static std::string output_code(const CausalFunction& f, const History& t, int n) {
    const auto& sub = *f.space();
    int k = sub.ext_index_of(t);
    std::string code(n, '_');
    for (int e = 0; e < n; ++e)
        if (t.defined(e)) code[e] = static_cast<char>('0' + f.ext_at(k, e));
    return code;
}

EmpiricalModel model_from_table(const SpacePtr& s, const Outputs& o, const Table& rows, const Cover& c) {
    const int n = s->num_events();
    if (static_cast<int>(o.size()) != n) throw std::invalid_argument("table: outputs do not match the events");
    EmpiricalModel e{s, o, c, {}};
    std::size_t used = 0;
    for (Lowerset l : c.opens) {
        auto t = principal_top(*s, l);
        if (!t) throw std::invalid_argument("table: open " + lowerset_string(*s, l) + " is not a principal downset");
        const std::string key = to_code(*t, n);
        auto it = rows.find(key);
        if (it == rows.end()) throw std::invalid_argument("table: missing row " + key);
        ++used;
        auto d = empty_distribution(s, l, o);
        Rational sum = 0;
        for (auto& [col, p] : it->second) {
            if (static_cast<int>(col.size()) != n) throw std::invalid_argument("table: wrong arity in column " + col);
            for (int ev = 0; ev < n; ++ev) {
                bool in_dom = t->defined(ev);
                if (in_dom != (col[ev] != '_') || (in_dom && (col[ev] < '0' || col[ev] - '0' >= o[ev])))
                    throw std::invalid_argument("table: column " + col + " does not fit row " + key);
            }
            if (sgn(p) < 0) throw std::invalid_argument("table: negative entry in row " + key);
            auto f = build_function(d.space, o, [&](const History&, int ev) { return col[ev] - '0'; });
            if (!f) throw std::invalid_argument("table: row " + key + " does not determine its functions");
            d.add(function_index(*f), p);
            sum += p;
        }
        if (sum != 1) throw std::invalid_argument("table: row " + key + " sums to " + sum.get_str());
        e.components.push_back(std::move(d));
    }
    if (used != rows.size()) throw std::invalid_argument("table: rows that match no open");
    return e;
}

EmpiricalModel model_from_table(const SpacePtr& s, const Outputs& o, const Table& rows) {
    return model_from_table(s, o, rows, standard_cover(*s));
}

std::optional<Table> model_table(const EmpiricalModel& e) {
    const int n = e.space->num_events();
    Table out;
    for (auto& d : e.components) {
        auto t = principal_top(*e.space, d.open);
        if (!t) return std::nullopt;
        auto& row = out[to_code(*t, n)];
        for (auto& [idx, w] : d.weights) row[output_code(d.function(idx), *t, n)] += w;
    }
    return out;
}

EmpiricalModel lift_model(const EmpiricalModel& e, const SpacePtr& target) {
    auto t = model_table(e);
    if (!t) throw std::invalid_argument("lift: model has no table form");
    return model_from_table(target, e.outputs, *t);
}

namespace {

// Fraction LP columns: one per global causal function (or per listed one),
// with a 1 in the row of its restriction to every open.
class FractionColumns : public ColumnSource {
public:
    FractionColumns(const EmpiricalModel& e, const std::vector<std::uint64_t>* subset) : e_(e), subset_(subset) {
        const auto& s = *e.space;
        total_ = count_causal_functions_u64(s, e.outputs);
        for (int c = 0; c < s.num_classes(); ++c) radix_.push_back(e.outputs[s.class_event(c)]);
        for (auto& d : e.components) {
            maps_.emplace_back(s, e.outputs, *d.space);
            rows_.emplace_back();
            for (auto& [idx, w] : d.weights) {
                rows_.back()[idx] = static_cast<int>(rhs_.size());
                rhs_.push_back(w);
            }
        }
    }
    const std::vector<Rational>& rhs() const { return rhs_; }
    std::uint64_t global(std::size_t j) const { return subset_ ? (*subset_)[j] : j; }

    std::size_t size() const override { return subset_ ? subset_->size() : total_; }
    int cost(std::size_t) const override { return 1; }

    void column(std::size_t j, std::vector<LPEntry>& out) const override {
        out.clear();
        auto& v = values(j);
        for (std::size_t l = 0; l < maps_.size(); ++l) {
            int r = row(l, v);
            if (r < 0) throw std::logic_error("fraction: column outside the model support");
            out.push_back({r, 1});
        }
    }

    double reduced_cost(std::size_t j, const double* y) const override {
        auto& v = values(j);
        double r = 1;
        for (std::size_t l = 0; l < maps_.size(); ++l) {
            int k = row(l, v);
            if (k < 0) return -std::numeric_limits<double>::infinity();
            r -= y[k];
        }
        return r;
    }

private:
    const EmpiricalModel& e_;
    const std::vector<std::uint64_t>* subset_;
    std::uint64_t total_ = 0;
    std::vector<int> radix_;
    std::vector<RestrictionMap> maps_;
    std::vector<std::unordered_map<std::uint64_t, int>> rows_;
    std::vector<Rational> rhs_;

    const std::vector<std::uint8_t>& values(std::size_t j) const {
        thread_local std::vector<std::uint8_t> v;
        v.resize(radix_.size());
        std::uint64_t idx = global(j);
        for (int c = static_cast<int>(radix_.size()) - 1; c >= 0; --c) {
            v[c] = static_cast<std::uint8_t>(idx % radix_[c]);
            idx /= radix_[c];
        }
        return v;
    }
    int row(std::size_t l, const std::vector<std::uint8_t>& v) const {
        auto it = rows_[l].find(maps_[l].apply(v.data()));
        return it == rows_[l].end() ? -1 : it->second;
    }
};

FractionResult run_fraction(const EmpiricalModel& e, const std::vector<std::uint64_t>* subset, Pricing pricing) {
    FractionColumns cols(e, subset);
    LPProblem p;
    p.rhs = cols.rhs();
    p.sense.assign(p.rhs.size(), RowSense::leq);
    p.columns = &cols;
    auto r = solve_lp(p, pricing);
    if (r.status != LPStatus::optimal) throw std::logic_error("fraction LP did not reach an optimum");
    FractionResult out;
    out.value = r.value;
    out.pivots = r.pivots;
    for (auto& [j, w] : r.solution) out.decomposition.emplace_back(function_at(e.space, e.outputs, cols.global(j)), w);
    return out;
}

}  // namespace

FractionResult noncontextual_fraction(const EmpiricalModel& e, std::uint64_t bound, Pricing pricing) {
    if (count_causal_functions(*e.space, e.outputs) > bound)
        throw std::length_error("fraction: too many global causal functions");
    return run_fraction(e, nullptr, pricing);
}

FractionResult separable_noncontextual_fraction(const EmpiricalModel& e, std::uint64_t bound) {
    if (count_causal_functions(*e.space, e.outputs) > bound)
        throw std::length_error("fraction: too many global causal functions");
    auto sep = separable_indices(e.space, e.outputs);
    return run_fraction(e, &sep, Pricing::parallel);
}

Rational contextual_fraction(const EmpiricalModel& e) { return 1 - noncontextual_fraction(e).value; }

bool is_noncontextual(const EmpiricalModel& e) { return noncontextual_fraction(e).value == 1; }

bool check_certificate(const EmpiricalModel& e, const FractionResult& r) {
    auto mix = empty_distribution(e.space, full_lowerset(*e.space), e.outputs);
    Rational sum = 0;
    for (auto& [f, w] : r.decomposition) {
        if (sgn(w) <= 0) return false;
        mix.add(function_index(f), w);
        sum += w;
    }
    if (sum != r.value) return false;
    for (std::size_t i = 0; i < e.cover.opens.size(); ++i) {
        auto m = marginalize(mix, e.cover.opens[i]);
        const auto& d = e.components[i];
        for (auto& [idx, w] : m.weights)
            if (w > d.weight(idx)) return false;
        if (r.value == 1 && !(m.weights == d.weights)) return false;
    }
    return true;
}

// ---- causal switch spaces ----

namespace {

// every assignment of values below sizes[e] to the events of a set
std::vector<History> assignments(EventSet events, const std::vector<int>& sizes) {
    std::vector<History> out{History()};
    for (int e = 0; e < kMaxEvents; ++e) {
        if (!((events >> e) & 1u)) continue;
        std::vector<History> next;
        for (auto& h : out)
            for (int x = 0; x < sizes[e]; ++x) {
                History g = h;
                g.set(e, x);
                next.push_back(g);
            }
        out = std::move(next);
    }
    return out;
}

// A switch space decides one block of events (a single event, or an
// indiscrete block) first, then branches on the block's joint input.
struct SwitchNode {
    EventSet block = 0;
    std::vector<History> inputs;                        // joint inputs of the block
    std::vector<int> heads;                             // history deciding the block, per input
    std::vector<std::unique_ptr<SwitchNode>> children;  // per input, null when nothing remains
};

std::unique_ptr<SwitchNode> switch_tree(const HistorySpace& s, const History& prefix, EventSet remaining) {
    const EventSet pdom = prefix.dom();
    std::vector<int> members;
    for (int i = 0; i < s.size(); ++i) {
        const History& h = s.histories()[i];
        if ((h.dom() & pdom) != pdom || h.restrict(pdom) != prefix || (h.dom() & remaining) == 0) continue;
        members.push_back(i);
    }
    if (members.empty()) return nullptr;
    auto node = std::make_unique<SwitchNode>();
    for (int i : members) {
        bool minimal = std::none_of(members.begin(), members.end(),
                                    [&](int j) { return lt(s.histories()[j], s.histories()[i]); });
        if (!minimal) continue;
        EventSet w = s.histories()[i].dom() & remaining;
        if (node->block != 0 && node->block != w) return nullptr;
        node->block = w;
    }
    const EventSet w = node->block;
    for (int i : members)
        if ((s.histories()[i].dom() & w) != w) return nullptr;
    node->inputs = assignments(w, s.inputs());
    for (auto& x : node->inputs) {
        History h = prefix;
        for (int e = 0; e < kMaxEvents; ++e)
            if (x.defined(e)) h.set(e, x[e]);
        int i = s.index_of(h);
        if (i < 0 || s.tips(i) != w) return nullptr;
        node->heads.push_back(i);
    }
    const EventSet rest = remaining & ~w;
    std::size_t accounted = node->heads.size();
    for (auto& x : node->inputs) {
        if (rest == 0) {
            node->children.emplace_back();
            continue;
        }
        History p = prefix;
        for (int e = 0; e < kMaxEvents; ++e)
            if (x.defined(e)) p.set(e, x[e]);
        auto child = switch_tree(s, p, rest);
        if (!child) return nullptr;
        node->children.push_back(std::move(child));
    }
    if (rest == 0 && members.size() != accounted) return nullptr;
    return node;
}

// conditional table: inputs on the remaining events -> outputs -> probability
using Cond = std::map<History, std::map<History, Rational>>;
// outputs per history index, on the events it decides
using Assignment = std::map<int, History>;

struct Piece {
    Rational upto;
    Assignment a;
};

// distribution of the block outputs for one block input, the same in every row
std::map<History, Rational> block_marginal(const Cond& t, EventSet w, const History& x) {
    std::optional<std::map<History, Rational>> m;
    for (auto& [k, row] : t) {
        if (k.restrict(w) != x) continue;
        std::map<History, Rational> cur;
        for (auto& [o, p] : row)
            if (sgn(p) != 0) cur[o.restrict(w)] += p;
        if (m && *m != cur) throw std::invalid_argument("localize: the model signals into an earlier event");
        m = cur;
    }
    if (!m) throw std::invalid_argument("localize: missing rows");
    return *m;
}

History without(History h, EventSet w) {
    for (int e = 0; e < kMaxEvents; ++e)
        if ((w >> e) & 1u) h.unset(e);
    return h;
}

Cond condition(const Cond& t, EventSet w, const History& x, const History& out, const Rational& p) {
    Cond c;
    for (auto& [k, row] : t) {
        if (k.restrict(w) != x) continue;
        auto& dst = c[without(k, w)];
        for (auto& [o, q] : row)
            if (o.restrict(w) == out && sgn(q) != 0) dst[without(o, w)] += q / p;
    }
    return c;
}

std::vector<std::pair<Rational, Assignment>> localize_product(const SwitchNode& node, const Cond& t) {
    std::vector<std::pair<Rational, Assignment>> acc{{Rational(1), {}}};
    for (std::size_t i = 0; i < node.inputs.size(); ++i) {
        std::vector<std::pair<Rational, Assignment>> branch;
        for (auto& [out, pr] : block_marginal(t, node.block, node.inputs[i])) {
            std::vector<std::pair<Rational, Assignment>> sub{{Rational(1), {}}};
            if (node.children[i])
                sub = localize_product(*node.children[i], condition(t, node.block, node.inputs[i], out, pr));
            for (auto& [p, a] : sub) {
                Assignment x = a;
                x[node.heads[i]] = out;
                branch.emplace_back(pr * p, std::move(x));
            }
        }
        std::vector<std::pair<Rational, Assignment>> next;
        for (auto& [p, a] : acc)
            for (auto& [q, b] : branch) {
                Assignment x = a;
                x.insert(b.begin(), b.end());
                next.emplace_back(p * q, std::move(x));
            }
        acc = std::move(next);
    }
    return acc;
}

// pieces partition [0,1) by their upper ends
std::vector<Piece> refine(const std::vector<Piece>& a, const std::vector<Piece>& b) {
    std::vector<Piece> out;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        Piece p;
        p.upto = std::min(a[i].upto, b[j].upto);
        p.a = a[i].a;
        p.a.insert(b[j].a.begin(), b[j].a.end());
        out.push_back(std::move(p));
        if (a[i].upto == out.back().upto) ++i;
        if (b[j].upto == out.back().upto) ++j;
    }
    return out;
}

std::vector<Piece> localize_quantile(const SwitchNode& node, const Cond& t) {
    std::vector<Piece> acc{{Rational(1), {}}};
    for (std::size_t i = 0; i < node.inputs.size(); ++i) {
        std::vector<Piece> branch;
        Rational lo = 0;
        for (auto& [out, pr] : block_marginal(t, node.block, node.inputs[i])) {
            std::vector<Piece> sub{{Rational(1), {}}};
            if (node.children[i])
                sub = localize_quantile(*node.children[i], condition(t, node.block, node.inputs[i], out, pr));
            for (auto& pc : sub) {
                Piece x{lo + pr * pc.upto, pc.a};
                x.a[node.heads[i]] = out;
                branch.push_back(std::move(x));
            }
            lo += pr;
        }
        acc = refine(acc, branch);
    }
    return acc;
}

Cond standard_conditional(const EmpiricalModel& e) {
    auto table = model_table(e);
    if (!table) throw std::invalid_argument("localize: model is not in table form");
    Cond c;
    for (auto& [in, row] : *table) {
        auto& dst = c[from_code(in)];
        for (auto& [out, p] : row) dst[from_code(out)] += p;
    }
    return c;
}

}  // namespace

bool is_switch_space(const HistorySpace& s) {
    return s.size() > 0 && switch_tree(s, History(), s.all_events()) != nullptr;
}

CausalDistribution localize_switch_model(const EmpiricalModel& e, Coupling coupling) {
    const auto& s = *e.space;
    auto tree = switch_tree(s, History(), s.all_events());
    if (!tree) throw std::invalid_argument("localize: not a causal switch space");
    if (!(e.cover == standard_cover(s))) throw std::invalid_argument("localize: model is not on the standard cover");
    auto report = validate_model(e);
    if (!report.ok) throw std::invalid_argument("localize: " + report.message);
    Cond t = standard_conditional(e);

    std::vector<std::pair<Rational, Assignment>> parts;
    if (coupling == Coupling::product) {
        parts = localize_product(*tree, t);
    } else {
        Rational lo = 0;
        for (auto& pc : localize_quantile(*tree, t)) {
            parts.emplace_back(pc.upto - lo, pc.a);
            lo = pc.upto;
        }
    }
    auto out = empty_distribution(e.space, full_lowerset(s), e.outputs);
    for (auto& [p, a] : parts) {
        auto f = build_function(e.space, e.outputs, [&](const History& h, int ev) { return a.at(s.index_of(h))[ev]; });
        if (!f) throw std::logic_error("localize: assembled function is not causal");
        out.add(function_index(*f), p);
    }
    return out;
}

EmpiricalModel random_switch_model(const SpacePtr& s, const Outputs& o, std::mt19937_64& rng, int granularity) {
    auto tree = switch_tree(*s, History(), s->all_events());
    if (!tree) throw std::invalid_argument("random model: not a causal switch space");
    std::uniform_int_distribution<int> pick(0, granularity);
    const int n = s->num_events();
    Table table;
    std::function<void(const SwitchNode*, History, History, Rational)> rec = [&](const SwitchNode* node, History in,
                                                                                   History out, Rational p) {
        if (!node) {
            table[to_code(in, n)][to_code(out, n)] += p;
            return;
        }
        const auto outs = assignments(node->block, o);
        for (std::size_t i = 0; i < node->inputs.size(); ++i) {
            std::vector<int> raw(outs.size());
            int sum = 0;
            while (sum == 0) {
                sum = 0;
                for (auto& x : raw) sum += (x = pick(rng));
            }
            History in2 = in;
            for (int e = 0; e < n; ++e)
                if (node->inputs[i].defined(e)) in2.set(e, node->inputs[i][e]);
            for (std::size_t x = 0; x < outs.size(); ++x) {
                if (raw[x] == 0) continue;
                History out2 = out;
                for (int e = 0; e < n; ++e)
                    if (outs[x].defined(e)) out2.set(e, outs[x][e]);
                Rational q(raw[x], sum);
                q.canonicalize();
                rec(node->children[i].get(), in2, out2, p * q);
            }
        }
    };
    rec(tree.get(), History(), History(), Rational(1));
    return model_from_table(s, o, table);
}

// ---- solipsistic contextuality ----

bool solipsistic_extension_exists(const EmpiricalModel& e) {
    const auto& s = *e.space;
    const Cover std_cover = standard_cover(s);
    struct Block {
        Lowerset open;
        SpacePtr space;
        std::uint64_t count;
    };
    std::vector<Block> blocks;
    for (Lowerset l : std_cover.opens) {
        auto sub = lowerset_space(s, l);
        blocks.push_back({l, sub, count_causal_functions_u64(*sub, e.outputs)});
    }
    const int nb = static_cast<int>(blocks.size());

    // a row group is a set of rows indexed by functions on a lowerset
    struct Link {
        int block;
        int sign;
        RestrictionMap map;
        int base;
    };
    std::vector<Rational> rhs;
    std::vector<std::vector<Link>> links(nb);
    auto new_rows = [&](std::uint64_t count) {
        int base = static_cast<int>(rhs.size());
        rhs.resize(rhs.size() + count, Rational(0));
        return base;
    };
    std::vector<int> norm(nb);
    for (int b = 0; b < nb; ++b) {
        norm[b] = new_rows(1);
        rhs[norm[b]] = 1;
    }
    for (int a = 0; a < nb; ++a)
        for (int b = a + 1; b < nb; ++b) {
            Lowerset meet = blocks[a].open & blocks[b].open;
            if (meet == 0) continue;
            auto sub = lowerset_space(s, meet);
            RestrictionMap ma(*blocks[a].space, e.outputs, *sub), mb(*blocks[b].space, e.outputs, *sub);
            int base = new_rows(ma.target_count());
            links[a].push_back({a, 1, ma, base});
            links[b].push_back({b, -1, mb, base});
        }
    for (std::size_t i = 0; i < e.cover.opens.size(); ++i) {
        Lowerset l = e.cover.opens[i];
        int a = 0;
        while (a < nb && (l & ~blocks[a].open) != 0) ++a;
        if (a == nb) throw std::invalid_argument("solipsistic check: cover is not below the standard cover");
        const auto& d = e.components[i];
        RestrictionMap m(*blocks[a].space, e.outputs, *d.space);
        int base = new_rows(m.target_count());
        for (auto& [idx, w] : d.weights) rhs[base + idx] = w;
        links[a].push_back({a, 1, m, base});
    }

    ColumnList cols;
    std::vector<std::uint8_t> v;
    for (int b = 0; b < nb; ++b)
        for (std::uint64_t f = 0; f < blocks[b].count; ++f) {
            v.resize(blocks[b].space->num_classes());
            function_values(*blocks[b].space, e.outputs, f, v.data());
            std::vector<LPEntry> col{{norm[b], 1}};
            for (auto& lk : links[b]) col.push_back({lk.base + static_cast<int>(lk.map.apply(v.data())), lk.sign});
            cols.add(std::move(col), 0);
        }
    LPProblem p;
    p.rhs = rhs;
    p.sense.assign(rhs.size(), RowSense::eq);
    p.columns = &cols;
    return solve_lp(p).status == LPStatus::optimal;
}

EmpiricalModel witness_model(const SpacePtr& s, const SolipsisticWitness& w, const Outputs& o) {
    if (!check_solipsistic_witness(*s, w)) throw std::invalid_argument("witness model: not a solipsistic witness");
    if (o.at(w.event) < 2) throw std::invalid_argument("witness model: the witness event needs two outputs");
    Cover c = solipsistic_cover(*s);
    EmpiricalModel e{s, o, c, {}};
    for (Lowerset l : c.opens) {
        auto sub = lowerset_space(*s, l);
        auto f = build_function(sub, o, [&](const History& h, int xi) { return h == w.h && xi == w.event ? 1 : 0; });
        if (!f) throw std::logic_error("witness model: indicator is not causal on " + lowerset_string(*s, l));
        e.components.push_back(delta_distribution(s, l, *f));
    }
    return e;
}

EmpiricalModel deterministic_model(const SpacePtr& s, const Family& family, const Outputs& o) {
    if (!family_is_compatible(s, family)) throw std::invalid_argument("deterministic model: family is not compatible");
    std::vector<Lowerset> opens;
    for (auto& sec : family) opens.push_back(sec.open);
    Cover c = make_cover(opens);
    EmpiricalModel e{s, o, c, {}};
    for (Lowerset l : c.opens)
        for (auto& sec : family)
            if (sec.open == l) {
                e.components.push_back(delta_distribution(s, l, sec.f));
                break;
            }
    return e;
}

bool is_deterministic(const EmpiricalModel& e) {
    return std::all_of(e.components.begin(), e.components.end(), [](const CausalDistribution& d) {
        return d.weights.size() == 1 && d.weights.begin()->second == 1;
    });
}

bool is_globally_deterministic(const EmpiricalModel& e) {
    if (!is_deterministic(e)) return false;
    Family fam;
    for (auto& d : e.components) fam.push_back(Section{d.open, d.function(d.weights.begin()->first)});
    if (!family_is_compatible(e.space, fam)) return false;
    return glue_compatible_family(e.space, fam).has_value();
}

Rational parity_sum(const EmpiricalModel& e, const std::vector<std::string>& rows) {
    std::vector<Lowerset> opens;
    for (auto& code : rows) {
        opens.push_back(ext_lowerset(*e.space, from_code(code)));
    }
    return parity_sum(e, opens);
}

Rational parity_sum(const EmpiricalModel& e, const std::vector<Lowerset>& opens) {
    Rational sum = 0;
    for (Lowerset l : opens) {
        const auto& d = e.component(l);
        for (auto& [idx, w] : d.weights) {
            const auto f = d.function(idx);
            int par = 0;
            for (auto x : f.values()) par += x;
            if (par % 2 == 0)
                sum += w;
            else
                sum -= w;
        }
    }
    return sum;
}

// by domain size, then domain (earlier events undefined first), then values
static std::string column_sort_key(const std::string& c) {
    std::string k = std::to_string(std::count_if(c.begin(), c.end(), [](char x) { return x != '_'; }));
    for (char x : c) k += x == '_' ? '0' : '1';
    return k + c;
}

std::string model_csv(const EmpiricalModel& e) {
    std::ostringstream os;
    auto table = model_table(e);
    if (!table) {
        os << "open,function,weight\n";
        for (auto& d : e.components)
            for (auto& [idx, w] : d.weights)
                os << '"' << lowerset_string(*e.space, d.open) << "\",\"" << function_key(d.function(idx)) << "\","
                   << w.get_str() << "\n";
        return os.str();
    }
    const int n = e.space->num_events();
    std::vector<std::string> cols;
    std::vector<std::vector<std::string>> per_row;
    std::vector<std::string> row_keys;
    for (auto& d : e.components) {
        History t = *principal_top(*e.space, d.open);
        std::vector<std::string> mine;
        std::function<void(int, std::string)> rec = [&](int ev, std::string acc) {
            if (ev == n) {
                mine.push_back(acc);
                return;
            }
            if (!t.defined(ev)) return rec(ev + 1, acc + '_');
            for (int x = 0; x < e.outputs[ev]; ++x) rec(ev + 1, acc + static_cast<char>('0' + x));
        };
        rec(0, "");
        cols.insert(cols.end(), mine.begin(), mine.end());
        per_row.push_back(mine);
        row_keys.push_back(to_code(t, n));
    }
    std::sort(cols.begin(), cols.end(),
              [](const std::string& a, const std::string& b) { return column_sort_key(a) < column_sort_key(b); });
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    os << "inputs";
    for (auto& c : cols) os << "," << c;
    os << "\n";
    std::vector<std::size_t> order(row_keys.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return column_sort_key(row_keys[a]) < column_sort_key(row_keys[b]);
    });
    for (std::size_t i : order) {
        os << row_keys[i];
        const auto& row = table->at(row_keys[i]);
        for (auto& c : cols) {
            os << ",";
            if (std::find(per_row[i].begin(), per_row[i].end(), c) == per_row[i].end()) continue;
            auto it = row.find(c);
            os << (it == row.end() ? std::string("0") : it->second.get_str());
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace caus
