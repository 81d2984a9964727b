#include "caus/function.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <unordered_map>


namespace caus {

CausalFunction::CausalFunction(SpacePtr s, Outputs o, std::vector<std::uint8_t> values)
    : space_(std::move(s)), out_(std::move(o)), values_(std::move(values)) {
    if (!space_) throw std::invalid_argument("function: null space");
    if (static_cast<int>(out_.size()) != space_->num_events())
        throw std::invalid_argument("function: one output size per event expected");
    for (int x : out_)
        if (x < 1 || x > 255) throw std::invalid_argument("function: output set sizes must be in 1..255");
    if (static_cast<int>(values_.size()) != space_->num_classes())
        throw std::invalid_argument("function: one value per tip class expected");
    for (int c = 0; c < space_->num_classes(); ++c)
        if (values_[c] >= out_[space_->class_event(c)]) throw std::invalid_argument("function: output out of range");
}

int CausalFunction::at(int hist, int e) const {
    int c = space_->class_of(hist, e);
    if (c < 0) throw std::invalid_argument("function: event is not a tip of the history");
    return values_[c];
}

mpz_class count_causal_functions(const HistorySpace& s, const Outputs& o) {
    mpz_class n = 1;
    for (int c = 0; c < s.num_classes(); ++c) n *= o.at(s.class_event(c));
    return n;
}

std::uint64_t count_causal_functions_u64(const HistorySpace& s, const Outputs& o) {
    mpz_class n = count_causal_functions(s, o);
    if (n > mpz_class(std::numeric_limits<std::int64_t>::max())) throw std::overflow_error("too many causal functions");
    return std::stoull(n.get_str());
}

static void decode(const HistorySpace& s, const Outputs& o, std::uint64_t index, std::uint8_t* values) {
    for (int c = s.num_classes() - 1; c >= 0; --c) {
        std::uint64_t r = o[s.class_event(c)];
        values[c] = static_cast<std::uint8_t>(index % r);
        index /= r;
    }
}

void function_values(const HistorySpace& s, const Outputs& o, std::uint64_t index, std::uint8_t* values) {
    decode(s, o, index, values);
}

CausalFunction function_at(const SpacePtr& s, const Outputs& o, std::uint64_t index) {
    if (index >= count_causal_functions_u64(*s, o)) throw std::out_of_range("function index");
    std::vector<std::uint8_t> v(s->num_classes());
    decode(*s, o, index, v.data());
    return CausalFunction(s, o, std::move(v));
}

std::uint64_t function_index(const CausalFunction& f) {
    std::uint64_t idx = 0;
    const auto& s = *f.space();
    for (int c = 0; c < s.num_classes(); ++c) idx = idx * f.outputs()[s.class_event(c)] + f.value(c);
    return idx;
}

void for_each_function(const SpacePtr& s, const Outputs& o, const std::function<void(const CausalFunction&)>& fn) {
    std::uint64_t n = count_causal_functions_u64(*s, o);
    for (std::uint64_t i = 0; i < n; ++i) fn(function_at(s, o, i));
}

std::string function_key(const CausalFunction& f) {
    const auto& s = *f.space();
    std::string out;
    for (int c = 0; c < s.num_classes(); ++c) {
        if (c) out += ';';
        out += s.names()[s.class_event(c)] + "|" + to_string(s.histories()[s.class_members(c)[0]], s.names()) + "=" +
               std::to_string(f.value(c));
    }
    return out;
}

ExtendedFunction extend(const CausalFunction& f) {
    const auto& s = *f.space();
    ExtendedFunction F{f.space(), f.outputs(), std::vector<History>(s.ext_size())};
    for (int k = 0; k < s.ext_size(); ++k)
        for (int e = 0; e < s.num_events(); ++e)
            if (s.ext()[k].defined(e)) F.out[k].set(e, f.ext_at(k, e));
    return F;
}

static bool domains_match(const ExtendedFunction& F) {
    const auto& ext = F.space->ext();
    if (F.out.size() != ext.size()) return false;
    for (std::size_t k = 0; k < ext.size(); ++k)
        if (F.out[k].dom() != ext[k].dom()) return false;
    return true;
}

bool is_consistent(const ExtendedFunction& F) {
    if (!domains_match(F)) return false;
    const auto& s = *F.space;
    const int m = s.ext_size();
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b) {
            if (!compatible(s.ext()[a], s.ext()[b])) continue;
            if (!compatible(F.out[a], F.out[b])) return false;
            int j = s.ext_index_of(join(s.ext()[a], s.ext()[b]));
            if (F.out[j] != join(F.out[a], F.out[b])) return false;
        }
    return true;
}

bool is_continuous(const ExtendedFunction& F) {
    if (!domains_match(F)) return false;
    const auto& ext = F.space->ext();
    const int m = static_cast<int>(ext.size());
    for (int lo = 0; lo < m; ++lo)
        for (int hi = 0; hi < m; ++hi) {
            if (!lt(ext[lo], ext[hi])) continue;
            bool covering = true;
            for (int mid = 0; mid < m && covering; ++mid)
                if (lt(ext[lo], ext[mid]) && lt(ext[mid], ext[hi])) covering = false;
            if (covering && !leq(F.out[lo], F.out[hi])) return false;
        }
    return true;
}

CausalFunction prime(const ExtendedFunction& F) {
    if (!domains_match(F)) throw std::invalid_argument("prime: domains do not match Ext");
    const auto& s = *F.space;
    std::vector<std::uint8_t> v(s.num_classes());
    for (int c = 0; c < s.num_classes(); ++c) {
        int k = s.ext_index_of(s.histories()[s.class_members(c)[0]]);
        int x = F.out[k][s.class_event(c)];
        if (x < 0 || x >= F.outputs[s.class_event(c)]) throw std::invalid_argument("prime: output out of range");
        v[c] = static_cast<std::uint8_t>(x);
    }
    CausalFunction f(F.space, F.outputs, std::move(v));
    if (extend(f).out != F.out) throw std::invalid_argument("prime: extended function is not consistent");
    return f;
}

History embed(const History& h, const HistorySpace& from, const HistorySpace& to) {
    History r;
    for (int e = 0; e < from.num_events(); ++e) {
        if (!h.defined(e)) continue;
        int t = to.event_index(from.names()[e]);
        if (t < 0) throw std::invalid_argument("embed: event " + from.names()[e] + " missing");
        r.set(t, h[e]);
    }
    return r;
}

// keep only the events that exist in `to`
static History project(const History& h, const HistorySpace& from, const HistorySpace& to) {
    History r;
    for (int e = 0; e < from.num_events(); ++e) {
        if (!h.defined(e)) continue;
        int t = to.event_index(from.names()[e]);
        if (t >= 0) r.set(t, h[e]);
    }
    return r;
}

static Outputs outputs_by_name(const HistorySpace& target, const std::vector<const CausalFunction*>& sources) {
    Outputs o(target.num_events(), 0);
    for (int e = 0; e < target.num_events(); ++e) {
        for (auto* f : sources) {
            int i = f->space()->event_index(target.names()[e]);
            if (i >= 0) {
                o[e] = f->outputs()[i];
                break;
            }
        }
        if (o[e] == 0) throw std::invalid_argument("no output set for event " + target.names()[e]);
    }
    return o;
}

// Build a function on target whose value at (h, e) is read off through `value`;
// returns nothing when two members of one class disagree.
std::optional<CausalFunction> build_function(const SpacePtr& target, Outputs o,
                                            const std::function<int(const History&, int)>& value) {
    const auto& s = *target;
    std::vector<std::uint8_t> v(s.num_classes());
    for (int c = 0; c < s.num_classes(); ++c) {
        const int e = s.class_event(c);
        int first = -1;
        for (int i : s.class_members(c)) {
            int x = value(s.histories()[i], e);
            if (first < 0)
                first = x;
            else if (x != first)
                return std::nullopt;
        }
        v[c] = static_cast<std::uint8_t>(first);
    }
    return CausalFunction(target, std::move(o), std::move(v));
}

// value of Ext(f) at a history/event of another space, mapped by lift
static int ext_value(const CausalFunction& f, const History& k, const std::string& event) {
    const auto& s = *f.space();
    int ki = s.ext_index_of(k);
    if (ki < 0) throw std::invalid_argument("history " + to_string(k, s.names()) + " is not in Ext");
    int e = s.event_index(event);
    if (e < 0 || !k.defined(e)) throw std::invalid_argument("event " + event + " not in the history domain");
    return f.ext_at(ki, e);
}

std::optional<CausalFunction> arises_as(const CausalFunction& g, const SpacePtr& s) {
    return build_function(s, outputs_by_name(*s, {&g}), [&](const History& h, int e) {
        return ext_value(g, embed(h, *s, *g.space()), s->names()[e]);
    });
}

CausalFunction restrict_function(const CausalFunction& f, const SpacePtr& sub) {
    for (auto& h : sub->histories())
        if (f.space()->index_of(embed(h, *sub, *f.space())) < 0)
            throw std::invalid_argument("restrict: history not in the space");
    auto r = arises_as(f, sub);
    if (!r) throw std::logic_error("restrict: classes of the subspace are not respected");
    return *r;
}

JointIO to_joint_io(const CausalFunction& f) {
    const auto& s = *f.space();
    JointIO F;
    F.n = s.num_events();
    for (auto& k : total_assignments(s)) {
        int ki = s.ext_index_of(k);
        if (ki < 0) throw std::invalid_argument("joint IO: space lacks free choice");
        History out;
        for (int e = 0; e < s.num_events(); ++e) out.set(e, f.ext_at(ki, e));
        F.rows.push_back(out);
    }
    return F;
}

std::optional<CausalFunction> try_from_joint_io(const JointIO& F, const SpacePtr& s, const Outputs& o) {
    if (!has_free_choice(*s)) throw std::invalid_argument("joint IO: space lacks free choice");
    auto totals = total_assignments(*s);
    if (F.n != s->num_events() || F.rows.size() != totals.size()) throw std::invalid_argument("joint IO: wrong shape");
    for (auto& r : F.rows)
        for (int e = 0; e < F.n; ++e)
            if (r[e] < 0 || r[e] >= o.at(e)) throw std::invalid_argument("joint IO: output out of range");
    bool bad = false;
    auto f = build_function(s, o, [&](const History& h, int e) {
        int x = -1;
        for (std::size_t t = 0; t < totals.size(); ++t) {
            if (!leq(h, totals[t])) continue;
            if (x < 0)
                x = F.rows[t][e];
            else if (x != F.rows[t][e])
                bad = true;
        }
        if (x < 0) bad = true;
        return std::max(x, 0);
    });
    if (!f || bad) return std::nullopt;
    if (!(to_joint_io(*f) == F)) return std::nullopt;
    return f;
}

CausalFunction from_joint_io(const JointIO& F, const SpacePtr& s, const Outputs& o) {
    auto f = try_from_joint_io(F, s, o);
    if (!f) throw std::invalid_argument("joint IO function is not causal for this space");
    return *f;
}

bool joint_io_is_causal(const JointIO& F, const SpacePtr& s, const Outputs& o) {
    return try_from_joint_io(F, s, o).has_value();
}

std::optional<InseparabilityWitness> find_inseparability_witness(const CausalFunction& f) {
    const auto& s = *f.space();
    const auto& ext = s.ext();
    for (int k = 0; k < s.ext_size(); ++k) {
        const EventSet d = ext[k].dom();
        if (popcount(d) < 2) continue;
        InseparabilityWitness w{ext[k], {}};
        bool all = true;
        for (int om = 0; om < s.num_events() && all; ++om) {
            if (!((d >> om) & 1u)) continue;
            const History base = ext[k].restrict(d & ~(EventSet(1) << om));
            bool found = false;
            for (int kp = 0; kp < s.ext_size() && !found; ++kp) {
                if (!leq(base, ext[kp])) continue;
                for (int xi = 0; xi < s.num_events() && !found; ++xi) {
                    if (xi == om || !((d >> xi) & 1u)) continue;
                    if (f.ext_at(k, xi) != f.ext_at(kp, xi)) {
                        w.entries.push_back({om, ext[kp], xi});
                        found = true;
                    }
                }
            }
            all = found;
        }
        if (all) return w;
    }
    return std::nullopt;
}

bool check_inseparability_witness(const CausalFunction& f, const InseparabilityWitness& w) {
    const auto& s = *f.space();
    int k = s.ext_index_of(w.k);
    if (k < 0) return false;
    const EventSet d = w.k.dom();
    EventSet seen = 0;
    for (auto& en : w.entries) {
        if (en.event < 0 || en.event >= s.num_events() || !((d >> en.event) & 1u)) return false;
        seen |= EventSet(1) << en.event;
        if (!leq(w.k.restrict(d & ~(EventSet(1) << en.event)), en.k_prime)) return false;
        if (en.xi == en.event || en.xi < 0 || !((d >> en.xi) & 1u)) return false;
        int kp = s.ext_index_of(en.k_prime);
        if (kp < 0) return false;
        if (f.ext_at(k, en.xi) == f.ext_at(kp, en.xi)) return false;
    }
    return seen == d;
}

GroundingIndex::GroundingIndex(const HistorySpace& s) {
    const auto& ext = s.ext();
    std::vector<History> all;
    std::unordered_map<std::uint64_t, int> seen;
    for (auto& k : ext)
        for (EventSet d = k.dom(); d; d = (d - 1) & k.dom()) {
            History r = k.restrict(d);
            if (seen.emplace(r.key(), 0).second) all.push_back(r);
        }
    std::sort(all.begin(), all.end());
    for (std::size_t i = 0; i < all.size(); ++i) seen[all[i].key()] = static_cast<int>(i);
    nodes_.resize(all.size());
    for (std::size_t i = 0; i < all.size(); ++i) {
        const History& r = all[i];
        Node& n = nodes_[i];
        n.single = r.size() == 1;
        int first = -1;
        for (int k = 0; k < s.ext_size(); ++k) {
            if (!leq(r, ext[k])) continue;
            if (first < 0) {
                first = k;
                continue;
            }
            for (int e = 0; e < s.num_events(); ++e) {
                if (!r.defined(e)) continue;
                int c1 = s.ext_class(first, e), c2 = s.ext_class(k, e);
                if (c1 != c2) n.checks.emplace_back(c1, c2);
            }
        }
        std::sort(n.checks.begin(), n.checks.end());
        n.checks.erase(std::unique(n.checks.begin(), n.checks.end()), n.checks.end());
        if (!n.single)
            for (int e = 0; e < s.num_events(); ++e)
                if (r.defined(e)) {
                    History c = r;
                    c.unset(e);
                    n.children.push_back(seen.at(c.key()));
                }
    }
    for (auto& k : ext) ext_node_.push_back(seen.at(k.key()));
}

int GroundingIndex::first_ungrounded(const std::uint8_t* values, std::vector<char>& g) const {
    g.assign(nodes_.size(), 0);
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const Node& n = nodes_[i];
        bool ok = true;
        for (auto& [a, b] : n.checks)
            if (values[a] != values[b]) {
                ok = false;
                break;
            }
        if (ok && !n.single) {
            ok = false;
            for (int c : n.children)
                if (g[c]) {
                    ok = true;
                    break;
                }
        }
        g[i] = ok;
    }
    for (std::size_t k = 0; k < ext_node_.size(); ++k)
        if (!g[ext_node_[k]]) return static_cast<int>(k);
    return -1;
}

std::optional<History> ungrounded_history(const CausalFunction& f) {
    GroundingIndex idx(*f.space());
    std::vector<char> scratch;
    int k = idx.first_ungrounded(f.values().data(), scratch);
    if (k < 0) return std::nullopt;
    return f.space()->ext()[k];
}

bool is_separable(const CausalFunction& f) { return !ungrounded_history(f).has_value(); }

WitnessIndex::WitnessIndex(const HistorySpace& s) {
    const auto& ext = s.ext();
    for (int k = 0; k < s.ext_size(); ++k) {
        const EventSet d = ext[k].dom();
        if (popcount(d) < 2) continue;
        std::vector<Omega> oms;
        for (int om = 0; om < s.num_events(); ++om) {
            if (!((d >> om) & 1u)) continue;
            const History base = ext[k].restrict(d & ~(EventSet(1) << om));
            Omega o;
            for (int kp = 0; kp < s.ext_size(); ++kp) {
                if (!leq(base, ext[kp])) continue;
                for (int xi = 0; xi < s.num_events(); ++xi) {
                    if (xi == om || !((d >> xi) & 1u)) continue;
                    int c1 = s.ext_class(k, xi), c2 = s.ext_class(kp, xi);
                    if (c1 != c2) o.checks.push_back({c1, c2});
                }
            }
            oms.push_back(std::move(o));
        }
        per_k_.push_back(std::move(oms));
    }
}

bool WitnessIndex::has_witness(const std::uint8_t* values) const {
    for (auto& oms : per_k_) {
        bool all = true;
        for (auto& o : oms) {
            bool found = false;
            for (auto& c : o.checks)
                if (values[c.c1] != values[c.c2]) {
                    found = true;
                    break;
                }
            if (!found) {
                all = false;
                break;
            }
        }
        if (all) return true;
    }
    return false;
}

std::uint64_t count_with_witness(const SpacePtr& s, const Outputs& o) {
    const std::int64_t n = static_cast<std::int64_t>(count_causal_functions_u64(*s, o));
    const WitnessIndex idx(*s);
    const int classes = s->num_classes();
    std::uint64_t count = 0;
#pragma omp parallel reduction(+ : count)
    {
        std::vector<std::uint8_t> v(classes);
#pragma omp for schedule(static)
        for (std::int64_t i = 0; i < n; ++i) {
            decode(*s, o, static_cast<std::uint64_t>(i), v.data());
            if (idx.has_witness(v.data())) ++count;
        }
    }
    return count;
}

std::uint64_t count_separable_serial(const SpacePtr& s, const Outputs& o) {
    const std::uint64_t n = count_causal_functions_u64(*s, o);
    GroundingIndex idx(*s);
    std::vector<std::uint8_t> v(s->num_classes());
    std::vector<char> scratch;
    std::uint64_t count = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        decode(*s, o, i, v.data());
        if (idx.separable(v.data(), scratch)) ++count;
    }
    return count;
}

std::uint64_t count_separable(const SpacePtr& s, const Outputs& o) {
    const std::int64_t n = static_cast<std::int64_t>(count_causal_functions_u64(*s, o));
    const GroundingIndex idx(*s);
    const int classes = s->num_classes();
    std::uint64_t count = 0;
#pragma omp parallel reduction(+ : count)
    {
        std::vector<std::uint8_t> v(classes);
        std::vector<char> scratch;
#pragma omp for schedule(static)
        for (std::int64_t i = 0; i < n; ++i) {
            decode(*s, o, static_cast<std::uint64_t>(i), v.data());
            if (idx.separable(v.data(), scratch)) ++count;
        }
    }
    return count;
}

std::vector<std::uint64_t> separable_indices(const SpacePtr& s, const Outputs& o) {
    const std::int64_t n = static_cast<std::int64_t>(count_causal_functions_u64(*s, o));
    const GroundingIndex idx(*s);
    std::vector<char> hit(n, 0);
#pragma omp parallel
    {
        std::vector<std::uint8_t> v(s->num_classes());
        std::vector<char> scratch;
#pragma omp for schedule(static)
        for (std::int64_t i = 0; i < n; ++i) {
            decode(*s, o, static_cast<std::uint64_t>(i), v.data());
            hit[i] = idx.separable(v.data(), scratch);
        }
    }
    std::vector<std::uint64_t> out;
    for (std::int64_t i = 0; i < n; ++i)
        if (hit[i]) out.push_back(static_cast<std::uint64_t>(i));
    return out;
}

std::vector<std::uint64_t> separable_indices_bruteforce(const SpacePtr& s, const Outputs& o) {
    const std::uint64_t n = count_causal_functions_u64(*s, o);
    if (n > (std::uint64_t(1) << 26)) throw std::invalid_argument("brute force separability: space too large");
    std::vector<char> hit(n, 0);
    for (auto& comp : enumerate_causal_completions(*s)) {
        if (!validate_space(*comp).ok) throw std::logic_error("causal completion is not a valid space");
        Outputs oc = o;  // completions keep the event list
        for_each_function(comp, oc, [&](const CausalFunction& g) {
            auto f = arises_as(g, s);
            if (f) hit[function_index(*f)] = 1;
        });
    }
    std::vector<std::uint64_t> out;
    for (std::uint64_t i = 0; i < n; ++i)
        if (hit[i]) out.push_back(i);
    return out;
}

std::uint64_t count_separable_bruteforce(const SpacePtr& s, const Outputs& o) {
    return separable_indices_bruteforce(s, o).size();
}

ParallelFactors factor_parallel(const CausalFunction& f, const SpacePtr& a, const SpacePtr& b) {
    auto l = arises_as(f, a), r = arises_as(f, b);
    if (!l || !r) throw std::invalid_argument("factor_parallel: not a parallel composite");
    return {*l, *r};
}

CausalFunction compose_parallel(const CausalFunction& fa, const CausalFunction& fb, const SpacePtr& composite) {
    const auto& C = *composite;
    auto f = build_function(composite, outputs_by_name(C, {&fa, &fb}), [&](const History& h, int e) {
        const auto& name = C.names()[e];
        for (auto* part : {&fa, &fb}) {
            const auto& P = *part->space();
            if (P.event_index(name) < 0) continue;
            History hp = project(h, C, P);
            if (hp.size() != h.size()) continue;
            return ext_value(*part, hp, name);
        }
        throw std::invalid_argument("compose_parallel: history spans both factors");
    });
    if (!f) throw std::logic_error("compose_parallel: inconsistent classes");
    return *f;
}

SequentialFactors factor_conditional(const CausalFunction& f, const SpacePtr& a,
                                     const std::map<std::string, SpacePtr>& branches) {
    const auto& C = *f.space();
    auto first = arises_as(f, a);
    if (!first) throw std::invalid_argument("factor: first factor is inconsistent");
    SequentialFactors out{*first, {}};
    for (int k : a->maximal_ext()) {
        const History& kh = a->ext()[k];
        const std::string code = to_code(kh, a->num_events());
        auto it = branches.find(code);
        if (it == branches.end()) throw std::invalid_argument("factor: no branch for " + code);
        const SpacePtr& B = it->second;
        const History kc = embed(kh, *a, C);
        auto g = build_function(B, outputs_by_name(*B, {&f}), [&](const History& h, int e) {
            return ext_value(f, join(kc, embed(h, *B, C)), B->names()[e]);
        });
        if (!g) throw std::invalid_argument("factor: branch factor is inconsistent");
        out.branches.emplace(code, *g);
    }
    return out;
}

SequentialFactors factor_sequential(const CausalFunction& f, const SpacePtr& a, const SpacePtr& b) {
    std::map<std::string, SpacePtr> br;
    for (int k : a->maximal_ext()) br[to_code(a->ext()[k], a->num_events())] = b;
    return factor_conditional(f, a, br);
}

CausalFunction compose_sequential(const SequentialFactors& parts, const SpacePtr& composite) {
    const auto& C = *composite;
    const auto& A = *parts.first.space();
    std::vector<const CausalFunction*> all{&parts.first};
    for (auto& [code, g] : parts.branches) all.push_back(&g);
    auto f = build_function(composite, outputs_by_name(C, all), [&](const History& h, int e) {
        const auto& name = C.names()[e];
        History ha = project(h, C, A);
        if (A.event_index(name) >= 0) return ext_value(parts.first, ha, name);
        auto it = parts.branches.find(to_code(ha, A.num_events()));
        if (it == parts.branches.end()) throw std::invalid_argument("compose_sequential: no branch for history");
        const auto& g = it->second;
        return ext_value(g, project(h, C, *g.space()), name);
    });
    if (!f) throw std::logic_error("compose_sequential: inconsistent classes");
    return *f;
}

}  // namespace caus
