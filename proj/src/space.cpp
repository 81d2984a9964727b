#include "caus/space.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace caus {

namespace {

struct UnionFind {
    std::vector<int> p;
    explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
    void unite(int a, int b) {
        a = find(a), b = find(b);
        if (a != b) p[std::max(a, b)] = std::min(a, b);
    }
};

std::vector<History> sorted_unique(std::vector<History> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

}  // namespace

SpacePtr HistorySpace::make(std::vector<std::string> names, std::vector<int> inputs, std::vector<History> histories) {
    if (names.size() != inputs.size()) throw std::invalid_argument("space: names and inputs differ in size");
    if (names.size() > kMaxEvents) throw std::invalid_argument("space: too many events");
    for (int x : inputs)
        if (x < 1 || x > 100) throw std::invalid_argument("space: input set sizes must be in 1..100");
    const EventSet all = names.empty() ? 0 : (EventSet(1) << names.size()) - 1;
    for (auto& h : histories) {
        if (h.empty()) throw std::invalid_argument("space: empty history");
        if (h.dom() & ~all) throw std::invalid_argument("space: history outside the event set");
        for (int e = 0; e < static_cast<int>(names.size()); ++e)
            if (h.defined(e) && h[e] >= inputs[e]) throw std::invalid_argument("space: input value out of range");
    }
    std::shared_ptr<HistorySpace> s(new HistorySpace());
    s->names_ = std::move(names);
    s->inputs_ = std::move(inputs);
    s->hist_ = sorted_unique(std::move(histories));
    s->build();
    return s;
}

void HistorySpace::build() {
    ext_ = ext_closure(hist_);
    const int n = size(), m = ext_size();
    for (int i = 0; i < n; ++i) hist_index_[hist_[i].key()] = i;
    for (int k = 0; k < m; ++k) ext_index_[ext_[k].key()] = k;
    ext_hist_.assign(m, -1);
    for (int k = 0; k < m; ++k) ext_hist_[k] = index_of(ext_[k]);

    tips_.assign(n, 0);
    for (int i = 0; i < n; ++i) {
        EventSet covered = 0;
        for (int j = 0; j < n; ++j)
            if (lt(hist_[j], hist_[i])) covered |= hist_[j].dom();
        tips_[i] = hist_[i].dom() & ~covered;
    }

    class_of_.assign(std::size_t(n) * kMaxEvents, -1);
    for (int e = 0; e < num_events(); ++e) {
        std::vector<int> t;
        for (int i = 0; i < n; ++i)
            if ((tips_[i] >> e) & 1u) t.push_back(i);
        UnionFind uf(static_cast<int>(t.size()));
        for (std::size_t a = 0; a < t.size(); ++a)
            for (std::size_t b = a + 1; b < t.size(); ++b)
                if (compatible(hist_[t[a]], hist_[t[b]])) uf.unite(int(a), int(b));
        std::map<int, std::vector<int>> blocks;
        for (std::size_t a = 0; a < t.size(); ++a) blocks[uf.find(int(a))].push_back(t[a]);
        for (auto& [root, members] : blocks) {
            int c = static_cast<int>(cls_event_.size());
            cls_event_.push_back(e);
            for (int i : members) class_of_[std::size_t(i) * kMaxEvents + e] = c;
            cls_members_.push_back(members);
        }
    }

    ext_class_.assign(std::size_t(m) * kMaxEvents, -1);
    for (int k = 0; k < m; ++k)
        for (int i = 0; i < n; ++i) {
            if (!leq(hist_[i], ext_[k])) continue;
            for (int e = 0; e < num_events(); ++e)
                if ((tips_[i] >> e) & 1u) ext_class_[std::size_t(k) * kMaxEvents + e] = class_of(i, e);
        }
}

int HistorySpace::event_index(const std::string& name) const {
    for (int e = 0; e < num_events(); ++e)
        if (names_[e] == name) return e;
    return -1;
}

int HistorySpace::index_of(const History& h) const {
    auto it = hist_index_.find(h.key());
    return it == hist_index_.end() ? -1 : it->second;
}

int HistorySpace::ext_index_of(const History& h) const {
    auto it = ext_index_.find(h.key());
    return it == ext_index_.end() ? -1 : it->second;
}

std::vector<int> HistorySpace::classes_of_event(int e) const {
    std::vector<int> out;
    for (int c = 0; c < num_classes(); ++c)
        if (cls_event_[c] == e) out.push_back(c);
    return out;
}

std::vector<int> HistorySpace::maximal_ext() const {
    std::vector<int> out;
    for (int k = 0; k < ext_size(); ++k) {
        bool top = true;
        for (int j = 0; j < ext_size() && top; ++j)
            if (lt(ext_[k], ext_[j])) top = false;
        if (top) out.push_back(k);
    }
    return out;
}

std::vector<int> HistorySpace::maximal_histories() const {
    std::vector<int> out;
    for (int i = 0; i < size(); ++i) {
        bool top = true;
        for (int j = 0; j < size() && top; ++j)
            if (lt(hist_[i], hist_[j])) top = false;
        if (top) out.push_back(i);
    }
    return out;
}

std::vector<int> HistorySpace::downset(const History& k) const {
    std::vector<int> out;
    for (int i = 0; i < size(); ++i)
        if (leq(hist_[i], k)) out.push_back(i);
    return out;
}

std::vector<History> ext_closure(const std::vector<History>& histories) {
    std::vector<History> cur = sorted_unique(histories);
    std::unordered_set<std::uint64_t> seen;
    for (auto& h : cur) seen.insert(h.key());
    for (std::size_t i = 0; i < cur.size(); ++i)
        for (std::size_t j = 0; j < i; ++j) {
            if (!compatible(cur[i], cur[j])) continue;
            History u = join(cur[i], cur[j]);
            if (seen.insert(u.key()).second) cur.push_back(u);
        }
    std::sort(cur.begin(), cur.end());
    return cur;
}

ValidationReport validate_space(const HistorySpace& s) {
    ValidationReport r;
    for (int i = 0; i < s.size(); ++i) {
        const History& h = s.histories()[i];
        if (s.tips(i) != 0) continue;
        Violation v{h, std::nullopt, "history is a join of extended histories strictly below it"};
        // the running join of everything strictly below h reaches h at some step
        std::vector<History> below;
        for (auto& k : s.ext())
            if (lt(k, h)) below.push_back(k);
        History acc;
        for (std::size_t t = 0; t < below.size(); ++t) {
            History nxt = t == 0 ? below[0] : join(acc, below[t]);
            if (nxt == h && t > 0) {
                v.decomposition = std::make_pair(acc, below[t]);
                break;
            }
            acc = nxt;
        }
        r.ok = false;
        r.violations.push_back(v);
    }
    return r;
}

EventSet tips(const HistorySpace& s, const History& h) {
    int i = s.index_of(h);
    if (i < 0) throw std::invalid_argument("tips: history not in space");
    return s.tips(i);
}

int ConstraintClasses::total() const {
    int t = 0;
    for (auto& b : blocks) t += static_cast<int>(b.size());
    return t;
}

ConstraintClasses constraint_classes(const HistorySpace& s) {
    ConstraintClasses cc;
    cc.blocks.resize(s.num_events());
    for (int c = 0; c < s.num_classes(); ++c) cc.blocks[s.class_event(c)].push_back(s.class_members(c));
    return cc;
}

bool is_tight(const HistorySpace& s) {
    for (int c = 0; c < s.num_classes(); ++c)
        if (s.class_members(c).size() > 1) return false;
    return true;
}

bool is_causally_complete(const HistorySpace& s) {
    for (int i = 0; i < s.size(); ++i)
        if (popcount(s.tips(i)) != 1) return false;
    return true;
}

std::vector<History> total_assignments(const HistorySpace& s) {
    std::vector<History> out;
    const int n = s.num_events();
    if (n == 0) return out;
    History h;
    for (int e = 0; e < n; ++e) h.set(e, 0);
    while (true) {
        out.push_back(h);
        int e = n - 1;
        while (e >= 0 && h[e] + 1 == s.inputs()[e]) h.set(e--, 0);
        if (e < 0) break;
        h.set(e, h[e] + 1);
    }
    return out;
}

int total_index(const HistorySpace& s, const History& k) {
    int idx = 0;
    for (int e = 0; e < s.num_events(); ++e) idx = idx * s.inputs()[e] + k[e];
    return idx;
}

bool has_free_choice(const HistorySpace& s) {
    auto maxk = s.maximal_ext();
    std::size_t total = 1;
    for (int x : s.inputs()) total *= x;
    if (maxk.size() != total) return false;
    for (int k : maxk)
        if (s.ext()[k].dom() != s.all_events()) return false;
    return true;
}

static void assignments_on(EventSet d, const std::vector<int>& inputs, std::vector<History>& out) {
    std::vector<int> evs;
    for (int e = 0; e < static_cast<int>(inputs.size()); ++e)
        if ((d >> e) & 1u) evs.push_back(e);
    History h;
    for (int e : evs) h.set(e, 0);
    while (true) {
        out.push_back(h);
        int t = static_cast<int>(evs.size()) - 1;
        while (t >= 0 && h[evs[t]] + 1 == inputs[evs[t]]) h.set(evs[t--], 0);
        if (t < 0) break;
        h.set(evs[t], h[evs[t]] + 1);
    }
}

SpacePtr induced_space(const CausalOrder& o, const std::vector<int>& inputs) {
    if (static_cast<int>(inputs.size()) != o.size()) throw std::invalid_argument("induced_space: inputs do not cover events");
    std::vector<History> hs;
    for (int w = 0; w < o.size(); ++w) assignments_on(o.past(w), inputs, hs);
    return HistorySpace::make(o.names(), inputs, hs);
}

SpacePtr induced_space(const CausalOrder& o, int inputs) { return induced_space(o, std::vector<int>(o.size(), inputs)); }

static void same_frame(const HistorySpace& a, const HistorySpace& b) {
    if (a.names() != b.names() || a.inputs() != b.inputs())
        throw std::invalid_argument("spaces have different events or inputs");
}

bool space_leq(const HistorySpace& a, const HistorySpace& b) {
    same_frame(a, b);
    for (auto& k : b.ext())
        if (a.ext_index_of(k) < 0) return false;
    return true;
}

bool same_ext(const HistorySpace& a, const HistorySpace& b) { return a.names() == b.names() && a.ext() == b.ext(); }

static std::vector<int> merge_events(std::vector<std::string>& names, std::vector<int>& inputs, const HistorySpace& b,
                                     bool allow_shared) {
    std::vector<int> map(b.num_events());
    for (int e = 0; e < b.num_events(); ++e) {
        auto it = std::find(names.begin(), names.end(), b.names()[e]);
        if (it != names.end()) {
            if (!allow_shared) throw std::invalid_argument("composition: overlapping events");
            int g = static_cast<int>(it - names.begin());
            if (inputs[g] != b.inputs()[e]) throw std::invalid_argument("composition: inconsistent input sets");
            map[e] = g;
        } else {
            map[e] = static_cast<int>(names.size());
            names.push_back(b.names()[e]);
            inputs.push_back(b.inputs()[e]);
        }
    }
    if (names.size() > kMaxEvents) throw std::invalid_argument("composition: too many events");
    return map;
}

static History relabel(const History& h, const std::vector<int>& map) {
    History out;
    for (int e = 0; e < static_cast<int>(map.size()); ++e)
        if (h.defined(e)) out.set(map[e], h[e]);
    return out;
}

SpacePtr parallel_compose(const HistorySpace& a, const HistorySpace& b) {
    auto names = a.names();
    auto inputs = a.inputs();
    auto map = merge_events(names, inputs, b, false);
    std::vector<History> hs = a.histories();
    for (auto& h : b.histories()) hs.push_back(relabel(h, map));
    return HistorySpace::make(names, inputs, hs);
}

SpacePtr sequential_compose(const HistorySpace& a, const HistorySpace& b) {
    auto names = a.names();
    auto inputs = a.inputs();
    auto map = merge_events(names, inputs, b, false);
    std::vector<History> hs = a.histories();
    for (int k : a.maximal_ext())
        for (auto& h : b.histories()) hs.push_back(join(a.ext()[k], relabel(h, map)));
    return HistorySpace::make(names, inputs, hs);
}

SpacePtr conditional_sequential_compose(const HistorySpace& a, const std::map<std::string, SpacePtr>& branches) {
    auto names = a.names();
    auto inputs = a.inputs();
    std::vector<History> hs = a.histories();
    std::vector<std::pair<History, std::pair<const HistorySpace*, std::vector<int>>>> parts;
    for (int k : a.maximal_ext()) {
        auto code = to_code(a.ext()[k], a.num_events());
        auto it = branches.find(code);
        if (it == branches.end()) throw std::invalid_argument("conditional composition: no branch for " + code);
        for (auto& n : it->second->names())
            if (a.event_index(n) >= 0) throw std::invalid_argument("composition: overlapping events");
        auto map = merge_events(names, inputs, *it->second, true);
        parts.push_back({a.ext()[k], {it->second.get(), map}});
    }
    for (auto& [k, bm] : parts)
        for (auto& h : bm.first->histories()) hs.push_back(join(k, relabel(h, bm.second)));
    return HistorySpace::make(names, inputs, hs);
}

std::vector<History> prime_elements(const std::vector<History>& ext) {
    std::vector<History> out;
    for (auto& x : ext) {
        EventSet covered = 0;
        for (auto& y : ext)
            if (lt(y, x)) covered |= y.dom();
        if (covered != x.dom()) out.push_back(x);
    }
    return out;
}

std::vector<SpacePtr> enumerate_causal_completions(const HistorySpace& s, int bound) {
    if (s.ext_size() > bound) throw std::invalid_argument("completions: bound exceeded");
    std::set<std::vector<std::uint64_t>> visited;
    std::vector<SpacePtr> found;
    auto signature = [](const std::vector<History>& ext) {
        std::vector<std::uint64_t> sig;
        for (auto& h : ext) sig.push_back(h.key());
        return sig;
    };
    std::function<void(const std::vector<History>&)> rec = [&](const std::vector<History>& ext) {
        if (!visited.insert(signature(ext)).second) return;
        auto sp = HistorySpace::make(s.names(), s.inputs(), prime_elements(ext));
        if (is_causally_complete(*sp)) {
            found.push_back(sp);
            return;
        }
        for (int i = 0; i < sp->size(); ++i) {
            EventSet t = sp->tips(i);
            if (popcount(t) < 2) continue;
            const History& h = sp->histories()[i];
            for (int e = 0; e < sp->num_events(); ++e) {
                if (!((t >> e) & 1u)) continue;
                History sub = h.restrict(h.dom() & ~(EventSet(1) << e));
                if (sub.empty()) continue;
                auto grown = ext;
                grown.push_back(sub);
                auto closed = ext_closure(grown);
                if (static_cast<int>(closed.size()) > bound) throw std::invalid_argument("completions: bound exceeded");
                rec(closed);
            }
        }
    };
    rec(s.ext());

    std::vector<History> top;
    for (int k : s.maximal_ext()) top.push_back(s.ext()[k]);
    std::vector<SpacePtr> ok;
    for (auto& c : found) {
        std::vector<History> ctop;
        for (int k : c->maximal_ext()) ctop.push_back(c->ext()[k]);
        if (ctop == top && validate_space(*c).ok) ok.push_back(c);
    }
    // completions are the complete spaces adding the least: maximal under <=
    std::vector<SpacePtr> out;
    for (auto& c : ok) {
        bool dominated = false;
        for (auto& d : ok)
            if (!same_ext(*c, *d) && space_leq(*c, *d)) dominated = true;
        bool dup = false;
        for (auto& d : out)
            if (same_ext(*c, *d)) dup = true;
        if (!dominated && !dup) out.push_back(c);
    }
    std::sort(out.begin(), out.end(), [](const SpacePtr& a, const SpacePtr& b) { return a->ext() < b->ext(); });
    return out;
}

SpacePtr subspace(const HistorySpace& s, const std::vector<int>& indices) {
    std::vector<History> hs;
    for (int i : indices) hs.push_back(s.histories().at(i));
    return HistorySpace::make(s.names(), s.inputs(), hs);
}

bool is_history_lowerset(const HistorySpace& s, const std::vector<int>& indices) {
    std::vector<char> in(s.size(), 0);
    for (int i : indices) in.at(i) = 1;
    for (int i : indices)
        for (int j = 0; j < s.size(); ++j)
            if (!in[j] && lt(s.histories()[j], s.histories()[i])) return false;
    return true;
}

SpacePtr lowerset_subspace(const HistorySpace& s, const std::vector<History>& lambda) {
    std::vector<int> idx;
    for (auto& h : lambda) {
        int i = s.index_of(h);
        if (i < 0) throw std::invalid_argument("lowerset_subspace: history not in space");
        idx.push_back(i);
    }
    if (!is_history_lowerset(s, idx)) throw std::invalid_argument("lowerset_subspace: not a lowerset");
    return subspace(s, idx);
}

SpacePtr permute_events(const HistorySpace& s, const std::vector<std::string>& order) {
    if (order.size() != s.names().size()) throw std::invalid_argument("permute_events: wrong event count");
    std::vector<int> map(s.num_events());
    std::vector<int> inputs(s.num_events());
    for (int e = 0; e < s.num_events(); ++e) {
        auto it = std::find(order.begin(), order.end(), s.names()[e]);
        if (it == order.end()) throw std::invalid_argument("permute_events: unknown event");
        map[e] = static_cast<int>(it - order.begin());
        inputs[map[e]] = s.inputs()[e];
    }
    std::vector<History> hs;
    for (auto& h : s.histories()) hs.push_back(relabel(h, map));
    return HistorySpace::make(order, inputs, hs);
}

std::string space_dot(const HistorySpace& s, bool with_ext) {
    std::ostringstream os;
    const auto& pts = with_ext ? s.ext() : s.histories();
    auto label = [&](const History& h) { return to_string(h, s.names()); };
    os << "digraph space {\n  rankdir=BT;\n";
    for (std::size_t k = 0; k < pts.size(); ++k) {
        int i = s.index_of(pts[k]);
        os << "  n" << k << " [label=\"" << label(pts[k]);
        if (i >= 0) {
            os << "\\ntips:";
            for (int e = 0; e < s.num_events(); ++e)
                if ((s.tips(i) >> e) & 1u) os << " " << s.names()[e];
            os << "\"];\n";
        } else {
            os << "\", style=dashed];\n";
        }
    }
    for (std::size_t a = 0; a < pts.size(); ++a)
        for (std::size_t b = 0; b < pts.size(); ++b) {
            if (!lt(pts[a], pts[b])) continue;
            bool cover = true;
            for (std::size_t c = 0; c < pts.size() && cover; ++c)
                if (lt(pts[a], pts[c]) && lt(pts[c], pts[b])) cover = false;
            if (cover) os << "  n" << a << " -> n" << b << ";\n";
        }
    os << "}\n";
    return os.str();
}

}  // namespace caus
