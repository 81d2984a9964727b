#include "caus/order.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <omp.h>

namespace caus {

const char* relation_name(Relation r) {
    switch (r) {
    case Relation::precedes: return "precedes";
    case Relation::succeeds: return "succeeds";
    case Relation::unrelated: return "unrelated";
    case Relation::indefinite: return "indefinite";
    case Relation::equal: return "equal";
    }
    return "?";
}

static std::vector<EventSet> close_past(std::vector<EventSet> past) {
    const int n = static_cast<int>(past.size());
    for (int j = 0; j < n; ++j) past[j] |= EventSet(1) << j;
    // Warshall on the "i <= j" relation, row j is past[j]
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            if ((past[j] >> k) & 1u) past[j] |= past[k];
    return past;
}

CausalOrder::CausalOrder(std::vector<std::string> names, std::vector<EventSet> past)
    : names_(std::move(names)), past_(close_past(std::move(past))) {
    if (names_.size() != past_.size()) throw std::invalid_argument("order: names and relation differ in size");
    if (names_.size() > 32) throw std::invalid_argument("order: at most 32 events");
    auto sorted = names_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("order: duplicate event name");
}

int CausalOrder::index_of(const std::string& name) const {
    for (int i = 0; i < size(); ++i)
        if (names_[i] == name) return i;
    return -1;
}

EventSet CausalOrder::future(int i) const {
    EventSet s = 0;
    for (int j = 0; j < size(); ++j)
        if (leq(i, j)) s |= EventSet(1) << j;
    return s;
}

std::vector<std::pair<int, int>> CausalOrder::pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < size(); ++i)
        for (int j = 0; j < size(); ++j)
            if (i != j && leq(i, j)) out.emplace_back(i, j);
    return out;
}

std::uint64_t CausalOrder::code() const {
    std::uint64_t c = 0;
    const int n = size();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (leq(i, j)) c |= std::uint64_t(1) << (i * n + j);
    return c;
}

CausalOrder make_order(const std::vector<std::string>& events, const std::vector<std::pair<int, int>>& pairs) {
    std::vector<EventSet> past(events.size(), 0);
    for (auto [i, j] : pairs) {
        if (i < 0 || j < 0 || i >= static_cast<int>(events.size()) || j >= static_cast<int>(events.size()))
            throw std::invalid_argument("order: unknown event id");
        past[j] |= EventSet(1) << i;
    }
    return CausalOrder(events, past);
}

CausalOrder make_order(const std::vector<std::string>& events,
                       const std::vector<std::pair<std::string, std::string>>& pairs) {
    auto find = [&](const std::string& s) {
        auto it = std::find(events.begin(), events.end(), s);
        if (it == events.end()) throw std::invalid_argument("order: unknown event " + s);
        return static_cast<int>(it - events.begin());
    };
    std::vector<std::pair<int, int>> ids;
    for (auto& [a, b] : pairs) ids.emplace_back(find(a), find(b));
    return make_order(events, ids);
}

CausalOrder discrete_order(const std::vector<std::string>& events) { return make_order(events, std::vector<std::pair<int, int>>{}); }

CausalOrder chain_order(const std::vector<std::vector<std::string>>& layers) {
    std::vector<std::string> names;
    std::vector<int> layer_of;
    for (std::size_t l = 0; l < layers.size(); ++l)
        for (auto& n : layers[l]) {
            names.push_back(n);
            layer_of.push_back(static_cast<int>(l));
        }
    std::vector<std::pair<int, int>> pairs;
    for (std::size_t i = 0; i < names.size(); ++i)
        for (std::size_t j = 0; j < names.size(); ++j)
            if (i != j && layer_of[i] <= layer_of[j]) pairs.emplace_back(int(i), int(j));
    return make_order(names, pairs);
}

CausalOrder indiscrete_order(const std::vector<std::string>& events) { return chain_order({events}); }

Relation classify_pair(const CausalOrder& o, int w, int x) {
    if (w < 0 || x < 0 || w >= o.size() || x >= o.size()) throw std::invalid_argument("classify: unknown event");
    if (w == x) return Relation::equal;
    bool a = o.leq(w, x), b = o.leq(x, w);
    if (a && b) return Relation::indefinite;
    if (a) return Relation::precedes;
    if (b) return Relation::succeeds;
    return Relation::unrelated;
}

bool is_definite(const CausalOrder& o) {
    for (int i = 0; i < o.size(); ++i)
        for (int j = i + 1; j < o.size(); ++j)
            if (o.leq(i, j) && o.leq(j, i)) return false;
    return true;
}

bool is_lowerset(const CausalOrder& o, EventSet s) {
    for (int j = 0; j < o.size(); ++j)
        if (((s >> j) & 1u) && (o.past(j) & ~s)) return false;
    return true;
}

std::vector<EventSet> lowersets(const CausalOrder& o) {
    // every lowerset is a union of principal downsets
    std::vector<EventSet> out{0};
    for (int j = 0; j < o.size(); ++j) {
        std::size_t m = out.size();
        for (std::size_t t = 0; t < m; ++t) {
            EventSet u = out[t] | o.past(j);
            if (std::find(out.begin(), out.end(), u) == out.end()) out.push_back(u);
        }
    }
    std::sort(out.begin(), out.end(), [](EventSet a, EventSet b) {
        return popcount(a) != popcount(b) ? popcount(a) < popcount(b) : a < b;
    });
    return out;
}

static void same_events(const CausalOrder& a, const CausalOrder& b) {
    if (a.names() != b.names()) throw std::invalid_argument("order: mismatched event sets");
}

bool order_leq(const CausalOrder& a, const CausalOrder& b) {
    same_events(a, b);
    for (int j = 0; j < a.size(); ++j)
        if (a.past(j) & ~b.past(j)) return false;
    return true;
}

CausalOrder order_join(const CausalOrder& a, const CausalOrder& b) {
    same_events(a, b);
    std::vector<EventSet> p(a.size());
    for (int j = 0; j < a.size(); ++j) p[j] = a.past(j) | b.past(j);
    return CausalOrder(a.names(), p);
}

CausalOrder order_meet(const CausalOrder& a, const CausalOrder& b) {
    same_events(a, b);
    std::vector<EventSet> p(a.size());
    for (int j = 0; j < a.size(); ++j) p[j] = a.past(j) & b.past(j);
    return CausalOrder(a.names(), p);
}

// is the relation with the given off-diagonal bits already transitive?
static bool transitive_code(int n, std::uint64_t code) {
    auto r = [&](int i, int j) { return i == j || ((code >> (i * n + j)) & 1u); };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (r(i, j))
                for (int k = 0; k < n; ++k)
                    if (r(j, k) && !r(i, k)) return false;
    return true;
}

static std::vector<std::pair<int, int>> off_diagonal(int n) {
    std::vector<std::pair<int, int>> cells;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) cells.emplace_back(i, j);
    return cells;
}

static CausalOrder from_mask(const std::vector<std::string>& events, const std::vector<std::pair<int, int>>& cells,
                             std::uint64_t mask) {
    std::vector<std::pair<int, int>> pairs;
    for (std::size_t b = 0; b < cells.size(); ++b)
        if ((mask >> b) & 1u) pairs.push_back(cells[b]);
    return make_order(events, pairs);
}

static std::uint64_t cells_to_code(int n, const std::vector<std::pair<int, int>>& cells, std::uint64_t mask) {
    std::uint64_t code = 0;
    for (std::size_t b = 0; b < cells.size(); ++b)
        if ((mask >> b) & 1u) code |= std::uint64_t(1) << (cells[b].first * n + cells[b].second);
    return code;
}

static void check_bound(const std::vector<std::string>& events, int bound) {
    if (static_cast<int>(events.size()) > bound) throw std::invalid_argument("enumerate_orders: bound exceeded");
    if (events.size() > 5) throw std::invalid_argument("enumerate_orders: at most 5 events supported");
}

std::vector<CausalOrder> enumerate_orders_serial(const std::vector<std::string>& events, int bound) {
    check_bound(events, bound);
    const int n = static_cast<int>(events.size());
    auto cells = off_diagonal(n);
    std::vector<CausalOrder> out;
    for (std::uint64_t m = 0; m < (std::uint64_t(1) << cells.size()); ++m)
        if (transitive_code(n, cells_to_code(n, cells, m))) out.push_back(from_mask(events, cells, m));
    std::sort(out.begin(), out.end(), [](const CausalOrder& a, const CausalOrder& b) { return a.code() < b.code(); });
    return out;
}

std::vector<CausalOrder> enumerate_orders(const std::vector<std::string>& events, int bound) {
    check_bound(events, bound);
    const int n = static_cast<int>(events.size());
    auto cells = off_diagonal(n);
    const std::int64_t total = std::int64_t(1) << cells.size();
    std::vector<char> keep(total, 0);
#pragma omp parallel for schedule(static)
    for (std::int64_t m = 0; m < total; ++m) keep[m] = transitive_code(n, cells_to_code(n, cells, m));
    std::vector<CausalOrder> out;
    for (std::int64_t m = 0; m < total; ++m)
        if (keep[m]) out.push_back(from_mask(events, cells, m));
    std::sort(out.begin(), out.end(), [](const CausalOrder& a, const CausalOrder& b) { return a.code() < b.code(); });
    return out;
}

std::vector<std::vector<int>> equivalence_classes(const CausalOrder& o) {
    std::vector<std::vector<int>> out;
    std::vector<char> seen(o.size(), 0);
    for (int i = 0; i < o.size(); ++i) {
        if (seen[i]) continue;
        std::vector<int> cls;
        for (int j = i; j < o.size(); ++j)
            if (o.leq(i, j) && o.leq(j, i)) {
                cls.push_back(j);
                seen[j] = 1;
            }
        out.push_back(cls);
    }
    return out;
}

std::uint64_t canonical_code(const CausalOrder& o) {
    const int n = o.size();
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::uint64_t best = ~std::uint64_t(0);
    do {
        std::uint64_t c = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (o.leq(perm[i], perm[j])) c |= std::uint64_t(1) << (i * n + j);
        best = std::min(best, c);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

std::string hasse_dot(const CausalOrder& o) {
    auto classes = equivalence_classes(o);
    const int m = static_cast<int>(classes.size());
    std::vector<int> cls_of(o.size());
    for (int c = 0; c < m; ++c)
        for (int e : classes[c]) cls_of[e] = c;
    auto below = [&](int a, int b) { return a != b && o.leq(classes[a][0], classes[b][0]); };
    std::ostringstream os;
    os << "digraph order {\n  rankdir=BT;\n";
    for (int c = 0; c < m; ++c) {
        os << "  n" << c << " [label=\"";
        if (classes[c].size() > 1) os << "{";
        for (std::size_t t = 0; t < classes[c].size(); ++t) os << (t ? "," : "") << o.names()[classes[c][t]];
        if (classes[c].size() > 1) os << "}";
        os << "\"" << (classes[c].size() > 1 ? ", color=red" : "") << "];\n";
    }
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            if (!below(a, b)) continue;
            bool cover = true;
            for (int c = 0; c < m && cover; ++c)
                if (below(a, c) && below(c, b)) cover = false;
            if (cover) os << "  n" << a << " -> n" << b << ";\n";
        }
    os << "}\n";
    return os.str();
}

}  // namespace caus
