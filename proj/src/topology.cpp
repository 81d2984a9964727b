#include "caus/topology.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace caus {

static void check_size(const HistorySpace& s) {
    if (s.size() > 64) throw std::invalid_argument("topology: spaces are limited to 64 histories");
}

Lowerset full_lowerset(const HistorySpace& s) {
    check_size(s);
    return s.size() == 64 ? ~Lowerset(0) : (Lowerset(1) << s.size()) - 1;
}

Lowerset principal_lowerset(const HistorySpace& s, int hist) { return ext_lowerset(s, s.histories()[hist]); }

Lowerset ext_lowerset(const HistorySpace& s, const History& k) {
    check_size(s);
    Lowerset l = 0;
    for (int i = 0; i < s.size(); ++i)
        if (leq(s.histories()[i], k)) l |= Lowerset(1) << i;
    return l;
}

bool is_lowerset(const HistorySpace& s, Lowerset l) {
    for (int i = 0; i < s.size(); ++i)
        if ((l >> i) & 1u)
            if ((principal_lowerset(s, i) & ~l) != 0) return false;
    return (l & ~full_lowerset(s)) == 0;
}

std::vector<int> lowerset_indices(Lowerset l) {
    std::vector<int> out;
    for (int i = 0; i < 64; ++i)
        if ((l >> i) & 1u) out.push_back(i);
    return out;
}

SpacePtr lowerset_space(const HistorySpace& s, Lowerset l) {
    if (!is_lowerset(s, l)) throw std::invalid_argument("not a lowerset");
    return subspace(s, lowerset_indices(l));
}

std::string lowerset_string(const HistorySpace& s, Lowerset l) {
    std::string out = "{";
    bool first = true;
    for (int i : lowerset_indices(l)) {
        if (!first) out += ",";
        first = false;
        out += to_string(s.histories()[i], s.names());
    }
    return out + "}";
}

static bool by_size(Lowerset a, Lowerset b) {
    int pa = std::popcount(a), pb = std::popcount(b);
    return pa != pb ? pa < pb : a < b;
}

std::vector<Lowerset> space_lowersets(const HistorySpace& s, bool with_empty, std::size_t bound) {
    check_size(s);
    // histories are sorted by size, so every strict predecessor comes first
    std::vector<Lowerset> below(s.size());
    for (int i = 0; i < s.size(); ++i) below[i] = principal_lowerset(s, i) & ~(Lowerset(1) << i);
    std::vector<Lowerset> out;
    std::function<void(int, Lowerset)> rec = [&](int i, Lowerset cur) {
        if (i == s.size()) {
            if (cur || with_empty) {
                out.push_back(cur);
                if (out.size() > bound) throw std::length_error("lowerset bound exceeded");
            }
            return;
        }
        rec(i + 1, cur);
        if ((below[i] & ~cur) == 0) rec(i + 1, cur | (Lowerset(1) << i));
    };
    rec(0, 0);
    std::sort(out.begin(), out.end(), by_size);
    return out;
}

bool is_union_prime(const HistorySpace& s, Lowerset l) {
    if (l == 0) return false;
    for (int i = 0; i < s.size(); ++i)
        if (principal_lowerset(s, i) == l) return true;
    return false;
}

Cover make_cover(std::vector<Lowerset> opens) {
    std::sort(opens.begin(), opens.end());
    opens.erase(std::unique(opens.begin(), opens.end()), opens.end());
    return Cover{std::move(opens)};
}

bool open_is_supported(const HistorySpace& s, Lowerset l) {
    auto generates = [&](const History& t) {
        History j;
        for (int i : lowerset_indices(l))
            if (leq(s.histories()[i], t)) j = join(j, s.histories()[i]);
        return j == t;
    };
    for (int h : s.maximal_histories())
        if ((l >> h) & 1u) return true;
    for (int k : s.maximal_ext())
        if (generates(s.ext()[k])) return true;
    return false;
}

bool is_cover(const HistorySpace& s, const Cover& c, CoverRule rule) {
    Lowerset u = 0;
    for (std::size_t i = 0; i < c.opens.size(); ++i) {
        Lowerset a = c.opens[i];
        if (a == 0 || !is_lowerset(s, a)) return false;
        if (rule == CoverRule::supported && !open_is_supported(s, a)) return false;
        for (std::size_t j = 0; j < c.opens.size(); ++j)
            if (i != j && (a & ~c.opens[j]) == 0) return false;
        u |= a;
    }
    return u == full_lowerset(s);
}

Cover standard_cover(const HistorySpace& s) {
    std::vector<Lowerset> v;
    for (int k : s.maximal_ext()) v.push_back(ext_lowerset(s, s.ext()[k]));
    return make_cover(std::move(v));
}

Cover classical_cover(const HistorySpace& s) { return make_cover({full_lowerset(s)}); }

Cover solipsistic_cover(const HistorySpace& s) {
    std::vector<Lowerset> v;
    for (int h : s.maximal_histories()) v.push_back(principal_lowerset(s, h));
    return make_cover(std::move(v));
}

namespace {

struct CoverSearch {
    std::vector<Lowerset> ls;
    std::vector<Lowerset> suffix;  // union of ls[i..]
    Lowerset full;
    std::size_t bound;

    CoverSearch(const HistorySpace& s, std::size_t b, CoverRule rule) : full(full_lowerset(s)), bound(b) {
        for (Lowerset l : space_lowersets(s, false, b))
            if (rule == CoverRule::antichain || open_is_supported(s, l)) ls.push_back(l);
        suffix.assign(ls.size() + 1, 0);
        for (int i = static_cast<int>(ls.size()) - 1; i >= 0; --i) suffix[i] = suffix[i + 1] | ls[i];
    }

    // visit every antichain extending chosen whose union is full; stop when visit returns false
    template <class Visit>
    bool run(std::size_t i, std::vector<Lowerset>& chosen, Lowerset u, Visit& visit) const {
        if (u == full && !visit(chosen)) return false;
        if (i >= ls.size() || (u | suffix[i]) != full) return true;
        for (std::size_t j = i; j < ls.size(); ++j) {
            if ((u | suffix[j]) != full) return true;
            Lowerset a = ls[j];
            bool ok = true;
            for (Lowerset c : chosen)
                if ((a & ~c) == 0 || (c & ~a) == 0) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            chosen.push_back(a);
            bool go = run(j + 1, chosen, u | a, visit);
            chosen.pop_back();
            if (!go) return false;
        }
        return true;
    }

    void collect(std::size_t i, std::vector<Lowerset>& chosen, Lowerset u, std::vector<Cover>& out) const {
        auto visit = [&](const std::vector<Lowerset>& c) {
            out.push_back(make_cover(c));
            if (out.size() > bound) throw std::length_error("cover bound exceeded");
            return true;
        };
        run(i, chosen, u, visit);
    }
};

}  // namespace

// A cover reached with union already full is recorded before descending, so
// every antichain with full union is produced exactly once.
std::vector<Cover> enumerate_covers_serial(const HistorySpace& s, std::size_t bound, CoverRule rule) {
    CoverSearch cs(s, bound, rule);
    std::vector<Cover> out;
    std::vector<Lowerset> chosen;
    cs.collect(0, chosen, 0, out);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Cover> enumerate_covers(const HistorySpace& s, std::size_t bound, CoverRule rule) {
    CoverSearch cs(s, bound, rule);
    const int n = static_cast<int>(cs.ls.size());
    std::vector<std::vector<Cover>> parts(n);
    bool overflow = false;
#pragma omp parallel for schedule(dynamic)
    for (int j = 0; j < n; ++j) {
        try {
            std::vector<Lowerset> chosen{cs.ls[j]};
            cs.collect(j + 1, chosen, cs.ls[j], parts[j]);
        } catch (const std::length_error&) {
#pragma omp atomic write
            overflow = true;
        }
    }
    if (overflow) throw std::length_error("cover bound exceeded");
    std::vector<Cover> out;
    for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    if (out.size() > bound) throw std::length_error("cover bound exceeded");
    std::sort(out.begin(), out.end());
    return out;
}

bool refines(const Cover& fine, const Cover& coarse) {
    for (Lowerset v : fine.opens) {
        bool inside = false;
        for (Lowerset u : coarse.opens)
            if ((v & ~u) == 0) {
                inside = true;
                break;
            }
        if (!inside) return false;
    }
    return true;
}

CoverHierarchy cover_hierarchy(const HistorySpace& s, CoverRule rule) {
    CoverHierarchy h;
    h.covers = enumerate_covers(s, kDefaultLowersetBound, rule);
    const int n = static_cast<int>(h.covers.size());
    std::vector<std::vector<char>> r(n, std::vector<char>(n, 0));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) r[a][b] = a != b && refines(h.covers[a], h.covers[b]);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (!r[a][b]) continue;
            bool covering = true;
            for (int c = 0; c < n && covering; ++c)
                if (r[a][c] && r[c][b]) covering = false;
            if (covering) h.edges.emplace_back(a, b);
        }
    for (int a = 0; a < n; ++a) {
        int below = 0, above = 0;
        for (int b = 0; b < n; ++b) {
            below += r[a][b];
            above += r[b][a];
        }
        if (below == n - 1) h.minimum = a;
        if (above == n - 1) h.maximum = a;
    }
    return h;
}

std::string cover_string(const HistorySpace& s, const Cover& c) {
    std::string out = "[";
    for (std::size_t i = 0; i < c.opens.size(); ++i) {
        if (i) out += ", ";
        out += lowerset_string(s, c.opens[i]);
    }
    return out + "]";
}

std::string hierarchy_dot(const HistorySpace& s, const CoverHierarchy& h) {
    const Cover std_c = standard_cover(s), sol = solipsistic_cover(s), cls = classical_cover(s);
    std::ostringstream os;
    os << "digraph covers {\n  rankdir=BT;\n  node [shape=box];\n";
    for (std::size_t i = 0; i < h.covers.size(); ++i) {
        os << "  c" << i << " [label=\"#" << i << "\"";
        const Cover& c = h.covers[i];
        if (c == std_c)
            os << ", color=violet, style=filled";
        else if (c == sol)
            os << ", color=orange, style=filled";
        else if (c == cls)
            os << ", color=lightblue, style=filled";
        os << ", tooltip=\"" << cover_string(s, c) << "\"];\n";
    }
    for (auto [a, b] : h.edges) os << "  c" << a << " -> c" << b << ";\n";
    os << "}\n";
    return os.str();
}

Section make_section(const SpacePtr& s, Lowerset l, const CausalFunction& f) {
    auto sub = lowerset_space(*s, l);
    if (f.space()->names() != s->names() || f.space()->histories() != sub->histories())
        throw std::invalid_argument("section: function is not defined on the lowerset");
    return Section{l, f};
}

Section restrict_section(const SpacePtr& s, const Section& sec, Lowerset sub) {
    if ((sub & ~sec.open) != 0) throw std::invalid_argument("restriction to a lowerset that is not contained");
    return Section{sub, restrict_function(sec.f, lowerset_space(*s, sub))};
}

// output of a section at a history (global index) and one of its tips
static int section_value(const HistorySpace& s, const Section& sec, int hist, int e) {
    int local = sec.f.space()->index_of(s.histories()[hist]);
    return sec.f.at(local, e);
}

bool family_is_compatible(const SpacePtr& s, const Family& fam) {
    for (std::size_t a = 0; a < fam.size(); ++a)
        for (std::size_t b = a + 1; b < fam.size(); ++b) {
            Lowerset both = fam[a].open & fam[b].open;
            for (int i : lowerset_indices(both))
                for (int e = 0; e < s->num_events(); ++e)
                    if ((s->tips(i) >> e) & 1u)
                        if (section_value(*s, fam[a], i, e) != section_value(*s, fam[b], i, e)) return false;
        }
    return true;
}

std::optional<CausalFunction> glue_compatible_family(const SpacePtr& s, const Family& fam) {
    if (!family_is_compatible(s, fam)) throw std::invalid_argument("glue: family is not compatible");
    Lowerset u = 0;
    for (auto& sec : fam) u |= sec.open;
    auto sub = lowerset_space(*s, u);
    Outputs o = fam.empty() ? Outputs(s->num_events(), 2) : fam[0].f.outputs();
    std::vector<std::uint8_t> v(sub->num_classes());
    for (int c = 0; c < sub->num_classes(); ++c) {
        const int e = sub->class_event(c);
        int x = -1;
        for (int li : sub->class_members(c)) {
            int gi = s->index_of(sub->histories()[li]);
            for (auto& sec : fam) {
                if (!((sec.open >> gi) & 1u)) continue;
                int y = section_value(*s, sec, gi, e);
                if (x < 0)
                    x = y;
                else if (x != y)
                    return std::nullopt;
                break;
            }
        }
        v[c] = static_cast<std::uint8_t>(x);
    }
    return CausalFunction(sub, o, std::move(v));
}

Family restrict_family_to_cover(const SpacePtr& s, const Family& fam, const Cover& fine) {
    Family out;
    for (Lowerset v : fine.opens) {
        const Section* from = nullptr;
        for (auto& sec : fam)
            if ((v & ~sec.open) == 0) {
                from = &sec;
                break;
            }
        if (!from) throw std::invalid_argument("restrict family: cover does not refine the family's cover");
        out.push_back(restrict_section(s, *from, v));
    }
    return out;
}

bool check_solipsistic_witness(const HistorySpace& s, const SolipsisticWitness& w) {
    if (s.ext_index_of(w.k) < 0) return false;
    if (w.event < 0 || w.event >= s.num_events() || !w.k.defined(w.event)) return false;
    int i = s.index_of(w.h), j = s.index_of(w.h2);
    if (i < 0 || j < 0 || i == j) return false;
    int ci = s.class_of(i, w.event), cj = s.class_of(j, w.event);
    if (ci < 0 || ci != cj) return false;
    if (!leq(w.h, w.k) || !leq(w.h2, w.k)) return false;
    for (auto& x : s.histories())
        if (leq(w.h, x) && leq(w.h2, x) && leq(x, w.k)) return false;
    return true;
}

std::vector<SolipsisticWitness> find_solipsistic_witnesses(const HistorySpace& s, bool minimal_only) {
    std::vector<SolipsisticWitness> out;
    for (int c = 0; c < s.num_classes(); ++c) {
        const int e = s.class_event(c);
        const auto& mem = s.class_members(c);
        for (std::size_t a = 0; a < mem.size(); ++a)
            for (std::size_t b = a + 1; b < mem.size(); ++b) {
                const History& h = s.histories()[mem[a]];
                const History& h2 = s.histories()[mem[b]];
                if (!compatible(h, h2)) continue;
                const History low = join(h, h2);
                for (const History& k : s.ext()) {
                    if (!leq(low, k) || (minimal_only && k != low)) continue;
                    SolipsisticWitness w{k, e, h, h2};
                    if (check_solipsistic_witness(s, w)) out.push_back(w);
                }
            }
    }
    return out;
}

std::optional<SolipsisticWitness> find_solipsistic_witness(const HistorySpace& s) {
    auto all = find_solipsistic_witnesses(s, true);
    if (all.empty()) return std::nullopt;
    return all.front();
}

bool is_sheaf(const HistorySpace& s) { return find_solipsistic_witnesses(s, true).empty(); }

bool is_sheaf_bruteforce(const SpacePtr& s, const Outputs& o, std::size_t lowerset_bound, CoverRule rule) {
    if (space_lowersets(*s).size() > lowerset_bound) throw std::length_error("sheaf brute force: too many lowersets");
    CoverSearch cs(*s, std::numeric_limits<std::size_t>::max(), rule);
    // sections over each open, built once and shared by every cover using it
    std::map<Lowerset, std::vector<CausalFunction>> sections;
    auto sections_of = [&](Lowerset l) -> const std::vector<CausalFunction>& {
        auto it = sections.find(l);
        if (it != sections.end()) return it->second;
        auto sub = lowerset_space(*s, l);
        std::vector<CausalFunction> fs;
        for_each_function(sub, o, [&](const CausalFunction& f) { fs.push_back(f); });
        return sections.emplace(l, std::move(fs)).first->second;
    };
    auto visit = [&](const std::vector<Lowerset>& opens) {
        std::vector<const std::vector<CausalFunction>*> secs;
        for (Lowerset l : opens) secs.push_back(&sections_of(l));
        Family fam;
        bool failed = false;
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
            if (failed) return;
            if (i == opens.size()) {
                if (!glue_compatible_family(s, fam)) failed = true;
                return;
            }
            for (std::size_t x = 0; x < secs[i]->size() && !failed; ++x) {
                fam.push_back(Section{opens[i], (*secs[i])[x]});
                if (family_is_compatible(s, fam)) rec(i + 1);
                fam.pop_back();
            }
        };
        rec(0);
        return !failed;
    };
    std::vector<Lowerset> chosen;
    return cs.run(0, chosen, 0, visit);
}

}  // namespace caus
