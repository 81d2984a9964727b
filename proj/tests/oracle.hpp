#pragma once
// Independent brute-force reference computations used by the tests.
// Nothing here calls into the library's algorithms; only plain containers.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

// relation as a dense boolean matrix r[i][j] meaning i <= j
using Rel = std::vector<std::vector<bool>>;

inline bool is_preorder(const Rel& r) {
    int n = static_cast<int>(r.size());
    for (int i = 0; i < n; ++i)
        if (!r[i][i]) return false;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                if (r[i][j] && r[j][k] && !r[i][k]) return false;
    return true;
}

inline std::vector<Rel> all_preorders(int n) {
    std::vector<Rel> out;
    for (std::uint64_t m = 0; m < (std::uint64_t(1) << (n * n)); ++m) {
        Rel r(n, std::vector<bool>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) r[i][j] = (m >> (i * n + j)) & 1u;
        if (is_preorder(r)) out.push_back(r);
    }
    return out;
}

// subsets s (bitmask) such that j in s and i <= j imply i in s
inline std::set<std::uint32_t> lowersets(const Rel& r) {
    int n = static_cast<int>(r.size());
    std::set<std::uint32_t> out;
    for (std::uint32_t s = 0; s < (1u << n); ++s) {
        bool ok = true;
        for (int j = 0; j < n && ok; ++j)
            for (int i = 0; i < n && ok; ++i)
                if (((s >> j) & 1u) && r[i][j] && !((s >> i) & 1u)) ok = false;
        if (ok) out.insert(s);
    }
    return out;
}

// partial assignments as maps event -> value
using PA = std::map<int, int>;

inline bool compat(const PA& a, const PA& b) {
    for (auto& [e, x] : a) {
        auto it = b.find(e);
        if (it != b.end() && it->second != x) return false;
    }
    return true;
}

inline PA merge(PA a, const PA& b) {
    for (auto& kv : b) a.insert(kv);
    return a;
}

inline bool below(const PA& a, const PA& b) {
    for (auto& [e, x] : a) {
        auto it = b.find(e);
        if (it == b.end() || it->second != x) return false;
    }
    return true;
}

// naive fixpoint closure under joins of compatible pairs
inline std::set<PA> closure(std::set<PA> s) {
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<PA> v(s.begin(), s.end());
        for (auto& a : v)
            for (auto& b : v)
                if (compat(a, b) && s.insert(merge(a, b)).second) grew = true;
    }
    return s;
}

// count of families of subsets of {0..n-1} that are antichains and cover
// every point, restricted to members drawn from `opens` (bitmasks); plain
// include/exclude recursion, pruning only on the antichain property
inline long count_antichain_covers(const std::vector<std::uint64_t>& all_opens, std::uint64_t all,
                                   std::uint64_t must_meet = ~std::uint64_t(0)) {
    std::vector<std::uint64_t> opens;
    for (auto o : all_opens)
        if (o & must_meet) opens.push_back(o);
    long count = 0;
    std::vector<std::uint64_t> picked;
    auto rec = [&](auto&& self, std::size_t i, std::uint64_t u) -> void {
        if (i == opens.size()) {
            if (!picked.empty() && u == all) ++count;
            return;
        }
        self(self, i + 1, u);
        for (auto p : picked)
            if ((opens[i] & ~p) == 0 || (p & ~opens[i]) == 0) return;
        picked.push_back(opens[i]);
        self(self, i + 1, u | opens[i]);
        picked.pop_back();
    };
    rec(rec, 0, 0);
    return count;
}

}  // namespace oracle
