#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "caus/order.hpp"

namespace caus {

constexpr int kMaxEvents = 8;
constexpr std::int8_t kUndef = -1;

// Partial function events -> inputs, fixed width with kUndef for "not in domain".
struct History {
    std::array<std::int8_t, kMaxEvents> v;

    History() { v.fill(kUndef); }

    bool defined(int e) const { return v[e] != kUndef; }
    int operator[](int e) const { return v[e]; }
    void set(int e, int value) { v[e] = static_cast<std::int8_t>(value); }
    void unset(int e) { v[e] = kUndef; }
    EventSet dom() const;
    int size() const { return popcount(dom()); }
    bool empty() const { return dom() == 0; }
    History restrict(EventSet s) const;
    std::uint64_t key() const {
        std::uint64_t k;
        std::memcpy(&k, v.data(), sizeof k);
        return k;
    }

    bool operator==(const History& o) const { return v == o.v; }
    bool operator!=(const History& o) const { return v != o.v; }
};

// size first, then lexicographic with undefined before every value
bool operator<(const History& a, const History& b);

struct HistoryHash {
    std::size_t operator()(const History& h) const { return std::hash<std::uint64_t>()(h.key()); }
};

bool compatible(const History& a, const History& b);
History join(const History& a, const History& b);  // throws on incompatible pair
bool leq(const History& a, const History& b);      // b extends a
inline bool lt(const History& a, const History& b) { return a != b && leq(a, b); }

History make_history(std::initializer_list<std::pair<int, int>> items);

// "{A:0,B:1}"
std::string to_string(const History& h, const std::vector<std::string>& names);
// "01_" over the first n events
std::string to_code(const History& h, int n);
History from_code(const std::string& code);

}  // namespace caus
