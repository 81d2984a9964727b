#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace caus {

using EventSet = std::uint32_t;

inline int popcount(EventSet s) { return __builtin_popcount(s); }

enum class Relation { precedes, succeeds, unrelated, indefinite, equal };

const char* relation_name(Relation r);

// A preorder on events 0..n-1. past_[j] holds every i with i <= j, so the
// relation is stored closed and classify_pair is a couple of bit tests.
class CausalOrder {
public:
    CausalOrder() = default;
    CausalOrder(std::vector<std::string> names, std::vector<EventSet> past);

    int size() const { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& names() const { return names_; }
    int index_of(const std::string& name) const;
    bool leq(int i, int j) const { return (past_[j] >> i) & 1u; }
    EventSet past(int j) const { return past_[j]; }
    EventSet future(int i) const;
    // non-reflexive pairs (i, j) with i <= j
    std::vector<std::pair<int, int>> pairs() const;
    // relation as an n*n bit code, row-major over (i, j)
    std::uint64_t code() const;

    bool operator==(const CausalOrder& o) const { return names_ == o.names_ && past_ == o.past_; }

private:
    std::vector<std::string> names_;
    std::vector<EventSet> past_;
};

CausalOrder make_order(const std::vector<std::string>& events, const std::vector<std::pair<int, int>>& pairs);
CausalOrder make_order(const std::vector<std::string>& events,
                       const std::vector<std::pair<std::string, std::string>>& pairs);

CausalOrder discrete_order(const std::vector<std::string>& events);
// layers form a chain; events inside one layer are causally equivalent.
// chain_order({{"A"},{"B","C"}}) is total{A,{B,C}}.
CausalOrder chain_order(const std::vector<std::vector<std::string>>& layers);
CausalOrder indiscrete_order(const std::vector<std::string>& events);

Relation classify_pair(const CausalOrder& o, int w, int x);
bool is_definite(const CausalOrder& o);

// all past-closed subsets, empty set included, sorted by size then value
std::vector<EventSet> lowersets(const CausalOrder& o);
bool is_lowerset(const CausalOrder& o, EventSet s);

bool order_leq(const CausalOrder& a, const CausalOrder& b);
CausalOrder order_join(const CausalOrder& a, const CausalOrder& b);
CausalOrder order_meet(const CausalOrder& a, const CausalOrder& b);

std::vector<CausalOrder> enumerate_orders(const std::vector<std::string>& events, int bound = 4);
std::vector<CausalOrder> enumerate_orders_serial(const std::vector<std::string>& events, int bound = 4);

// indefinite classes, each sorted, listed by smallest member
std::vector<std::vector<int>> equivalence_classes(const CausalOrder& o);
// smallest relation code over all relabellings; groups isomorphic orders
std::uint64_t canonical_code(const CausalOrder& o);

std::string hasse_dot(const CausalOrder& o);

}  // namespace caus
