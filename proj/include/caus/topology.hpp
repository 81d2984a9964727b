#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "caus/function.hpp"
#include "caus/space.hpp"

namespace caus {

// Lowerset of a space as a bitmask over history indices (spaces with at most 64 histories).
using Lowerset = std::uint64_t;

constexpr std::size_t kDefaultLowersetBound = std::size_t(1) << 20;

Lowerset full_lowerset(const HistorySpace& s);
Lowerset principal_lowerset(const HistorySpace& s, int hist);          // downset of one history
Lowerset ext_lowerset(const HistorySpace& s, const History& k);        // histories below k
bool is_lowerset(const HistorySpace& s, Lowerset l);
std::vector<int> lowerset_indices(Lowerset l);
SpacePtr lowerset_space(const HistorySpace& s, Lowerset l);
std::string lowerset_string(const HistorySpace& s, Lowerset l);

// nonempty lowersets (plus the empty one on request), by size then mask
std::vector<Lowerset> space_lowersets(const HistorySpace& s, bool with_empty = false,
                                      std::size_t bound = kDefaultLowersetBound);
// union-prime lowersets are exactly the principal ones
bool is_union_prime(const HistorySpace& s, Lowerset l);

// A cover is an antichain of nonempty lowersets with union the whole space.
// Under the default rule every open must also generate a whole context: some
// t, maximal in the space or maximal in Ext, equals the join of the open's
// histories below t. The plain antichain reading is kept for comparison.
enum class CoverRule { supported, antichain };

bool open_is_supported(const HistorySpace& s, Lowerset l);

struct Cover {
    std::vector<Lowerset> opens;  // sorted ascending
    bool operator==(const Cover& o) const { return opens == o.opens; }
    bool operator<(const Cover& o) const { return opens < o.opens; }
};

Cover make_cover(std::vector<Lowerset> opens);
bool is_cover(const HistorySpace& s, const Cover& c, CoverRule rule = CoverRule::supported);
Cover standard_cover(const HistorySpace& s);
Cover classical_cover(const HistorySpace& s);
Cover solipsistic_cover(const HistorySpace& s);

std::vector<Cover> enumerate_covers(const HistorySpace& s, std::size_t bound = kDefaultLowersetBound,
                                   CoverRule rule = CoverRule::supported);
std::vector<Cover> enumerate_covers_serial(const HistorySpace& s, std::size_t bound = kDefaultLowersetBound,
                                          CoverRule rule = CoverRule::supported);
// fine ⪯ coarse: every open of fine sits inside some open of coarse
bool refines(const Cover& fine, const Cover& coarse);

struct CoverHierarchy {
    std::vector<Cover> covers;
    std::vector<std::pair<int, int>> edges;  // covering pairs (finer, coarser)
    int minimum = -1, maximum = -1;          // -1 when absent
};
CoverHierarchy cover_hierarchy(const HistorySpace& s, CoverRule rule = CoverRule::supported);
std::string hierarchy_dot(const HistorySpace& s, const CoverHierarchy& h);
std::string cover_string(const HistorySpace& s, const Cover& c);

// A causal function on one open of a cover.
struct Section {
    Lowerset open = 0;
    CausalFunction f;
};
using Family = std::vector<Section>;

Section make_section(const SpacePtr& s, Lowerset l, const CausalFunction& f);
Section restrict_section(const SpacePtr& s, const Section& sec, Lowerset sub);
bool family_is_compatible(const SpacePtr& s, const Family& fam);
// compatible join over the union of the opens; nothing when it is not causal
std::optional<CausalFunction> glue_compatible_family(const SpacePtr& s, const Family& fam);
// each open of fine takes its restriction from the first open of the family containing it
Family restrict_family_to_cover(const SpacePtr& s, const Family& fam, const Cover& fine);

struct SolipsisticWitness {
    History k;
    int event = -1;
    History h, h2;
};

bool check_solipsistic_witness(const HistorySpace& s, const SolipsisticWitness& w);
// pairs h < h' in history order; with minimal_only, k is the join of h and h'
std::vector<SolipsisticWitness> find_solipsistic_witnesses(const HistorySpace& s, bool minimal_only = true);
std::optional<SolipsisticWitness> find_solipsistic_witness(const HistorySpace& s);
bool is_sheaf(const HistorySpace& s);
// every compatible family over every cover glues (exhaustive, small spaces only)
bool is_sheaf_bruteforce(const SpacePtr& s, const Outputs& o, std::size_t lowerset_bound = 24,
                         CoverRule rule = CoverRule::supported);

}  // namespace caus
