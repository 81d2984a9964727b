#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "caus/space.hpp"

namespace caus {

using Outputs = std::vector<int>;  // output set size per event

// One output per tip-constraint class of the space.
class CausalFunction {
public:
    CausalFunction() = default;
    CausalFunction(SpacePtr s, Outputs o, std::vector<std::uint8_t> values);

    const SpacePtr& space() const { return space_; }
    const Outputs& outputs() const { return out_; }
    const std::vector<std::uint8_t>& values() const { return values_; }
    int value(int cls) const { return values_[cls]; }
    // f(h)_e for a tip e of history i
    int at(int hist, int e) const;
    // Ext(f)(k)_e for Ext element k
    int ext_at(int k, int e) const { return values_[space_->ext_class(k, e)]; }

    // spaces compare by content, so functions on separately built copies of one lowerset agree
    bool operator==(const CausalFunction& o) const {
        return values_ == o.values_ && (space_ == o.space_ || (space_->names() == o.space_->names() &&
                                                               space_->histories() == o.space_->histories()));
    }

private:
    SpacePtr space_;
    Outputs out_;
    std::vector<std::uint8_t> values_;
};

mpz_class count_causal_functions(const HistorySpace& s, const Outputs& o);
std::uint64_t count_causal_functions_u64(const HistorySpace& s, const Outputs& o);  // throws past 2^63

// enumeration order: mixed radix with the last class varying fastest
CausalFunction function_at(const SpacePtr& s, const Outputs& o, std::uint64_t index);
std::uint64_t function_index(const CausalFunction& f);
// class values of the function with a given index
void function_values(const HistorySpace& s, const Outputs& o, std::uint64_t index, std::uint8_t* values);
void for_each_function(const SpacePtr& s, const Outputs& o, const std::function<void(const CausalFunction&)>& fn);

// canonical key: class outputs in class order, each class named by its
// smallest tip-history, e.g. "B|{A:0,B:1}=1"
std::string function_key(const CausalFunction& f);

struct ExtendedFunction {
    SpacePtr space;
    Outputs outputs;
    std::vector<History> out;  // per Ext element, outputs on dom(k)
};

ExtendedFunction extend(const CausalFunction& f);
bool is_consistent(const ExtendedFunction& F);  // compatible joins are respected
bool is_continuous(const ExtendedFunction& F);  // order preserving along covering pairs of Ext
CausalFunction prime(const ExtendedFunction& F);  // throws on inconsistent input

// function from per-(history, event) outputs; nullopt when two members of a
// tip-constraint class disagree
std::optional<CausalFunction> build_function(const SpacePtr& target, Outputs o,
                                            const std::function<int(const History&, int)>& value);

// all separable functions by index, ascending
std::vector<std::uint64_t> separable_indices(const SpacePtr& s, const Outputs& o);

// f restricted to a lowerset subspace of its space
CausalFunction restrict_function(const CausalFunction& f, const SpacePtr& sub);

struct JointIO {
    int n = 0;
    std::vector<History> rows;  // indexed by total_index, holding joint outputs
    bool operator==(const JointIO& o) const { return n == o.n && rows == o.rows; }
};

JointIO to_joint_io(const CausalFunction& f);
std::optional<CausalFunction> try_from_joint_io(const JointIO& F, const SpacePtr& s, const Outputs& o);
CausalFunction from_joint_io(const JointIO& F, const SpacePtr& s, const Outputs& o);
bool joint_io_is_causal(const JointIO& F, const SpacePtr& s, const Outputs& o);

struct WitnessEntry {
    int event;
    History k_prime;
    int xi;
};

struct InseparabilityWitness {
    History k;
    std::vector<WitnessEntry> entries;  // one per event of dom(k), ascending
};

std::optional<InseparabilityWitness> find_inseparability_witness(const CausalFunction& f);
bool check_inseparability_witness(const CausalFunction& f, const InseparabilityWitness& w);

// A witness proves inseparability, but its absence does not prove the
// converse: removing one event from k can land on a history that itself
// admits no consistent restriction. Separability is therefore decided by
// grounding every k in Ext through a chain of consistent one-event
// restrictions down to a single event.
bool is_separable(const CausalFunction& f);
// first k in Ext (witness search order) that cannot be grounded
std::optional<History> ungrounded_history(const CausalFunction& f);

// Precomputed candidate lists for repeated witness searches on one space.
class WitnessIndex {
public:
    explicit WitnessIndex(const HistorySpace& s);
    bool has_witness(const std::uint8_t* values) const;

private:
    struct Check {
        int c1, c2;  // classes compared at xi
    };
    struct Omega {
        std::vector<Check> checks;
    };
    std::vector<std::vector<Omega>> per_k_;
};

// Partial histories below Ext elements, with the class comparisons that make
// each one consistent and its one-event restrictions.
class GroundingIndex {
public:
    explicit GroundingIndex(const HistorySpace& s);
    // index into Ext of the first ungrounded element, or -1
    int first_ungrounded(const std::uint8_t* values, std::vector<char>& scratch) const;
    bool separable(const std::uint8_t* values, std::vector<char>& scratch) const {
        return first_ungrounded(values, scratch) < 0;
    }
    std::size_t size() const { return nodes_.size(); }

private:
    struct Node {
        std::vector<std::pair<int, int>> checks;  // class pairs that must agree
        std::vector<int> children;
        bool single = false;
    };
    std::vector<Node> nodes_;  // children precede parents
    std::vector<int> ext_node_;
};

std::uint64_t count_with_witness(const SpacePtr& s, const Outputs& o);
std::uint64_t count_separable(const SpacePtr& s, const Outputs& o);
std::uint64_t count_separable_serial(const SpacePtr& s, const Outputs& o);
// reference: union over causal completions of the functions arising there
std::uint64_t count_separable_bruteforce(const SpacePtr& s, const Outputs& o);
std::vector<std::uint64_t> separable_indices_bruteforce(const SpacePtr& s, const Outputs& o);

// The function on s obtained by restricting Ext(g) for g on a space below s.
std::optional<CausalFunction> arises_as(const CausalFunction& g, const SpacePtr& s);

// history of one space re-expressed in another by event names
History embed(const History& h, const HistorySpace& from, const HistorySpace& to);

struct ParallelFactors {
    CausalFunction left, right;
};
ParallelFactors factor_parallel(const CausalFunction& f, const SpacePtr& a, const SpacePtr& b);
CausalFunction compose_parallel(const CausalFunction& fa, const CausalFunction& fb, const SpacePtr& composite);

struct SequentialFactors {
    CausalFunction first;
    std::map<std::string, CausalFunction> branches;  // keyed by the code of a maximal k of the first space
};
SequentialFactors factor_sequential(const CausalFunction& f, const SpacePtr& a, const SpacePtr& b);
SequentialFactors factor_conditional(const CausalFunction& f, const SpacePtr& a,
                                     const std::map<std::string, SpacePtr>& branches);
CausalFunction compose_sequential(const SequentialFactors& parts, const SpacePtr& composite);

}  // namespace caus
