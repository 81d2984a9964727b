#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "caus/history.hpp"
#include "caus/order.hpp"

namespace caus {

class HistorySpace;
using SpacePtr = std::shared_ptr<const HistorySpace>;

// A set of input histories together with its closure Ext under compatible
// joins, tips, and the tip-constraint classes. Immutable once made.
class HistorySpace {
public:
    static SpacePtr make(std::vector<std::string> names, std::vector<int> inputs, std::vector<History> histories);

    int num_events() const { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& names() const { return names_; }
    const std::vector<int>& inputs() const { return inputs_; }
    int event_index(const std::string& name) const;
    EventSet all_events() const { return num_events() == 0 ? 0 : (EventSet(1) << num_events()) - 1; }

    const std::vector<History>& histories() const { return hist_; }
    const std::vector<History>& ext() const { return ext_; }
    int size() const { return static_cast<int>(hist_.size()); }
    int ext_size() const { return static_cast<int>(ext_.size()); }
    int index_of(const History& h) const;      // -1 when h is not in the space
    int ext_index_of(const History& h) const;  // -1 when h is not in Ext
    int ext_to_hist(int k) const { return ext_hist_[k]; }

    EventSet tips(int i) const { return tips_[i]; }

    // tip-constraint classes, numbered event by event
    int num_classes() const { return static_cast<int>(cls_event_.size()); }
    int class_event(int c) const { return cls_event_[c]; }
    const std::vector<int>& class_members(int c) const { return cls_members_[c]; }
    int class_of(int i, int e) const { return class_of_[i * kMaxEvents + e]; }
    // class of the tip-history of e below Ext element k, -1 if e not in dom(k)
    int ext_class(int k, int e) const { return ext_class_[k * kMaxEvents + e]; }
    std::vector<int> classes_of_event(int e) const;

    std::vector<int> maximal_ext() const;         // indices into ext()
    std::vector<int> maximal_histories() const;   // indices into histories()
    std::vector<int> downset(const History& k) const;  // indices of histories below k

private:
    HistorySpace() = default;
    void build();

    std::vector<std::string> names_;
    std::vector<int> inputs_;
    std::vector<History> hist_, ext_;
    std::unordered_map<std::uint64_t, int> hist_index_, ext_index_;
    std::vector<int> ext_hist_;
    std::vector<EventSet> tips_;
    std::vector<int> cls_event_;
    std::vector<std::vector<int>> cls_members_;
    std::vector<int> class_of_, ext_class_;
};

std::vector<History> ext_closure(const std::vector<History>& histories);

struct Violation {
    History h;
    std::optional<std::pair<History, History>> decomposition;
    std::string message;
};

struct ValidationReport {
    bool ok = true;
    std::vector<Violation> violations;
};

ValidationReport validate_space(const HistorySpace& s);

EventSet tips(const HistorySpace& s, const History& h);  // throws if h is not in s

struct ConstraintClasses {
    // per event, blocks of history indices
    std::vector<std::vector<std::vector<int>>> blocks;
    int total() const;
};
ConstraintClasses constraint_classes(const HistorySpace& s);

bool is_tight(const HistorySpace& s);
bool is_causally_complete(const HistorySpace& s);
bool has_free_choice(const HistorySpace& s);

SpacePtr induced_space(const CausalOrder& o, const std::vector<int>& inputs);
SpacePtr induced_space(const CausalOrder& o, int inputs = 2);

// Theta' <= Theta iff Ext(Theta') contains Ext(Theta)
bool space_leq(const HistorySpace& a, const HistorySpace& b);
bool same_ext(const HistorySpace& a, const HistorySpace& b);

SpacePtr parallel_compose(const HistorySpace& a, const HistorySpace& b);
SpacePtr sequential_compose(const HistorySpace& a, const HistorySpace& b);
// branches keyed by the maximal extended histories of a (in a's event indexing)
SpacePtr conditional_sequential_compose(const HistorySpace& a, const std::map<std::string, SpacePtr>& branches);

// keep the join-prime elements of an Ext set; the result has that Ext
std::vector<History> prime_elements(const std::vector<History>& ext);

std::vector<SpacePtr> enumerate_causal_completions(const HistorySpace& s, int bound = 4096);

SpacePtr subspace(const HistorySpace& s, const std::vector<int>& indices);
bool is_history_lowerset(const HistorySpace& s, const std::vector<int>& indices);
SpacePtr lowerset_subspace(const HistorySpace& s, const std::vector<History>& lambda);

// same space with events listed in a new order
SpacePtr permute_events(const HistorySpace& s, const std::vector<std::string>& order);

// all total input assignments of s, in mixed-radix order (first event slowest)
std::vector<History> total_assignments(const HistorySpace& s);
int total_index(const HistorySpace& s, const History& k);

std::string space_dot(const HistorySpace& s, bool with_ext = true);

}  // namespace caus
