#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "caus/function.hpp"
#include "caus/lp.hpp"
#include "caus/topology.hpp"

namespace caus {

// Maps function indices on a space to function indices on a lowerset of it.
class RestrictionMap {
public:
    RestrictionMap(const HistorySpace& from, const Outputs& o, const HistorySpace& to);
    std::uint64_t apply(const std::uint8_t* from_values) const;
    std::uint64_t apply_index(std::uint64_t from_index) const;
    std::uint64_t target_count() const { return count_; }

private:
    std::vector<int> from_radix_;
    std::vector<int> source_class_;
    std::vector<std::uint64_t> weight_;
    std::uint64_t count_ = 1;
};

// Distribution over the causal functions on one open, keyed by function
// index on the open's subspace. Zero weights are never stored.
struct CausalDistribution {
    SpacePtr whole;
    Lowerset open = 0;
    SpacePtr space;
    Outputs outputs;
    std::map<std::uint64_t, Rational> weights;

    Rational total() const;
    Rational weight(std::uint64_t index) const;
    CausalFunction function(std::uint64_t index) const { return function_at(space, outputs, index); }
    void add(std::uint64_t index, const Rational& w);
    bool operator==(const CausalDistribution& o) const { return open == o.open && weights == o.weights; }
};

CausalDistribution empty_distribution(const SpacePtr& whole, Lowerset open, const Outputs& o);
// f may live on the whole space or on any lowerset containing the open
CausalDistribution delta_distribution(const SpacePtr& whole, Lowerset open, const CausalFunction& f);
CausalDistribution marginalize(const CausalDistribution& d, Lowerset sub);

struct EmpiricalModel {
    SpacePtr space;
    Outputs outputs;
    Cover cover;
    std::vector<CausalDistribution> components;  // aligned with cover.opens

    const CausalDistribution& component(Lowerset open) const;
};

struct ModelReport {
    bool ok = true;
    std::string message;
};

ModelReport validate_model(const EmpiricalModel& e);

// restriction of a classical model (a distribution on the whole space)
EmpiricalModel restrict_model(const CausalDistribution& classical, const Cover& c);
EmpiricalModel restrict_model(const EmpiricalModel& e, const Cover& finer);

// Tables: rows keyed by the input code of t (with '_' outside dom t), columns
// by the output code on dom t. Only opens of the form ↓t are tabulated.
using TableRow = std::map<std::string, Rational>;
using Table = std::map<std::string, TableRow>;

// standard cover unless a cover is given; every open must be principal
EmpiricalModel model_from_table(const SpacePtr& s, const Outputs& o, const Table& rows);
EmpiricalModel model_from_table(const SpacePtr& s, const Outputs& o, const Table& rows, const Cover& c);
std::optional<Table> model_table(const EmpiricalModel& e);
// the same model data read on another space with the same maximal inputs
EmpiricalModel lift_model(const EmpiricalModel& e, const SpacePtr& target);

struct FractionResult {
    Rational value;
    std::vector<std::pair<CausalFunction, Rational>> decomposition;
    std::size_t pivots = 0;
};

constexpr std::uint64_t kDefaultFunctionBound = std::uint64_t(1) << 26;

FractionResult noncontextual_fraction(const EmpiricalModel& e, std::uint64_t bound = kDefaultFunctionBound,
                                      Pricing pricing = Pricing::parallel);
FractionResult separable_noncontextual_fraction(const EmpiricalModel& e,
                                                std::uint64_t bound = kDefaultFunctionBound);
Rational contextual_fraction(const EmpiricalModel& e);
bool is_noncontextual(const EmpiricalModel& e);
// decomposition re-marginalises below the model, and onto it when the value is 1
bool check_certificate(const EmpiricalModel& e, const FractionResult& r);

enum class Coupling { product, quantile };

// Classical distribution restricting to a standard model on a causal switch
// space. The product coupling follows the inductive construction; the
// quantile coupling drives every conditional choice from one uniform variable.
CausalDistribution localize_switch_model(const EmpiricalModel& e, Coupling coupling = Coupling::product);
bool is_switch_space(const HistorySpace& s);

bool solipsistic_extension_exists(const EmpiricalModel& e);
inline bool displays_solipsistic_contextuality(const EmpiricalModel& e) { return !solipsistic_extension_exists(e); }

EmpiricalModel witness_model(const SpacePtr& s, const SolipsisticWitness& w, const Outputs& o);

EmpiricalModel deterministic_model(const SpacePtr& s, const Family& family, const Outputs& o);
bool is_deterministic(const EmpiricalModel& e);
bool is_globally_deterministic(const EmpiricalModel& e);

// Random standard model on a causal switch space: every event's output drawn
// from a random conditional distribution given the inputs and earlier outputs.
EmpiricalModel random_switch_model(const SpacePtr& s, const Outputs& o, std::mt19937_64& rng, int granularity = 12);

// parity correlator sum over the given rows: sum of E[(-1)^(o1+...+on) | row]
Rational parity_sum(const EmpiricalModel& e, const std::vector<std::string>& rows);
Rational parity_sum(const EmpiricalModel& e, const std::vector<Lowerset>& opens);

std::string model_csv(const EmpiricalModel& e);

}  // namespace caus
