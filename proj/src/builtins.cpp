#include "caus/builtins.hpp"

#include <functional>
#include <map>
#include <stdexcept>

namespace caus {

namespace {

const std::vector<std::string> ABC{"A", "B", "C"};

SpacePtr from_codes(const std::vector<std::string>& names, const std::vector<int>& inputs,
                    const std::vector<std::string>& codes) {
    std::vector<History> hs;
    for (auto& c : codes) hs.push_back(from_code(c));
    return HistorySpace::make(names, inputs, hs);
}

SpacePtr binary3(const std::vector<std::string>& codes) { return from_codes(ABC, {2, 2, 2}, codes); }

SpacePtr fork_space() {
    auto c = induced_space(discrete_order({"C"}));
    auto a = induced_space(discrete_order({"A"}));
    auto b = induced_space(discrete_order({"B"}));
    auto s = sequential_compose(*c, *parallel_compose(*a, *b));
    return permute_events(*s, ABC);
}

const std::map<std::string, std::function<SpacePtr()>>& table() {
    static const std::map<std::string, std::function<SpacePtr()>> t{
        {"ternary", [] { return induced_space(discrete_order({"A"}), std::vector<int>{3}); }},
        {"discrete2", [] { return induced_space(discrete_order({"A", "B"})); }},
        {"total2", [] { return induced_space(chain_order({{"A"}, {"B"}})); }},
        {"indiscrete2", [] { return induced_space(indiscrete_order({"A", "B"})); }},
        {"middle2", [] { return from_codes({"A", "B"}, {2, 2}, {"0_", "1_", "_0", "01", "11"}); }},
        {"discrete3", [] { return induced_space(discrete_order(ABC)); }},
        {"total3", [] { return induced_space(chain_order({{"A"}, {"B"}, {"C"}})); }},
        {"indiscrete3", [] { return induced_space(indiscrete_order(ABC)); }},
        {"switch3", [] { return induced_space(chain_order({{"A"}, {"B", "C"}})); }},
        {"fork", fork_space},
        {"fork_a_cb", [] { return induced_space(make_order(ABC, std::vector<std::pair<std::string, std::string>>{{"C", "B"}})); }},
        {"fork_b_ca", [] { return induced_space(make_order(ABC, std::vector<std::pair<std::string, std::string>>{{"C", "A"}})); }},
        {"theta33", [] { return induced_space(make_order(ABC, std::vector<std::pair<std::string, std::string>>{{"A", "B"}})); }},
        {"theta101",
         [] {
             return binary3({"0__", "1__", "00_", "01_", "000", "001", "010", "011", "1_0", "1_1", "100", "101", "110",
                             "111"});
         }},
        {"theta21", [] { return binary3({"0__", "1__", "_0_", "__0", "01_", "_10", "1_1", "_01", "111", "011"}); }},
        {"theta7", [] { return binary3({"0__", "_0_", "__0", "__1", "_10", "01_", "_11", "1_0", "10_", "1_1"}); }},
        {"theta3",
         [] {
             return binary3({"0__", "1__", "__0", "__1", "00_", "01_", "10_", "11_", "_00", "_01", "_10", "_11"});
         }},
        {"theta17", [] { return binary3({"0__", "1__", "_1_", "__0", "00_", "10_", "1_1", "_11", "001"}); }},
        // minimal spaces below the fork lifts whose lifted fork model is fully contextual
        {"class2_a_cb", [] { return binary3({"__0", "__1", "_1_", "0__", "1__", "_00", "_01", "10_"}); }},
        {"class2_b_ca", [] { return binary3({"__0", "__1", "_0_", "_1_", "1__", "0_0", "0_1", "01_"}); }},
        {"cross",
         [] {
             std::vector<std::string> codes;
             for (int a = 0; a < 2; ++a) {
                 codes.push_back(std::to_string(a) + "____");
                 codes.push_back("_" + std::to_string(a) + "___");
                 for (int b = 0; b < 2; ++b)
                     for (int c = 0; c < 2; ++c) {
                         std::string abc = std::to_string(a) + std::to_string(b) + std::to_string(c);
                         codes.push_back(abc + "__");
                         codes.push_back(abc + "0_");
                         codes.push_back(abc + "_0");
                     }
             }
             return from_codes({"A", "B", "C", "D", "E"}, {2, 2, 2, 1, 1}, codes);
         }},
    };
    return t;
}

}  // namespace

SpacePtr builtin_space(const std::string& name) {
    auto& t = table();
    auto it = t.find(name);
    if (it == t.end()) throw std::invalid_argument("unknown builtin space: " + name);
    return it->second();
}

std::vector<std::string> builtin_space_names() {
    std::vector<std::string> out;
    for (auto& [k, v] : table()) out.push_back(k);
    return out;
}

std::vector<int> builtin_outputs(const std::string& name) {
    if (name == "cross") return {1, 1, 2, 2, 2};
    return std::vector<int>(builtin_space(name)->num_events(), 2);
}

}  // namespace caus
