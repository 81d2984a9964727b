#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "caus/order.hpp"
#include "oracle.hpp"

using namespace caus;

static oracle::Rel rel_of(const CausalOrder& o) {
    oracle::Rel r(o.size(), std::vector<bool>(o.size()));
    for (int i = 0; i < o.size(); ++i)
        for (int j = 0; j < o.size(); ++j) r[i][j] = o.leq(i, j);
    return r;
}

static const std::vector<std::string> ABC{"A", "B", "C"};

TEST_CASE("make_order closes the relation") {
    auto o = make_order(ABC, std::vector<std::pair<std::string, std::string>>{{"A", "B"}, {"B", "C"}});
    CHECK(o.leq(0, 2));
    CHECK(classify_pair(o, 0, 1) == Relation::precedes);
    CHECK(classify_pair(o, 0, 2) == Relation::precedes);
    CHECK(classify_pair(o, 2, 0) == Relation::succeeds);

    auto cyc = make_order(ABC, std::vector<std::pair<std::string, std::string>>{{"B", "C"}, {"C", "B"}});
    CHECK(classify_pair(cyc, 1, 2) == Relation::indefinite);
    CHECK(classify_pair(cyc, 0, 1) == Relation::unrelated);
    CHECK_FALSE(is_definite(cyc));

    auto one = make_order({"A"}, std::vector<std::pair<int, int>>{});
    CHECK(one.size() == 1);
    CHECK(one.leq(0, 0));
    CHECK(classify_pair(one, 0, 0) == Relation::equal);

    CHECK_THROWS_AS(make_order(ABC, std::vector<std::pair<int, int>>{{0, 5}}), std::invalid_argument);
    CHECK_THROWS_AS(make_order(ABC, std::vector<std::pair<std::string, std::string>>{{"A", "Z"}}), std::invalid_argument);
}

TEST_CASE("closure idempotence and duality over all 3-event orders") {
    for (auto& o : enumerate_orders(ABC)) {
        auto again = make_order(o.names(), o.pairs());
        CHECK(again == o);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                CHECK((classify_pair(o, i, j) == Relation::precedes) == (classify_pair(o, j, i) == Relation::succeeds));
    }
}

TEST_CASE("definiteness") {
    std::vector<std::string> abcd{"A", "B", "C", "D"};
    auto diamond = make_order(abcd, std::vector<std::pair<std::string, std::string>>{{"A", "B"}, {"A", "C"}, {"B", "D"}, {"C", "D"}});
    CHECK(is_definite(diamond));
    auto indef = make_order(abcd, std::vector<std::pair<std::string, std::string>>{
                                      {"A", "B"}, {"A", "C"}, {"B", "D"}, {"C", "D"}, {"B", "C"}, {"C", "B"}});
    CHECK_FALSE(is_definite(indef));
    CHECK(is_definite(make_order({}, std::vector<std::pair<int, int>>{})));
}

TEST_CASE("lowerset examples") {
    auto total = chain_order({{"A"}, {"B"}, {"C"}});
    CHECK(lowersets(total) == std::vector<EventSet>{0, 0b001, 0b011, 0b111});

    std::vector<std::string> abcd{"A", "B", "C", "D"};
    auto diamond = make_order(abcd, std::vector<std::pair<std::string, std::string>>{{"A", "B"}, {"A", "C"}, {"B", "D"}, {"C", "D"}});
    auto ls = lowersets(diamond);
    CHECK(ls.size() == 6);  // five nonempty plus the empty set
    CHECK(std::find(ls.begin(), ls.end(), EventSet(0b0111)) != ls.end());

    auto indef = chain_order({{"A"}, {"B", "C"}, {"D"}});
    CHECK(lowersets(indef) == std::vector<EventSet>{0, 0b0001, 0b0111, 0b1111});

    auto empty = make_order({}, std::vector<std::pair<int, int>>{});
    CHECK(lowersets(empty) == std::vector<EventSet>{0});
}

TEST_CASE("lowersets agree with the brute-force oracle and are lattice-closed") {
    for (int n = 0; n <= 4; ++n) {
        std::vector<std::string> ev;
        for (int i = 0; i < n; ++i) ev.push_back(std::string(1, char('A' + i)));
        for (auto& o : enumerate_orders(ev)) {
            auto ls = lowersets(o);
            std::set<std::uint32_t> mine(ls.begin(), ls.end());
            CHECK(mine == oracle::lowersets(rel_of(o)));
            for (auto a : ls)
                for (auto b : ls) {
                    CHECK(mine.count(a | b));
                    CHECK(mine.count(a & b));
                }
        }
    }
}

TEST_CASE("enumerate_orders matches the relation oracle") {
    CHECK(enumerate_orders({"A"}).size() == 1);
    CHECK(enumerate_orders({"A", "B"}).size() == 4);
    for (int n = 0; n <= 4; ++n) {
        std::vector<std::string> ev;
        for (int i = 0; i < n; ++i) ev.push_back(std::string(1, char('A' + i)));
        auto mine = enumerate_orders(ev);
        auto ref = oracle::all_preorders(n);
        CHECK(mine.size() == ref.size());
        std::set<oracle::Rel> a, b(ref.begin(), ref.end());
        for (auto& o : mine) a.insert(rel_of(o));
        CHECK(a == b);
        auto serial = enumerate_orders_serial(ev);
        CHECK(serial == mine);
    }
    CHECK(enumerate_orders(ABC).size() == 29);
    CHECK_THROWS_AS(enumerate_orders({"A", "B", "C", "D", "E"}), std::invalid_argument);
}

TEST_CASE("join, meet and contravariance on 3 events") {
    auto orders = enumerate_orders(ABC);
    bool strict_meet = false;
    for (auto& a : orders) {
        auto la = lowersets(a);
        std::set<EventSet> sa(la.begin(), la.end());
        for (auto& b : orders) {
            auto lb = lowersets(b);
            std::set<EventSet> sb(lb.begin(), lb.end());
            auto lj = lowersets(order_join(a, b));
            std::set<EventSet> sj(lj.begin(), lj.end()), inter;
            std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::inserter(inter, inter.begin()));
            CHECK(sj == inter);

            auto lm = lowersets(order_meet(a, b));
            std::set<EventSet> sm(lm.begin(), lm.end()), uni;
            std::set_union(sa.begin(), sa.end(), sb.begin(), sb.end(), std::inserter(uni, uni.begin()));
            CHECK(std::includes(sm.begin(), sm.end(), uni.begin(), uni.end()));
            if (sm != uni) strict_meet = true;

            bool sup = std::includes(sa.begin(), sa.end(), sb.begin(), sb.end());
            CHECK(order_leq(a, b) == sup);
        }
        CHECK(order_join(discrete_order(ABC), a) == a);
    }
    CHECK(strict_meet);

    auto ab = chain_order({{"A"}, {"B"}});
    auto ba = chain_order({{"B"}, {"A"}});
    auto ba_relabel = make_order({"A", "B"}, std::vector<std::pair<int, int>>{{1, 0}});
    CHECK(order_meet(ab, ba_relabel) == discrete_order({"A", "B"}));
    CHECK_THROWS_AS(order_join(ab, ba), std::invalid_argument);
}

TEST_CASE("canonical form groups relabellings") {
    auto a = chain_order({{"A"}, {"B"}, {"C"}});
    auto b = make_order(ABC, std::vector<std::pair<int, int>>{{2, 1}, {1, 0}});
    CHECK(canonical_code(a) == canonical_code(b));
    std::set<std::uint64_t> classes;
    for (auto& o : enumerate_orders(ABC)) classes.insert(canonical_code(o));
    CHECK(classes.size() == 9);  // unlabelled preorders on 3 points
}

TEST_CASE("Hasse DOT condenses indefinite classes") {
    auto o = chain_order({{"A"}, {"B", "C"}, {"D"}});
    auto dot = hasse_dot(o);
    CHECK(dot.find("{B,C}") != std::string::npos);
    CHECK(dot.find("n0 -> n1") != std::string::npos);
    CHECK(dot.find("n0 -> n2") == std::string::npos);
}
