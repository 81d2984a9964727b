#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "caus/builtins.hpp"
#include "caus/scenarios.hpp"

using namespace caus;

TEST_CASE("rationals read exactly") {
    CHECK(parse_rational("0.933") == Rational(933) / 1000);
    CHECK(parse_rational("1.000") == 1);
    CHECK(parse_rational("-0.5") == Rational(-1) / 2);
    CHECK(parse_rational(".25") == Rational(1) / 4);
    CHECK(parse_rational("6/8") == Rational(3) / 4);
    CHECK(parse_rational("007") == 7);
    CHECK(rational_string(parse_rational("6/8")) == "3/4");
    CHECK(rational_report(Rational(1) / 4, 2) == "1/4 (0.25)");
    CHECK(rational_report(Rational(2)) == "2");
    for (auto bad : {"", "abc", "1/0", "1.2.3", "1./2", "--1", "0x10", "1e3", "."}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(parse_rational(bad), std::invalid_argument);
    }
}

TEST_CASE("orders round trip") {
    for (auto& o : enumerate_orders({"A", "B", "C"})) {
        auto j = order_to_json(o);
        CHECK(order_from_json(j) == o);
        CHECK(order_to_json(order_from_json(j)) == j);
    }
    CHECK_THROWS(order_from_json(Json::parse(R"({"events":["A"],"pairs":[["A","Z"]]})")));
}

TEST_CASE("spaces round trip") {
    for (auto& name : builtin_space_names()) {
        CAPTURE(name);
        auto s = builtin_space(name);
        auto j = space_to_json(*s);
        auto back = space_from_json(j);
        CHECK(back->histories() == s->histories());
        CHECK(back->inputs() == s->inputs());
        CHECK(space_to_json(*back) == j);
        CHECK(space_from_json(Json(name))->histories() == s->histories());
        CHECK(space_from_json(Json{{"builtin", name}})->histories() == s->histories());
    }
    auto induced = space_from_json(Json::parse(R"({"order":{"events":["A","B"],"pairs":[["A","B"]]},"inputs":2})"));
    CHECK(induced->histories() == builtin_space("total2")->histories());
}

TEST_CASE("malformed spaces are rejected") {
    CHECK_THROWS(space_from_json(Json("no_such_space")));
    CHECK_THROWS(space_from_json(Json::parse(R"({"events":["A","B"],"histories":["0"]})")));
    CHECK_THROWS(space_from_json(Json::parse(R"({"events":["A"],"inputs":[2],"histories":["2"]})")));
    CHECK_THROWS(space_from_json(Json::parse(R"({"events":["A"]})")));
}

TEST_CASE("functions round trip") {
    std::mt19937_64 rng(3);
    for (auto name : {"theta33", "switch3", "fork", "cross", "ternary"}) {
        auto s = builtin_space(name);
        Outputs o = builtin_outputs(name);
        std::uniform_int_distribution<std::uint64_t> pick(0, count_causal_functions_u64(*s, o) - 1);
        for (int i = 0; i < 20; ++i) {
            auto f = function_at(s, o, pick(rng));
            auto j = function_to_json(f, name);
            CHECK(j.at("table").size() == std::size_t(s->num_classes()));
            auto g = function_from_json(j);
            CHECK(g == f);
            CHECK(function_to_json(g, name) == j);
        }
    }
    auto s = builtin_space("total2");
    auto j = function_to_json(function_at(s, {2, 2}, 0), "total2");
    j["table"]["B|{A:0,B:1}"] = 2;
    CHECK_THROWS(function_from_json(j));
    j["table"].erase("B|{A:0,B:1}");
    CHECK_THROWS(function_from_json(j));
}

TEST_CASE("truth table csv") {
    auto s = builtin_space("total2");
    // B copies A's input
    auto f = build_function(s, {2, 2}, [](const History& h, int e) { return e == 1 ? h[0] : 0; });
    REQUIRE(f.has_value());
    CHECK(function_csv(*f) == "inputs,outputs\n00,00\n01,00\n10,01\n11,01\n");
    // input 1 never occurs, so there is no full truth table
    auto partial = HistorySpace::make({"A"}, {2}, {from_code("0")});
    CHECK_THROWS(function_csv(function_at(partial, {2}, 0)));
}

TEST_CASE("models round trip") {
    for (auto& name : scenario_names()) {
        CAPTURE(name);
        auto raw = read_json_file(scenario_dir() + "/" + name + ".json").at("model");
        auto e = model_from_json(raw);
        auto j = model_to_json(e, raw.at("space"));
        auto again = model_from_json(j);
        CHECK(again.cover == e.cover);
        CHECK(again.components == e.components);
        CHECK(model_to_json(again, raw.at("space")) == j);
        // rows stay rows, components stay components
        CHECK(j.contains("rows") == raw.contains("rows"));
        CHECK(j.at("cover") == raw.at("cover"));
    }
}

TEST_CASE("malformed models are rejected") {
    auto base = read_json_file(scenario_dir() + "/causal_fork.json").at("model");
    auto j = base;
    j["rows"]["000"]["000"] = "1/2";
    CHECK_THROWS(model_from_json(j));
    j = base;
    j["rows"]["000"]["000"] = "a quarter";
    CHECK_THROWS_AS(model_from_json(j), std::invalid_argument);
    j = base;
    j["cover"] = "coarsest";
    CHECK_THROWS(model_from_json(j));
    j = base;
    j.erase("rows");
    CHECK_THROWS(model_from_json(j));

    auto tri = read_json_file(scenario_dir() + "/contextual_triangle.json").at("model");
    auto t = tri;
    t["components"][0]["weights"]["012"] = "0";
    CHECK_THROWS(model_from_json(t));
    t = tri;
    t["components"].erase(2);
    CHECK_THROWS(model_from_json(t));
    t = tri;
    t["cover"] = Json::parse(R"([["0","1"],["1","2"]])");
    CHECK_THROWS(model_from_json(t));
    t = tri;
    t["components"][1]["weights"]["01"] = "-1/2";
    CHECK_THROWS(model_from_json(t));
}
