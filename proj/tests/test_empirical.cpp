#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "caus/builtins.hpp"
#include "caus/empirical.hpp"

using namespace caus;

static Outputs binary(const SpacePtr& s) { return Outputs(s->num_events(), 2); }

// full 8-column table over ABC from dense rows of rationals
static Table dense_table(const std::vector<std::pair<std::string, std::vector<Rational>>>& rows) {
    Table t;
    for (auto& [in, ps] : rows)
        for (int c = 0; c < 8; ++c) {
            std::string col{char('0' + (c >> 2)), char('0' + ((c >> 1) & 1)), char('0' + (c & 1))};
            if (ps[c] != 0) t[in][col] = ps[c];
        }
    return t;
}

static Table fork_table() {
    const Rational q(1, 4), e(1, 8), z(0);
    std::vector<Rational> flat(8, e);
    return dense_table({{"000", {q, q, z, z, z, z, q, q}},
                        {"001", {z, z, q, q, q, q, z, z}},
                        {"010", flat},
                        {"011", flat},
                        {"100", flat},
                        {"101", flat},
                        {"110", {q, z, z, q, z, q, q, z}},
                        {"111", {q, z, z, q, z, q, q, z}}});
}

static Rational dec(const char* s) {
    // three-decimal literal as an exact rational
    std::string t(s);
    auto dot = t.find('.');
    std::string digits = t.substr(0, dot) + t.substr(dot + 1);
    Rational q(mpz_class(digits, 10), mpz_class(1000));
    q.canonicalize();
    return q;
}

static Table lg_table() {
    auto r = [](std::initializer_list<const char*> xs) {
        std::vector<Rational> v;
        for (auto x : xs) v.push_back(dec(x));
        return v;
    };
    return dense_table({
        {"000", r({"1.000", "0.000", "0.000", "0.000", "0.000", "0.000", "0.000", "0.000"})},
        {"001", r({"0.933", "0.067", "0.000", "0.000", "0.000", "0.000", "0.000", "0.000"})},
        {"010", r({"0.067", "0.000", "0.933", "0.000", "0.000", "0.000", "0.000", "0.000"})},
        {"011", r({"0.017", "0.050", "0.700", "0.233", "0.000", "0.000", "0.000", "0.000"})},
        {"100", r({"0.500", "0.000", "0.000", "0.000", "0.500", "0.000", "0.000", "0.000"})},
        {"101", r({"0.125", "0.375", "0.000", "0.000", "0.375", "0.125", "0.000", "0.000"})},
        {"110", r({"0.125", "0.000", "0.375", "0.000", "0.375", "0.000", "0.125", "0.000"})},
        {"111", r({"0.031", "0.094", "0.281", "0.094", "0.094", "0.281", "0.094", "0.031"})},
    });
}

// Oracle: the standard-cover table of a classical distribution on a space with
// free choice, read off directly from the joint input/output behaviour.
static Table classical_table(const CausalDistribution& d) {
    Table t;
    const auto& s = *d.space;
    for (auto& [idx, w] : d.weights) {
        auto F = to_joint_io(d.function(idx));
        auto ks = total_assignments(s);
        for (std::size_t i = 0; i < ks.size(); ++i) t[to_code(ks[i], s.num_events())][to_code(F.rows[i], s.num_events())] += w;
    }
    return t;
}

static Table drop_zeros(Table t) {
    for (auto& [k, row] : t)
        for (auto it = row.begin(); it != row.end();) it = it->second == 0 ? row.erase(it) : std::next(it);
    return t;
}

TEST_CASE("fork table reads as a standard model") {
    auto s = builtin_space("fork");
    auto e = model_from_table(s, binary(s), fork_table());
    CHECK(e.cover == standard_cover(*s));
    CHECK(e.cover.opens.size() == 8);
    CHECK(validate_model(e).ok);
    CHECK(drop_zeros(*model_table(e)) == fork_table());

    // row 001 is the four functions with o_A xor o_B = 1
    auto row = e.component(ext_lowerset(*s, from_code("001")));
    CHECK(row.weights.size() == 4);
    for (auto& [idx, w] : row.weights) {
        CHECK(w == Rational(1, 4));
        auto f = row.function(idx);
        int k = f.space()->ext_index_of(from_code("001"));
        CHECK((f.ext_at(k, 0) ^ f.ext_at(k, 1)) == 1);
    }

    // C alone is uniform in every row
    for (int c = 0; c < 2; ++c) {
        Lowerset only_c = ext_lowerset(*s, from_code(std::string("__") + char('0' + c)));
        auto m = marginalize(e.component(ext_lowerset(*s, from_code(std::string("00") + char('0' + c)))), only_c);
        CHECK(m.weights.size() == 2);
        for (auto& [idx, w] : m.weights) CHECK(w == Rational(1, 2));
    }
}

TEST_CASE("validation catches broken models") {
    auto s = builtin_space("fork");
    auto e = model_from_table(s, binary(s), fork_table());
    auto scaled = e;
    for (auto& [idx, w] : scaled.components[3].weights) w *= 2;
    auto r = validate_model(scaled);
    CHECK_FALSE(r.ok);
    CHECK(r.message.find("normalization") != std::string::npos);

    // moving mass in one row changes the C marginal against its neighbours
    auto t = fork_table();
    t["000"] = {{"000", Rational(1, 2)}, {"110", Rational(1, 2)}};
    auto bad = model_from_table(s, binary(s), t);
    auto rb = validate_model(bad);
    CHECK_FALSE(rb.ok);
    CHECK(rb.message.find("compatibility") != std::string::npos);

    auto t2 = fork_table();
    t2["000"]["000"] = Rational(1, 2);
    CHECK_THROWS(model_from_table(s, binary(s), t2));
    t2 = fork_table();
    t2.erase("111");
    CHECK_THROWS(model_from_table(s, binary(s), t2));
}

TEST_CASE("marginalisation is functorial") {
    std::mt19937_64 rng(11);
    for (auto name : {"total3", "fork", "theta33", "switch3"}) {
        auto s = builtin_space(name);
        const auto o = binary(s);
        auto full = empty_distribution(s, full_lowerset(*s), o);
        auto n = count_causal_functions_u64(*s, o);
        std::uniform_int_distribution<std::uint64_t> pick(0, n - 1);
        for (int i = 0; i < 6; ++i) full.add(pick(rng), Rational(1 + i) / 21);
        auto ls = space_lowersets(*s);
        int checked = 0;
        for (Lowerset a : ls)
            for (Lowerset b : ls) {
                if ((b & ~a) != 0 || ++checked > 400) continue;
                auto direct = marginalize(full, b);
                auto twice = marginalize(marginalize(full, a), b);
                CHECK(direct == twice);
                CHECK(direct.total() == 1);
            }
        CHECK(marginalize(full, full_lowerset(*s)) == full);
    }
}

TEST_CASE("delta distributions restrict the function") {
    auto s = builtin_space("theta33");
    auto o = binary(s);
    auto f = function_at(s, o, 173);
    for (Lowerset l : space_lowersets(*s)) {
        auto d = delta_distribution(s, l, f);
        REQUIRE(d.weights.size() == 1);
        CHECK(d.function(d.weights.begin()->first) == restrict_function(f, d.space));
    }
}

TEST_CASE("fork model is local on the fork space and on both class-33 subspaces") {
    for (auto name : {"fork", "fork_a_cb", "fork_b_ca"}) {
        CAPTURE(name);
        auto s = builtin_space(name);
        auto e = model_from_table(s, binary(s), fork_table());
        REQUIRE(validate_model(e).ok);
        auto r = noncontextual_fraction(e);
        CHECK(r.value == 1);
        CHECK(check_certificate(e, r));
    }
}

TEST_CASE("fork model has no local part on the discrete space") {
    auto s = builtin_space("discrete3");
    auto e = model_from_table(s, binary(s), fork_table());
    // the A,B correlations depend on C's input, which the discrete space forbids
    auto report = validate_model(e);
    CHECK_FALSE(report.ok);
    CHECK(report.message.find("compatibility") != std::string::npos);
    auto r = noncontextual_fraction(e);
    CHECK(r.value == 0);
    CHECK(r.decomposition.empty());

    // Oracle: every one of the 64 product functions o_X = g_X(i_X) lands on a
    // zero entry of the table.
    auto t = fork_table();
    int supported = 0;
    for (int g = 0; g < 64; ++g) {
        bool ok = true;
        for (auto& [in, row] : t) {
            std::string out;
            for (int x = 0; x < 3; ++x) out += char('0' + ((g >> (2 * x + (in[x] - '0'))) & 1));
            if (!row.count(out)) ok = false;
        }
        supported += ok;
    }
    CHECK(supported == 0);
}

static EmpiricalModel triangle() {
    auto s = builtin_space("ternary");
    Outputs o{2};
    std::vector<Lowerset> opens;
    for (auto [i, j] : {std::pair{0, 1}, {0, 2}, {1, 2}})
        opens.push_back(ext_lowerset(*s, from_code(std::string(1, char('0' + i)))) |
                        ext_lowerset(*s, from_code(std::string(1, char('0' + j)))));
    Cover c = make_cover(opens);
    EmpiricalModel e{s, o, c, {}};
    for (Lowerset l : c.opens) {
        auto d = empty_distribution(s, l, o);
        int first = lowerset_indices(l).front();
        for (int v = 0; v < 2; ++v) {
            auto f = build_function(d.space, o, [&](const History& h, int) {
                return s->index_of(h) == first ? v : 1 - v;
            });
            d.add(function_index(*f), Rational(1, 2));
        }
        e.components.push_back(d);
    }
    return e;
}

TEST_CASE("contextual triangle") {
    auto e = triangle();
    REQUIRE(is_cover(*e.space, e.cover));
    REQUIRE(validate_model(e).ok);
    CHECK(parity_sum(e, e.cover.opens) == -3);

    // Oracle: a classical model with weights d has correlator sum
    // 4(d(000)+d(111)) - 1, so every deterministic one is at least -1.
    for (int g = 0; g < 8; ++g) {
        int sum = 0;
        for (auto [i, j] : {std::pair{0, 1}, {0, 2}, {1, 2}}) sum += ((g >> i) & 1) == ((g >> j) & 1) ? 1 : -1;
        CHECK(sum == ((g == 0 || g == 7) ? 3 : -1));
    }
    // each of the 8 global functions gives equal outputs on some pair, where
    // the triangle puts no weight: nothing of it is classical
    auto r = noncontextual_fraction(e);
    CHECK(r.value == 0);
    CHECK(contextual_fraction(e) == 1);
    CHECK_FALSE(is_noncontextual(e));
}

TEST_CASE("restricting a classical model and recovering it") {
    std::mt19937_64 rng(5);
    for (auto name : {"theta33", "fork", "switch3", "theta101"}) {
        auto s = builtin_space(name);
        const auto o = binary(s);
        auto full = empty_distribution(s, full_lowerset(*s), o);
        std::uniform_int_distribution<std::uint64_t> pick(0, count_causal_functions_u64(*s, o) - 1);
        for (int i = 0; i < 4; ++i) full.add(pick(rng), Rational(1, 4));
        for (auto& c : {standard_cover(*s), solipsistic_cover(*s), classical_cover(*s)}) {
            auto e = restrict_model(full, c);
            CHECK(validate_model(e).ok);
            auto r = noncontextual_fraction(e);
            CHECK(r.value == 1);
            CHECK(check_certificate(e, r));
            if (refines(c, standard_cover(*s))) CHECK(solipsistic_extension_exists(e));
        }
        auto std_model = restrict_model(full, standard_cover(*s));
        auto finer = restrict_model(std_model, solipsistic_cover(*s));
        CHECK(finer.components.size() == solipsistic_cover(*s).opens.size());
        CHECK(validate_model(finer).ok);
    }
}

TEST_CASE("random standard models on total orders are local") {
    std::mt19937_64 rng(2024);
    int count = 0;
    for (auto name : {"total2", "total3"})
        for (int i = 0; i < 100; ++i) {
            auto s = builtin_space(name);
            auto e = random_switch_model(s, binary(s), rng);
            REQUIRE(validate_model(e).ok);
            auto r = noncontextual_fraction(e);
            CHECK(r.value == 1);
            if (i % 10 == 0) CHECK(check_certificate(e, r));
            ++count;
        }
    CHECK(count == 200);
}

TEST_CASE("localisation restricts exactly") {
    std::mt19937_64 rng(99);
    for (auto name : {"total2", "total3", "switch3", "discrete2"}) {
        auto s = builtin_space(name);
        if (!is_switch_space(*s)) {
            CHECK(std::string(name) == "discrete2");
            continue;
        }
        for (int i = 0; i < 10; ++i) {
            auto e = random_switch_model(s, binary(s), rng, 5);
            for (auto cp : {Coupling::product, Coupling::quantile}) {
                auto d = localize_switch_model(e, cp);
                CHECK(d.total() == 1);
                auto back = restrict_model(d, e.cover);
                for (std::size_t j = 0; j < e.components.size(); ++j) CHECK(back.components[j] == e.components[j]);
            }
        }
    }
    CHECK_FALSE(is_switch_space(*builtin_space("fork")));
    CHECK_FALSE(is_switch_space(*builtin_space("theta33")));
    // a single indiscrete block is a switch space
    CHECK(is_switch_space(*builtin_space("indiscrete2")));
}

TEST_CASE("classical switch table") {
    auto s = builtin_space("switch3");
    const Rational a(3, 4), b(1, 4);
    Table t;
    for (int ia = 0; ia < 2; ++ia)
        for (int ib = 0; ib < 2; ++ib)
            for (int ic = 0; ic < 2; ++ic) {
                std::string in{char('0' + ia), char('0' + ib), char('0' + ic)};
                std::string first{'0', '0', char('0' + ib)}, second{'1', char('0' + ic), '0'};
                t[in][first] = ia == 0 ? a : b;
                t[in][second] = ia == 0 ? b : a;
            }
    CHECK(t["001"]["000"] == a);
    CHECK(t["001"]["110"] == b);
    auto e = model_from_table(s, binary(s), t);
    CHECK(validate_model(e).ok);
    CHECK_FALSE(is_causally_complete(*s));
    auto d = localize_switch_model(e);
    CHECK(restrict_model(d, e.cover).components == e.components);
    CHECK(noncontextual_fraction(e).value == 1);
}

TEST_CASE("Leggett-Garg model") {
    auto s = builtin_space("total3");
    auto e = model_from_table(s, binary(s), lg_table());
    REQUIRE(validate_model(e).ok);
    CHECK(parity_sum(e, std::vector<std::string>{"011", "101", "110"}) == Rational(-3, 2));

    // row by row from the table
    Rational by_hand = 0;
    auto t = lg_table();
    for (auto row : {"011", "101", "110"})
        for (auto& [out, p] : t[row]) by_hand += ((out[0] + out[1] + out[2]) % 2 == 0) ? p : Rational(-p);
    CHECK(by_hand == Rational(-3, 2));

    for (auto cp : {Coupling::product, Coupling::quantile}) {
        auto d = localize_switch_model(e, cp);
        CHECK(restrict_model(d, e.cover).components == e.components);
        CHECK(classical_table(d) == t);
    }
    auto q = localize_switch_model(e, Coupling::quantile);
    CHECK(q.weights.size() == 12);
    CHECK(noncontextual_fraction(e).value == 1);
}

TEST_CASE("solipsistic witnesses give contextual models") {
    int witnesses = 0;
    for (auto& name : builtin_space_names()) {
        auto s = builtin_space(name);
        if (s->size() > 20) continue;
        auto o = builtin_outputs(name);
        for (auto& w : find_solipsistic_witnesses(*s, false)) {
            if (o[w.event] < 2) continue;
            CAPTURE(name);
            auto e = witness_model(s, w, o);
            CHECK(validate_model(e).ok);
            CHECK(is_deterministic(e));
            CHECK_FALSE(solipsistic_extension_exists(e));
            CHECK(displays_solipsistic_contextuality(e));
            ++witnesses;
        }
    }
    CHECK(witnesses > 0);
}

TEST_CASE("theta17 witness model") {
    auto s = builtin_space("theta17");
    auto ws = find_solipsistic_witnesses(*s);
    REQUIRE(ws.size() == 1);
    // the indicator sits on {A:1,C:1}, as in the printed table
    SolipsisticWitness w = ws[0];
    if (w.h != from_code("1_1")) std::swap(w.h, w.h2);
    REQUIRE(check_solipsistic_witness(*s, w));
    auto e = witness_model(s, w, binary(s));
    CHECK(e.cover.opens.size() == 5);
    CHECK_FALSE(solipsistic_extension_exists(e));
    CHECK_FALSE(is_globally_deterministic(e));
    auto t = drop_zeros(*model_table(e));
    Table expect{{"__0", {{"__0", 1}}},
                 {"_11", {{"_00", 1}}},
                 {"1_1", {{"0_1", 1}}},
                 {"10_", {{"00_", 1}}},
                 {"001", {{"000", 1}}}};
    CHECK(t == expect);
    auto csv = model_csv(e);
    CHECK(csv.rfind("inputs,__0,__1,_00,_01,_10,_11,0_0,0_1,1_0,1_1,00_,01_,10_,11_,000,001,", 0) == 0);
    CHECK(csv.find("\n__0,1,0,,,,,") != std::string::npos);
    CHECK(csv.find("\n1_1,,,,,,,0,1,0,0,,") != std::string::npos);

    // the all-zero family is a global function and extends
    auto zero = e;
    for (std::size_t i = 0; i < zero.components.size(); ++i) {
        auto d = empty_distribution(s, zero.cover.opens[i], zero.outputs);
        d.add(0, 1);
        zero.components[i] = d;
    }
    CHECK(solipsistic_extension_exists(zero));
    CHECK(is_globally_deterministic(zero));
}

static CausalFunction joint(const SpacePtr& s, std::function<History(const History&)> rule) {
    JointIO F;
    F.n = s->num_events();
    for (auto& k : total_assignments(*s)) F.rows.push_back(rule(k));
    return from_joint_io(F, s, binary(s));
}

TEST_CASE("separable fractions") {
    auto s = builtin_space("indiscrete2");
    const Rational h(1, 2);
    Table t{{"00", {{"00", h}, {"11", h}}}, {"01", {{"01", h}, {"10", h}}},
            {"10", {{"01", h}, {"10", h}}}, {"11", {{"00", h}, {"11", h}}}};
    auto e = model_from_table(s, binary(s), t);
    REQUIRE(validate_model(e).ok);
    auto sep = separable_noncontextual_fraction(e);
    CHECK(sep.value == 1);
    CHECK(check_certificate(e, sep));
    for (auto& [f, w] : sep.decomposition) CHECK(is_separable(f));

    // identity and bitflip are the separable pair in the decomposition
    auto id = joint(s, [](const History& k) { return k; });
    auto flip = joint(s, [](const History& k) {
        History o;
        o.set(0, 1 - k[0]);
        o.set(1, 1 - k[1]);
        return o;
    });
    CHECK(is_separable(id));
    CHECK(is_separable(flip));
    FractionResult printed{1, {{id, h}, {flip, h}}, 0};
    CHECK(check_certificate(e, printed));
    FractionResult half{h, {{id, h}}, 0};
    CHECK(check_certificate(e, half));
}

TEST_CASE("controlled swap as a deterministic model") {
    auto s = builtin_space("switch3");
    auto f = joint(s, [](const History& k) {
        History o;
        o.set(0, k[0]);
        o.set(1, k[0] ? k[2] : k[1]);
        o.set(2, k[0] ? k[1] : k[2]);
        return o;
    });
    REQUIRE_FALSE(is_separable(f));
    auto e = restrict_model(delta_distribution(s, full_lowerset(*s), f), standard_cover(*s));
    CHECK(noncontextual_fraction(e).value == 1);
    // the standard opens cover every history, so no other function matches
    auto sep = separable_noncontextual_fraction(e);
    CHECK(sep.value == 0);
    CHECK(sep.value < 1);
}
