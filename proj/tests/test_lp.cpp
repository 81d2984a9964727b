#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <optional>
#include <random>

#include "caus/lp.hpp"

using namespace caus;

namespace {

struct Dense {
    std::vector<std::vector<int>> a;  // rows
    std::vector<int> c;
    std::vector<Rational> b;
    std::vector<RowSense> sense;
};

ColumnList columns_of(const Dense& d) {
    ColumnList cols;
    for (std::size_t j = 0; j < d.c.size(); ++j) {
        std::vector<LPEntry> col;
        for (std::size_t r = 0; r < d.a.size(); ++r)
            if (d.a[r][j] != 0) col.push_back({static_cast<int>(r), d.a[r][j]});
        cols.add(col, d.c[j]);
    }
    return cols;
}

LPResult solve(const Dense& d, Pricing pricing = Pricing::parallel) {
    auto cols = columns_of(d);
    LPProblem p{d.b, d.sense, &cols, {}};
    return solve_lp(p, pricing);
}

// Oracle: vertex enumeration. Slacks are added for <= rows, then every choice
// of m basic columns is solved by exact elimination; the best feasible basic
// solution is the optimum when the problem is bounded.
std::optional<Rational> vertex_optimum(const Dense& d) {
    const std::size_t m = d.a.size();
    std::vector<std::vector<Rational>> A(m);
    std::vector<Rational> c;
    for (std::size_t r = 0; r < m; ++r)
        for (int x : d.a[r]) A[r].push_back(x);
    for (int x : d.c) c.push_back(x);
    for (std::size_t r = 0; r < m; ++r)
        if (d.sense[r] == RowSense::leq) {
            for (std::size_t q = 0; q < m; ++q) A[q].push_back(q == r ? 1 : 0);
            c.push_back(0);
        }
    const std::size_t n = c.size();
    std::optional<Rational> best;
    std::vector<int> pick(n, 0);
    std::fill(pick.begin(), pick.begin() + std::min(m, n), 1);
    std::sort(pick.begin(), pick.end());
    do {
        std::vector<std::size_t> basis;
        for (std::size_t j = 0; j < n; ++j)
            if (pick[j]) basis.push_back(j);
        // Gaussian elimination on [A_B | b]
        std::vector<std::vector<Rational>> M(m, std::vector<Rational>(basis.size() + 1));
        for (std::size_t r = 0; r < m; ++r) {
            for (std::size_t k = 0; k < basis.size(); ++k) M[r][k] = A[r][basis[k]];
            M[r][basis.size()] = d.b[r];
        }
        std::size_t row = 0;
        std::vector<int> pivot_col(m, -1);
        bool singular = false;
        for (std::size_t k = 0; k < basis.size(); ++k) {
            std::size_t p = row;
            while (p < m && M[p][k] == 0) ++p;
            if (p == m) {
                singular = true;
                break;
            }
            std::swap(M[p], M[row]);
            for (std::size_t r = 0; r < m; ++r) {
                if (r == row || M[r][k] == 0) continue;
                Rational f = M[r][k] / M[row][k];
                for (std::size_t q = 0; q <= basis.size(); ++q) M[r][q] -= f * M[row][q];
            }
            pivot_col[row] = static_cast<int>(k);
            ++row;
        }
        if (singular) continue;
        bool ok = true;
        for (std::size_t r = row; r < m; ++r)
            if (M[r][basis.size()] != 0) ok = false;
        if (!ok) continue;
        Rational val = 0;
        for (std::size_t r = 0; r < row; ++r) {
            Rational x = M[r][basis.size()] / M[r][pivot_col[r]];
            if (x < 0) ok = false;
            val += c[basis[pivot_col[r]]] * x;
        }
        if (ok && (!best || val > *best)) best = val;
    } while (std::next_permutation(pick.begin(), pick.end()));
    return best;
}

}  // namespace

TEST_CASE("small textbook programs") {
    // max 3x + 2y, x + y <= 4, x + 3y <= 6, x <= 3
    Dense d{{{1, 1}, {1, 3}, {1, 0}}, {3, 2}, {4, 6, 3}, std::vector<RowSense>(3, RowSense::leq)};
    auto r = solve(d);
    REQUIRE(r.status == LPStatus::optimal);
    CHECK(r.value == 11);
    // equality rows with a fractional vertex
    Dense e{{{2, 1, 1}, {1, 3, 0}}, {1, 1, 1}, {Rational(5, 2), 2}, {RowSense::eq, RowSense::eq}};
    auto s = solve(e);
    REQUIRE(s.status == LPStatus::optimal);
    CHECK(s.value == *vertex_optimum(e));
    // x + y = 1 and x + y = 2 cannot both hold
    Dense f{{{1, 1}, {1, 1}}, {1, 1}, {1, 2}, {RowSense::eq, RowSense::eq}};
    CHECK(solve(f).status == LPStatus::infeasible);
    // unbounded: x - y <= 1
    Dense g{{{1, -1}}, {1, 0}, {1}, {RowSense::leq}};
    CHECK(solve(g).status == LPStatus::unbounded);
}

TEST_CASE("negative right-hand side on an equality row") {
    Dense d{{{1, -1}}, {0, 1}, {-2}, {RowSense::eq}};
    d.a.push_back({1, 1});
    d.c = {0, 1};
    d.b.push_back(6);
    d.sense.push_back(RowSense::leq);
    auto r = solve(d);
    REQUIRE(r.status == LPStatus::optimal);
    CHECK(r.value == 4);
}

TEST_CASE("solutions satisfy the constraints and duals certify the value") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> coef(-2, 3), cost(-1, 4), rhs(0, 8);
    int checked = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const int m = 1 + trial % 3, n = 2 + trial % 4;
        Dense d;
        d.a.assign(m, std::vector<int>(n));
        for (auto& row : d.a)
            for (auto& x : row) x = coef(rng);
        for (int j = 0; j < n; ++j) d.c.push_back(cost(rng));
        for (int r = 0; r < m; ++r) {
            d.b.push_back(rhs(rng));
            d.sense.push_back(trial % 5 == 0 && r == 0 ? RowSense::eq : RowSense::leq);
        }
        auto res = solve(d, trial % 2 ? Pricing::serial : Pricing::parallel);
        auto oracle = vertex_optimum(d);
        if (res.status == LPStatus::infeasible) {
            CHECK_FALSE(oracle.has_value());
            continue;
        }
        REQUIRE(oracle.has_value());
        if (res.status == LPStatus::unbounded) continue;
        ++checked;
        CHECK(res.value == *oracle);
        std::vector<Rational> x(n);
        for (auto& [j, v] : res.solution) {
            CHECK(v > 0);
            x[j] = v;
        }
        Rational obj = 0;
        for (int j = 0; j < n; ++j) obj += d.c[j] * x[j];
        CHECK(obj == res.value);
        for (int r = 0; r < m; ++r) {
            Rational lhs = 0;
            for (int j = 0; j < n; ++j) lhs += d.a[r][j] * x[j];
            if (d.sense[r] == RowSense::eq)
                CHECK(lhs == d.b[r]);
            else
                CHECK(lhs <= d.b[r]);
        }
        // weak duality made tight
        REQUIRE(res.duals.size() == std::size_t(m));
        Rational dual_obj = 0;
        for (int r = 0; r < m; ++r) {
            if (d.sense[r] == RowSense::leq) CHECK(res.duals[r] >= 0);
            dual_obj += res.duals[r] * d.b[r];
        }
        CHECK(dual_obj == res.value);
        for (int j = 0; j < n; ++j) {
            Rational ay = 0;
            for (int r = 0; r < m; ++r) ay += d.a[r][j] * res.duals[r];
            CHECK(ay >= d.c[j]);
        }
    }
    CHECK(checked > 100);
}

TEST_CASE("degenerate program terminates") {
    // many columns through the same vertex
    Dense d;
    const int n = 12;
    d.a.assign(4, std::vector<int>(n));
    for (int j = 0; j < n; ++j) {
        d.a[j % 4][j] = 1;
        d.a[(j + 1) % 4][j] = 1;
        d.c.push_back(1);
    }
    d.b.assign(4, 0);
    d.b[0] = 1;
    d.sense.assign(4, RowSense::leq);
    auto r = solve(d);
    REQUIRE(r.status == LPStatus::optimal);
    CHECK(r.value == 0);
}

namespace {

// columns generated on demand: column j covers rows j mod m and (j*7) mod m
class Generated : public ColumnSource {
public:
    Generated(std::size_t n, int m) : n_(n), m_(m) {}
    std::size_t size() const override { return n_; }
    void column(std::size_t j, std::vector<LPEntry>& out) const override {
        out.clear();
        int a = static_cast<int>(j % m_), b = static_cast<int>((j * 7 + j / m_) % m_);
        out.push_back({a, 1});
        if (b != a) out.push_back({b, 1});
    }
    int cost(std::size_t j) const override { return 1 + static_cast<int>(j % 3); }

private:
    std::size_t n_;
    int m_;
};

}  // namespace

TEST_CASE("parallel and serial pricing agree") {
    Generated g(200000, 23);
    std::vector<double> y(23);
    for (int r = 0; r < 23; ++r) y[r] = 0.1 * (r % 5);
    for (Keep keep : {Keep::best, Keep::first})
        for (std::size_t limit : {std::size_t(5), std::size_t(1000), std::size_t(1) << 20}) {
            auto a = price_columns(g, y, 1e-9, limit, keep, Pricing::serial);
            auto b = price_columns(g, y, 1e-9, limit, keep, Pricing::parallel);
            CHECK(a.items == b.items);
            CHECK(a.overflow == b.overflow);
        }
    std::vector<Rational> rhs(23, Rational(1));
    LPProblem p{rhs, std::vector<RowSense>(23, RowSense::leq), &g, {}};
    auto s = solve_lp(p, Pricing::serial), t = solve_lp(p, Pricing::parallel);
    REQUIRE(s.status == LPStatus::optimal);
    CHECK(s.value == t.value);
    CHECK(s.value >= 23);
}
