#include "caus/lp.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>

namespace caus {

double ColumnSource::reduced_cost(std::size_t j, const double* y) const {
    thread_local std::vector<LPEntry> col;
    column(j, col);
    double r = cost(j);
    for (const auto& e : col) r -= e.coeff * y[e.row];
    return r;
}

std::size_t ColumnList::add(std::vector<LPEntry> entries, int cost) {
    cols_.push_back(std::move(entries));
    costs_.push_back(cost);
    return cols_.size() - 1;
}

namespace {

using Item = std::pair<std::size_t, double>;

void trim(std::vector<Item>& v, std::size_t limit, Keep keep) {
    if (v.size() <= limit) return;
    if (keep == Keep::best)
        std::nth_element(v.begin(), v.begin() + limit, v.end(), [](const Item& a, const Item& b) {
            return a.second != b.second ? a.second > b.second : a.first < b.first;
        });
    else
        std::nth_element(v.begin(), v.begin() + limit, v.end());
    v.resize(limit);
}

}  // namespace

PriceList price_columns(const ColumnSource& c, const std::vector<double>& y, double tol, std::size_t limit,
                        Keep keep, Pricing pricing) {
    const auto n = static_cast<std::int64_t>(c.size());
    const std::size_t slack = 2 * limit + 64;
    PriceList out;
    if (pricing == Pricing::serial) {
        for (std::int64_t j = 0; j < n; ++j) {
            double r = c.reduced_cost(static_cast<std::size_t>(j), y.data());
            if (r <= tol) continue;
            out.items.emplace_back(j, r);
            if (keep == Keep::first && out.items.size() > limit) break;
            if (out.items.size() > slack) {
                trim(out.items, limit, keep);
                out.overflow = true;
            }
        }
    } else {
#pragma omp parallel
        {
            std::vector<Item> local;
            bool over = false;
#pragma omp for schedule(dynamic, 4096) nowait
            for (std::int64_t j = 0; j < n; ++j) {
                if (keep == Keep::first && over) continue;
                double r = c.reduced_cost(static_cast<std::size_t>(j), y.data());
                if (r <= tol) continue;
                local.emplace_back(j, r);
                if (local.size() > slack) {
                    trim(local, limit, keep);
                    over = true;
                }
            }
#pragma omp critical
            {
                out.items.insert(out.items.end(), local.begin(), local.end());
                out.overflow = out.overflow || over;
            }
        }
    }
    if (out.items.size() > limit) {
        trim(out.items, limit, keep);
        out.overflow = true;
    }
    std::sort(out.items.begin(), out.items.end());
    return out;
}

namespace {

// phase one sees every structural column at zero cost
class ZeroCost : public ColumnSource {
public:
    explicit ZeroCost(const ColumnSource& b) : base_(b) {}
    std::size_t size() const override { return base_.size(); }
    void column(std::size_t j, std::vector<LPEntry>& out) const override { base_.column(j, out); }
    int cost(std::size_t) const override { return 0; }
    double reduced_cost(std::size_t j, const double* y) const override {
        return base_.reduced_cost(j, y) - base_.cost(j);
    }

private:
    const ColumnSource& base_;
};

constexpr double kTol = 1e-9;
constexpr int kDegenerateRun = 50;

class Simplex {
public:
    Simplex(const LPProblem& p, Pricing pricing) : p_(p), pricing_(pricing), zero_(*p.columns) {
        m_ = static_cast<int>(p.rhs.size());
        n_ = p.columns->size();
        if (p.sense.size() != p.rhs.size()) throw std::invalid_argument("lp: sense and rhs differ in length");
        sign_.assign(m_, 1);
        basis_.resize(m_);
        xb_.resize(m_);
        binv_.assign(static_cast<std::size_t>(m_) * m_, Rational(0));
        for (int r = 0; r < m_; ++r) {
            if (p.rhs[r] < 0) {
                if (p.sense[r] == RowSense::leq) throw std::invalid_argument("lp: negative bound on an inequality row");
                sign_[r] = -1;
            }
            basis_[r] = p.sense[r] == RowSense::leq ? slack(r) : artificial(r);
            xb_[r] = sign_[r] * p.rhs[r];
            at(r, r) = 1;
        }
        pool_ = p.hints;
    }

    LPResult run() {
        LPResult res;
        bool any_art = std::any_of(basis_.begin(), basis_.end(), [&](std::size_t v) { return is_artificial(v); });
        if (any_art) {
            phase1_ = true;
            if (!optimise()) throw std::logic_error("lp: phase one cannot be unbounded");
            Rational infeas = 0;
            for (int r = 0; r < m_; ++r)
                if (is_artificial(basis_[r])) infeas += xb_[r];
            if (infeas > 0) {
                res.status = LPStatus::infeasible;
                finish(res);
                return res;
            }
            drive_out_artificials();
            phase1_ = false;
            bland_ = false;
            degenerate_ = 0;
        }
        if (!optimise()) {
            res.status = LPStatus::unbounded;
            finish(res);
            return res;
        }
        res.status = LPStatus::optimal;
        finish(res);
        return res;
    }

private:
    const LPProblem& p_;
    Pricing pricing_;
    ZeroCost zero_;
    int m_ = 0;
    std::size_t n_ = 0;
    std::vector<int> sign_;
    std::vector<std::size_t> basis_;
    std::vector<Rational> xb_, binv_, y_;
    std::vector<std::size_t> pool_;
    std::vector<LPEntry> col_;
    bool phase1_ = false, bland_ = false;
    int degenerate_ = 0;
    std::size_t pivots_ = 0, passes_ = 0;

    Rational& at(int r, int c) { return binv_[static_cast<std::size_t>(r) * m_ + c]; }
    std::size_t slack(int r) const { return n_ + r; }
    std::size_t artificial(int r) const { return n_ + m_ + r; }
    bool is_slack(std::size_t v) const { return v >= n_ && v < n_ + m_; }
    bool is_artificial(std::size_t v) const { return v >= n_ + m_; }
    const ColumnSource& source() const { return phase1_ ? static_cast<const ColumnSource&>(zero_) : *p_.columns; }

    int cost_of(std::size_t v) const {
        if (phase1_) return is_artificial(v) ? -1 : 0;
        return v < n_ ? p_.columns->cost(v) : 0;
    }

    // column in sign-normalised rows
    void column_of(std::size_t v, std::vector<LPEntry>& out) {
        out.clear();
        if (v < n_) {
            p_.columns->column(v, out);
            for (auto& e : out) e.coeff *= sign_[e.row];
        } else {
            out.push_back({static_cast<int>(is_slack(v) ? v - n_ : v - n_ - m_), 1});
        }
    }

    void compute_duals() {
        y_.assign(m_, Rational(0));
        for (int r = 0; r < m_; ++r) {
            int c = cost_of(basis_[r]);
            if (c == 0) continue;
            for (int i = 0; i < m_; ++i)
                if (sgn(at(r, i)) != 0) y_[i] += c * at(r, i);
        }
    }

    Rational exact_rc(std::size_t v) {
        column_of(v, col_);
        Rational r = cost_of(v);
        for (auto& e : col_) r -= e.coeff * y_[e.row];
        return r;
    }

    std::vector<double> float_duals() const {
        std::vector<double> yd(m_);
        for (int i = 0; i < m_; ++i) yd[i] = y_[i].get_d() * sign_[i];
        return yd;
    }

    bool in_basis(std::size_t v) const { return std::find(basis_.begin(), basis_.end(), v) != basis_.end(); }

    // entering variable, or nullopt at optimality
    std::optional<std::size_t> choose() {
        compute_duals();
        if (bland_) return choose_bland();
        std::optional<std::size_t> best;
        Rational best_rc = 0;
        auto consider = [&](std::size_t v) {
            if (in_basis(v)) return false;
            Rational r = exact_rc(v);
            if (r > best_rc || (r == best_rc && best && r > 0 && v < *best)) {
                best_rc = r;
                best = v;
            }
            return r > 0;
        };
        std::vector<std::size_t> keep;
        for (std::size_t v : pool_)
            if (consider(v)) keep.push_back(v);
        pool_ = keep;
        for (int r = 0; r < m_; ++r)
            if (p_.sense[r] == RowSense::leq) consider(slack(r));
        if (best) return best;

        auto yd = float_duals();
        ++passes_;
        auto list = price_columns(source(), yd, kTol, 256, Keep::best, pricing_);
        for (auto& [j, _] : list.items)
            if (consider(j)) pool_.push_back(j);
        if (best) return best;

        // nothing clearly positive: confirm the near-zero ones exactly
        list = price_columns(source(), yd, -kTol, 1 << 16, Keep::first, pricing_);
        for (auto& [j, _] : list.items)
            if (consider(j)) return j;
        if (list.overflow) return stream_from(list.items.empty() ? 0 : list.items.back().first + 1, yd);
        return std::nullopt;
    }

    std::optional<std::size_t> stream_from(std::size_t start, const std::vector<double>& yd) {
        const auto& src = source();
        for (std::size_t j = start; j < n_; ++j) {
            if (src.reduced_cost(j, yd.data()) <= -kTol || in_basis(j)) continue;
            if (exact_rc(j) > 0) return j;
        }
        return std::nullopt;
    }

    std::optional<std::size_t> choose_bland() {
        auto yd = float_duals();
        ++passes_;
        auto list = price_columns(source(), yd, -kTol, 4096, Keep::first, pricing_);
        for (auto& [j, _] : list.items)
            if (!in_basis(j) && exact_rc(j) > 0) return j;
        if (list.overflow)
            if (auto j = stream_from(list.items.empty() ? 0 : list.items.back().first + 1, yd)) return j;
        for (int r = 0; r < m_; ++r)
            if (p_.sense[r] == RowSense::leq && !in_basis(slack(r)) && exact_rc(slack(r)) > 0) return slack(r);
        return std::nullopt;
    }

    std::vector<Rational> direction(std::size_t v) {
        column_of(v, col_);
        std::vector<Rational> d(m_, Rational(0));
        for (int r = 0; r < m_; ++r)
            for (auto& e : col_)
                if (sgn(at(r, e.row)) != 0) d[r] += at(r, e.row) * e.coeff;
        return d;
    }

    void pivot(int pr, std::size_t v, const std::vector<Rational>& d) {
        const Rational piv = d[pr];
        for (int c = 0; c < m_; ++c) at(pr, c) /= piv;
        xb_[pr] /= piv;
        for (int r = 0; r < m_; ++r) {
            if (r == pr || sgn(d[r]) == 0) continue;
            const Rational f = d[r];
            for (int c = 0; c < m_; ++c)
                if (sgn(at(pr, c)) != 0) at(r, c) -= f * at(pr, c);
            xb_[r] -= f * xb_[pr];
        }
        basis_[pr] = v;
        ++pivots_;
    }

    // false when unbounded
    bool optimise() {
        while (auto v = choose()) {
            auto d = direction(*v);
            int pr = -1;
            Rational best;
            for (int r = 0; r < m_; ++r) {
                if (sgn(d[r]) <= 0) continue;
                Rational ratio = xb_[r] / d[r];
                if (pr < 0 || ratio < best || (ratio == best && basis_[r] < basis_[pr])) {
                    pr = r;
                    best = ratio;
                }
            }
            if (pr < 0) return false;
            if (sgn(best) == 0) {
                if (++degenerate_ > kDegenerateRun) bland_ = true;
            } else {
                degenerate_ = 0;
            }
            pool_.erase(std::remove(pool_.begin(), pool_.end(), *v), pool_.end());
            pivot(pr, *v, d);
        }
        return true;
    }

    // basic artificials at zero are swapped for any column touching their row;
    // rows where none exists are redundant and keep the artificial at zero
    void drive_out_artificials() {
        for (int r = 0; r < m_; ++r) {
            if (!is_artificial(basis_[r])) continue;
            std::optional<std::size_t> found;
            for (std::size_t j = 0; j < n_ + m_ && !found; ++j) {
                if (j >= n_ && p_.sense[j - n_] != RowSense::leq) continue;
                if (in_basis(j)) continue;
                column_of(j, col_);
                Rational s = 0;
                for (auto& e : col_) s += at(r, e.row) * e.coeff;
                if (sgn(s) != 0) found = j;
            }
            if (found) pivot(r, *found, direction(*found));
        }
    }

    void finish(LPResult& res) {
        res.pivots = pivots_;
        res.full_passes = passes_;
        res.value = 0;
        for (int r = 0; r < m_; ++r) {
            if (basis_[r] >= n_ || sgn(xb_[r]) == 0) continue;
            res.solution.emplace_back(basis_[r], xb_[r]);
            res.value += p_.columns->cost(basis_[r]) * xb_[r];
        }
        std::sort(res.solution.begin(), res.solution.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        compute_duals();
        res.duals.resize(m_);
        for (int i = 0; i < m_; ++i) res.duals[i] = y_[i] * sign_[i];
    }
};

}  // namespace

LPResult solve_lp(const LPProblem& p, Pricing pricing) {
    if (!p.columns) throw std::invalid_argument("lp: no columns");
    Simplex s(p, pricing);
    return s.run();
}

}  // namespace caus
