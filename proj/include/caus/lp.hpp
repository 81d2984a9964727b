#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace caus {

using Rational = mpq_class;

struct LPEntry {
    int row;
    int coeff;
};

// Columns of a linear program, possibly far too many to store. Coefficients
// are small integers, the right-hand side is exact.
class ColumnSource {
public:
    virtual ~ColumnSource() = default;
    virtual std::size_t size() const = 0;
    virtual void column(std::size_t j, std::vector<LPEntry>& out) const = 0;
    virtual int cost(std::size_t j) const = 0;
    // c_j - y.A_j in floating point, used only to shortlist columns; a column
    // that can never be positive may report -infinity
    virtual double reduced_cost(std::size_t j, const double* y) const;
};

// explicit sparse columns
class ColumnList : public ColumnSource {
public:
    std::size_t add(std::vector<LPEntry> entries, int cost);
    std::size_t size() const override { return cols_.size(); }
    void column(std::size_t j, std::vector<LPEntry>& out) const override { out = cols_[j]; }
    int cost(std::size_t j) const override { return costs_[j]; }

private:
    std::vector<std::vector<LPEntry>> cols_;
    std::vector<int> costs_;
};

enum class RowSense { leq, eq };

// maximise c.x subject to A x (<= or =) rhs, x >= 0
struct LPProblem {
    std::vector<Rational> rhs;
    std::vector<RowSense> sense;
    const ColumnSource* columns = nullptr;
    std::vector<std::size_t> hints;  // priced before the first full pass
};

enum class LPStatus { optimal, infeasible, unbounded };

struct LPResult {
    LPStatus status = LPStatus::optimal;
    Rational value;
    std::vector<std::pair<std::size_t, Rational>> solution;  // nonzero columns, ascending
    std::vector<Rational> duals;
    std::size_t pivots = 0;
    std::size_t full_passes = 0;
};

enum class Pricing { parallel, serial };

// Revised simplex in exact rationals. Candidates are shortlisted in floating
// point and confirmed exactly; Bland's rule takes over after a run of
// degenerate pivots.
LPResult solve_lp(const LPProblem& p, Pricing pricing = Pricing::parallel);

struct PriceList {
    std::vector<std::pair<std::size_t, double>> items;  // ascending column index
    bool overflow = false;                               // more than the limit qualified
};

enum class Keep { best, first };

// One pricing pass: columns whose floating reduced cost exceeds tol, at most
// limit of them, keeping either the largest values or the lowest indices.
PriceList price_columns(const ColumnSource& c, const std::vector<double>& y, double tol, std::size_t limit,
                        Keep keep, Pricing pricing);

}  // namespace caus
