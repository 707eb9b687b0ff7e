#include "fklab/simplex.hpp"

#include "fklab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <limits>
#include <string>

namespace fklab {

namespace {

constexpr double kEps = 1e-11;
constexpr int kStallLimit = 50;

class Tableau {
public:
    Tableau(const std::vector<std::vector<double>>& A, const std::vector<double>& b)
        : m_(static_cast<int>(A.size())), n_(A.empty() ? 0 : static_cast<int>(A[0].size())),
          width_(n_ + m_ + 1), t_(static_cast<std::size_t>(m_) * width_, 0.0), basis_(m_), sign_(m_, 1.0)
    {
        for (int i = 0; i < m_; ++i) {
            if (static_cast<int>(A[i].size()) != n_)
                throw std::invalid_argument("simplex: ragged constraint matrix");
            sign_[i] = b[i] < 0 ? -1.0 : 1.0;
            for (int j = 0; j < n_; ++j)
                at(i, j) = sign_[i] * A[i][j];
            at(i, n_ + i) = 1.0;
            at(i, width_ - 1) = sign_[i] * b[i];
            basis_[i] = n_ + i;
        }
    }

    double& at(int i, int j) { return t_[static_cast<std::size_t>(i) * width_ + j]; }
    double at(int i, int j) const { return t_[static_cast<std::size_t>(i) * width_ + j]; }
    double rhs(int i) const { return at(i, width_ - 1); }

    void pivot(int r, int col)
    {
        const double p = at(r, col);
        double* row = &at(r, 0);
        for (int j = 0; j < width_; ++j)
            row[j] /= p;
        for (int i = 0; i < m_; ++i) {
            if (i == r)
                continue;
            const double f = at(i, col);
            if (f == 0.0)
                continue;
            double* other = &at(i, 0);
            for (int j = 0; j < width_; ++j)
                other[j] -= f * row[j];
            other[col] = 0.0;
        }
        basis_[r] = col;
    }

    // Reduced costs d = cost - cost_B T over all columns; returns the objective value.
    double reduced_costs(const std::vector<double>& cost, std::vector<double>& d) const
    {
        d.assign(cost.begin(), cost.end());
        double z = 0;
        for (int i = 0; i < m_; ++i) {
            const double cb = cost[basis_[i]];
            if (cb == 0.0)
                continue;
            for (int j = 0; j < n_ + m_; ++j)
                d[j] -= cb * at(i, j);
            z += cb * rhs(i);
        }
        return z;
    }

    // Runs the simplex on `cost` over columns [0, enter_limit).
    void optimize(const std::vector<double>& cost, int enter_limit, int max_pivots, SimplexResult& res)
    {
        std::vector<double> d;
        reduced_costs(cost, d);
        int stall = 0;
        bool bland = false;
        while (true) {
            int col = -1;
            if (bland) {
                for (int j = 0; j < enter_limit; ++j)
                    if (d[j] < -kEps) {
                        col = j;
                        break;
                    }
            } else {
                double most = -kEps;
                for (int j = 0; j < enter_limit; ++j)
                    if (d[j] < most) {
                        most = d[j];
                        col = j;
                    }
            }
            if (col < 0)
                return;
            int row = -1;
            double best = std::numeric_limits<double>::infinity();
            for (int i = 0; i < m_; ++i) {
                const double a = at(i, col);
                if (a <= kEps)
                    continue;
                const double ratio = std::max(rhs(i), 0.0) / a;
                // ties go to the smallest basic index
                if (row < 0 || ratio < best - 1e-12 || (ratio <= best + 1e-12 && basis_[i] < basis_[row])) {
                    best = std::min(best, ratio);
                    row = i;
                }
            }
            if (row < 0)
                throw NumericalFailure("simplex: problem is unbounded");
            if (++res.pivots > max_pivots)
                throw NumericalFailure("simplex: pivot limit of " + std::to_string(max_pivots) + " reached");
            if (bland)
                ++res.bland_pivots;
            const bool degenerate = best <= 1e-12;
            stall = degenerate ? stall + 1 : 0;
            if (!degenerate)
                bland = false;
            else if (stall >= kStallLimit)
                bland = true;

            const double dc = d[col];
            pivot(row, col);
            for (int j = 0; j < n_ + m_; ++j)
                d[j] -= dc * at(row, j);
            d[col] = 0.0;
        }
    }

    int rows() const { return m_; }
    int cols() const { return n_; }
    const std::vector<int>& basis() const { return basis_; }
    double sign(int i) const { return sign_[i]; }

private:
    int m_, n_, width_;
    std::vector<double> t_;
    std::vector<int> basis_;
    std::vector<double> sign_;
};

bool install_crash(Tableau& tab, const std::vector<int>& crash)
{
    const int m = tab.rows();
    if (static_cast<int>(crash.size()) != m)
        return false;
    std::vector<bool> used(m, false);
    for (int col : crash) {
        if (col < 0 || col >= tab.cols())
            return false;
        int row = -1;
        double big = 1e-9;
        for (int i = 0; i < m; ++i)
            if (!used[i] && std::fabs(tab.at(i, col)) > big) {
                big = std::fabs(tab.at(i, col));
                row = i;
            }
        if (row < 0)
            return false;
        used[row] = true;
        tab.pivot(row, col);
    }
    for (int i = 0; i < m; ++i)
        if (tab.rhs(i) < -1e-12)
            return false;
    return true;
}

} // namespace

SimplexResult simplex_solve(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                            const std::vector<double>& c, const std::vector<int>& crash, int max_pivots)
{
    const int m = static_cast<int>(A.size());
    if (m == 0 || static_cast<int>(b.size()) != m)
        throw std::invalid_argument("simplex: row count mismatch");
    Tableau tab(A, b);
    const int n = tab.cols();
    if (static_cast<int>(c.size()) != n)
        throw std::invalid_argument("simplex: cost length mismatch");

    SimplexResult res;
    bool feasible_start = !crash.empty() && install_crash(tab, crash);
    if (!feasible_start) {
        tab = Tableau(A, b);
        std::vector<double> phase1(n + m, 0.0);
        for (int i = 0; i < m; ++i)
            phase1[n + i] = 1.0;
        tab.optimize(phase1, n, max_pivots, res);
        double infeas = 0;
        for (int i = 0; i < m; ++i)
            if (tab.basis()[i] >= n)
                infeas += tab.rhs(i);
        if (infeas > 1e-9)
            throw NumericalFailure("simplex: problem is infeasible");
        // drive zero-level artificials out where an original column allows it
        for (int i = 0; i < m; ++i) {
            if (tab.basis()[i] < n)
                continue;
            for (int j = 0; j < n; ++j)
                if (std::fabs(tab.at(i, j)) > 1e-9) {
                    tab.pivot(i, j);
                    break;
                }
        }
    }

    std::vector<double> cost(n + m, 0.0);
    for (int j = 0; j < n; ++j)
        cost[j] = c[j];
    tab.optimize(cost, n, max_pivots, res);

    res.x.assign(n, 0.0);
    res.basis = tab.basis();
    for (int i = 0; i < m; ++i)
        if (tab.basis()[i] < n)
            res.x[tab.basis()[i]] = std::max(tab.rhs(i), 0.0);
    res.value = 0;
    for (int j = 0; j < n; ++j)
        res.value += c[j] * res.x[j];
    // the identity block holds B^-1, so its reduced costs are -y (up to row flips)
    std::vector<double> d;
    tab.reduced_costs(cost, d);
    res.y.assign(m, 0.0);
    for (int i = 0; i < m; ++i)
        res.y[i] = -d[n + i] * tab.sign(i);
    return res;
}

} // namespace fklab
