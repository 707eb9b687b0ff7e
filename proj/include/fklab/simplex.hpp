#pragma once

#include <vector>

namespace fklab {

struct SimplexResult {
    std::vector<double> x;     ///< primal solution
    std::vector<double> y;     ///< row duals, c_B B^-1
    double value = 0.0;
    std::vector<int> basis;
    int pivots = 0;
    int bland_pivots = 0;      ///< pivots taken under Bland's rule after a degenerate stall
};

/// Dense tableau simplex for min c.x subject to A x = b, x >= 0.
///
/// Pricing is Dantzig's rule; after 50 consecutive degenerate pivots it switches
/// to Bland's rule until the objective moves again, which rules out cycling.
/// `crash` optionally names a feasible starting basis (one column per row);
/// otherwise a phase-one problem with artificial columns is solved first.
SimplexResult simplex_solve(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                            const std::vector<double>& c, const std::vector<int>& crash = {},
                            int max_pivots = 200000);

} // namespace fklab
