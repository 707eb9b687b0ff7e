#pragma once

#include "fklab/alpha.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace fklab {

struct TowerFloor {
    std::string label;     ///< word over the gap letters 'a' (short) and 'b' (long)
    std::int64_t height = 0;
    std::int64_t count = 0; ///< occurrences in the observed window
};

/// Kakutani-Rohlin tower of the Beatty suspension, read off the symbolic gap
/// sequence over a finite window starting at the origin.
struct Tower {
    int level = 0;
    std::vector<TowerFloor> floors;   ///< sorted by label
    std::string base_label;
    std::vector<double> empirical_nu; ///< count / window length, one per floor
    double window_length = 0.0;
    bool periodic = false;            ///< only one floor could be formed
    std::vector<int> symbols;         ///< the window as a sequence of floor indices

    std::size_t index_of(const std::string& label) const;
    /// sum over floors of nu * height; close to 1 for long windows.
    double total_mass() const;
};

/// M[alpha][beta]: how many times lower floor alpha occurs in upper floor beta.
struct HomologyMatrix {
    std::vector<std::vector<std::int64_t>> entries;

    std::size_t rows() const { return entries.size(); }
    std::size_t cols() const { return entries.empty() ? 0 : entries.front().size(); }
};

Tower level0_tower(const AlphaValue& alpha, double window_length);

/// Induces on the lexicographically smallest floor. A tower with a single
/// return word is returned unchanged (flagged periodic) with the identity matrix.
std::pair<Tower, HomologyMatrix> induce_tower(const Tower& t, const AlphaValue& alpha, double window_length);

/// max over lower floors of |nu_lower - M nu_upper|.
double tower_measure_residual(const Tower& lower, const Tower& upper, const HomologyMatrix& m);

/// Max over upper floors of |sum_alpha M H_lower - H_upper|; zero by construction.
std::int64_t height_identity_defect(const Tower& lower, const Tower& upper, const HomologyMatrix& m);

} // namespace fklab
