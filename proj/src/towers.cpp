#include "fklab/towers.hpp"

#include "fklab/environments.hpp"
#include "fklab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>

namespace fklab {

std::size_t Tower::index_of(const std::string& label) const
{
    for (std::size_t i = 0; i < floors.size(); ++i)
        if (floors[i].label == label)
            return i;
    throw DomainError("tower has no floor labelled " + label);
}

double Tower::total_mass() const
{
    double s = 0;
    for (std::size_t i = 0; i < floors.size(); ++i)
        s += empirical_nu[i] * static_cast<double>(floors[i].height);
    return s;
}

Tower level0_tower(const AlphaValue& alpha, double window_length)
{
    const std::int64_t g = alpha.short_gap();
    if (!(window_length >= 1e3 * static_cast<double>(g + 1)))
        throw DomainError("level0_tower: window must be at least 1000 long gaps");
    const auto pts = beatty_points(alpha, 0.0, window_length);

    Tower t;
    t.window_length = window_length;
    std::vector<std::int64_t> gaps;
    gaps.reserve(pts.size());
    for (std::size_t i = 1; i < pts.size(); ++i)
        gaps.push_back(pts[i] - pts[i - 1]);
    const bool has_short = std::find(gaps.begin(), gaps.end(), g) != gaps.end();
    const bool has_long = std::find(gaps.begin(), gaps.end(), g + 1) != gaps.end();
    if (has_short)
        t.floors.push_back({"a", g, 0});
    if (has_long)
        t.floors.push_back({"b", g + 1, 0});
    for (std::int64_t gap : gaps) {
        const int idx = (gap == g || !has_short) ? 0 : 1;
        t.symbols.push_back(idx);
        ++t.floors[idx].count;
    }
    t.periodic = t.floors.size() == 1;
    t.base_label = t.floors.front().label;
    for (const auto& f : t.floors)
        t.empirical_nu.push_back(static_cast<double>(f.count) / window_length);
    return t;
}

std::pair<Tower, HomologyMatrix> induce_tower(const Tower& t, const AlphaValue& /*alpha*/, double window_length)
{
    if (t.floors.empty() || t.symbols.empty())
        throw DomainError("induce_tower: empty tower");
    std::size_t base = 0;
    for (std::size_t i = 1; i < t.floors.size(); ++i)
        if (t.floors[i].label < t.floors[base].label)
            base = i;
    const auto base_count = std::count(t.symbols.begin(), t.symbols.end(), static_cast<int>(base));
    if (base_count < 100)
        throw InsufficientData("induce_tower: base floor occurs fewer than 100 times");

    // complete return words to the base, as index sequences
    std::map<std::vector<int>, std::int64_t> words;
    std::vector<std::vector<int>> order;
    std::vector<int> current;
    bool open = false;
    for (int s : t.symbols) {
        if (s == static_cast<int>(base)) {
            if (open) {
                ++words[current];
                order.push_back(current);
            }
            current.clear();
            open = true;
        }
        if (open)
            current.push_back(s);
    }

    const std::size_t lower = t.floors.size();
    if (words.size() == 1) {
        Tower same = t;
        same.periodic = true;
        HomologyMatrix id;
        id.entries.assign(lower, std::vector<std::int64_t>(lower, 0));
        for (std::size_t i = 0; i < lower; ++i)
            id.entries[i][i] = 1;
        return {same, id};
    }
    for (const auto& [w, c] : words)
        if (c < 2)
            throw InsufficientData("induce_tower: a return word was observed fewer than twice");

    struct Entry {
        std::string label;
        std::vector<int> word;
        std::int64_t count;
    };
    std::vector<Entry> entries;
    for (const auto& [w, c] : words) {
        std::string label;
        for (int s : w)
            label += t.floors[s].label;
        entries.push_back({label, w, c});
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) { return x.label < y.label; });

    Tower up;
    up.level = t.level + 1;
    up.window_length = window_length;
    HomologyMatrix m;
    m.entries.assign(lower, std::vector<std::int64_t>(entries.size(), 0));
    std::map<std::vector<int>, int> slot;
    for (std::size_t j = 0; j < entries.size(); ++j) {
        std::int64_t h = 0;
        for (int s : entries[j].word) {
            h += t.floors[s].height;
            ++m.entries[s][j];
        }
        up.floors.push_back({entries[j].label, h, entries[j].count});
        up.empirical_nu.push_back(static_cast<double>(entries[j].count) / window_length);
        slot[entries[j].word] = static_cast<int>(j);
    }
    for (const auto& w : order)
        up.symbols.push_back(slot[w]);
    up.base_label = up.floors.front().label;
    return {up, m};
}

double tower_measure_residual(const Tower& lower, const Tower& upper, const HomologyMatrix& m)
{
    if (m.rows() != lower.floors.size() || m.cols() != upper.floors.size()
        || lower.empirical_nu.size() != lower.floors.size() || upper.empirical_nu.size() != upper.floors.size())
        throw DomainError("tower_measure_residual: dimension mismatch");
    double worst = 0;
    for (std::size_t a = 0; a < m.rows(); ++a) {
        double s = 0;
        for (std::size_t b = 0; b < m.cols(); ++b)
            s += static_cast<double>(m.entries[a][b]) * upper.empirical_nu[b];
        worst = std::max(worst, std::fabs(lower.empirical_nu[a] - s));
    }
    return worst;
}

std::int64_t height_identity_defect(const Tower& lower, const Tower& upper, const HomologyMatrix& m)
{
    if (m.rows() != lower.floors.size() || m.cols() != upper.floors.size())
        throw DomainError("height_identity_defect: dimension mismatch");
    std::int64_t worst = 0;
    for (std::size_t b = 0; b < m.cols(); ++b) {
        std::int64_t s = 0;
        for (std::size_t a = 0; a < m.rows(); ++a)
            s += m.entries[a][b] * lower.floors[a].height;
        worst = std::max<std::int64_t>(worst, std::llabs(s - upper.floors[b].height));
    }
    return worst;
}

} // namespace fklab
