#pragma once

#include <algorithm>
#include <vector>

#include "dcraudit/distance.hpp"
#include "dcraudit/parallel.hpp"

namespace dcraudit {

struct VulnerabilityScore {
    std::size_t record_index = 0;
    double score = 0.0;  // mean distance to the k nearest other records
    std::size_t k = 0;
};

// Distance-based outlierness: mean distance from each record to its k
// nearest neighbors within the same dataset (self excluded). Higher means
// more isolated, presumed more attack-vulnerable.
inline std::vector<VulnerabilityScore> achilles_scores(const Dataset& target_ds, std::size_t k,
                                                       const DistanceConfig& cfg) {
    if (k < 1) throw UsageError("achilles_scores: k must be >= 1");
    if (target_ds.size() <= k)
        throw InsufficientRowsError("achilles_scores: need more than k=" + std::to_string(k) +
                                    " records, got " + std::to_string(target_ds.size()));
    const auto scales = detail::numeric_scales(target_ds.schema, cfg);
    const Schema& schema = target_ds.schema;
    std::vector<VulnerabilityScore> out(target_ds.size());
    parallel_for(target_ds.size(), [&](std::size_t i) {
        std::vector<double> dists;
        dists.reserve(target_ds.size() - 1);
        for (std::size_t j = 0; j < target_ds.size(); ++j) {
            if (j == i) continue;
            dists.push_back(
                detail::record_distance_scaled(target_ds.rows[i], target_ds.rows[j], schema, scales));
        }
        std::nth_element(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(k - 1), dists.end());
        std::sort(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(k));
        double sum = 0.0;
        for (std::size_t j = 0; j < k; ++j) sum += dists[j];
        out[i] = VulnerabilityScore{i, sum / static_cast<double>(k), k};
    });
    return out;
}

// Indices of the n largest scores, sorted by descending score; ties go to
// the lower record index.
inline std::vector<std::size_t> select_targets(std::vector<VulnerabilityScore> scores, std::size_t n) {
    if (n > scores.size())
        throw CountExceedsDatasetError("select_targets: n=" + std::to_string(n) + " exceeds " +
                                       std::to_string(scores.size()) + " scores");
    std::stable_sort(scores.begin(), scores.end(), [](const auto& a, const auto& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.record_index < b.record_index;
    });
    std::vector<std::size_t> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(scores[i].record_index);
    return out;
}

}  // namespace dcraudit
