#pragma once

#include <numeric>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "dcraudit/distance.hpp"

namespace dcraudit {

struct PrivacyReport {
    int tau_dcr = 0;
    int tau_nndr = 0;
    int tau_ims = 0;
    int tau_combined = 0;
    double mu_dcr = 0.0;
    std::size_t ims_synthetic = 0;
    std::size_t ims_holdout = 0;
    double p_used = 0.05;
    double dcr_percentile_synthetic = 0.0;
    double dcr_percentile_holdout = 0.0;
    double nndr_percentile_synthetic = 0.0;
    double nndr_percentile_holdout = 0.0;
};

inline nlohmann::json to_json(const PrivacyReport& r) {
    return nlohmann::json{
        {"tau_dcr", r.tau_dcr},
        {"tau_nndr", r.tau_nndr},
        {"tau_ims", r.tau_ims},
        {"tau_combined", r.tau_combined},
        {"mu_dcr", r.mu_dcr},
        {"ims_synthetic", r.ims_synthetic},
        {"ims_holdout", r.ims_holdout},
        {"p_used", r.p_used},
        {"dcr_percentile_synthetic", r.dcr_percentile_synthetic},
        {"dcr_percentile_holdout", r.dcr_percentile_holdout},
        {"nndr_percentile_synthetic", r.nndr_percentile_synthetic},
        {"nndr_percentile_holdout", r.nndr_percentile_holdout},
    };
}

// DCR + NNDR vectors and the IMS count of one dataset against a reference,
// computed in a single nearest-neighbor scan. Reused by the harness so the
// holdout-side bundle is computed once per experiment.
struct DistanceBundle {
    std::vector<double> dcr;
    std::vector<double> nndr;
    std::size_t ims = 0;
};

inline DistanceBundle distance_bundle(const Dataset& d1, const Dataset& d2,
                                      const DistanceConfig& cfg) {
    if (d2.size() < 2) throw EmptyReferenceError("distance_bundle: reference needs >= 2 records");
    auto nt = nearest_two(d1, d2, cfg);
    DistanceBundle b;
    b.dcr = std::move(nt.nn1);
    b.nndr.resize(b.dcr.size());
    for (std::size_t i = 0; i < b.dcr.size(); ++i) b.nndr[i] = nndr_ratio(b.dcr[i], nt.nn2[i]);
    b.ims = ims_count(d1, d2);
    return b;
}

inline double mean(const std::vector<double>& v) {
    if (v.empty()) throw EmptyVectorError("mean: empty vector");
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline PrivacyReport privacy_report_from_bundles(const DistanceBundle& synthetic,
                                                 const DistanceBundle& holdout, double p) {
    PrivacyReport r;
    r.p_used = p;
    r.dcr_percentile_synthetic = percentile(synthetic.dcr, p);
    r.dcr_percentile_holdout = percentile(holdout.dcr, p);
    r.nndr_percentile_synthetic = percentile(synthetic.nndr, p);
    r.nndr_percentile_holdout = percentile(holdout.nndr, p);
    r.ims_synthetic = synthetic.ims;
    r.ims_holdout = holdout.ims;
    r.tau_dcr = r.dcr_percentile_synthetic >= r.dcr_percentile_holdout ? 1 : 0;
    r.tau_nndr = r.nndr_percentile_synthetic >= r.nndr_percentile_holdout ? 1 : 0;
    r.tau_ims = r.ims_synthetic <= r.ims_holdout ? 1 : 0;
    r.tau_combined = (r.tau_dcr && r.tau_nndr && r.tau_ims) ? 1 : 0;
    r.mu_dcr = mean(synthetic.dcr);
    return r;
}

// Binary privacy tests tau_DCR / tau_NNDR / tau_IMS plus the continuous
// measure mu_DCR. The synthetic dataset passes when it sits at least as far
// from the target as the holdout does, at percentile cfg.percentile_p.
inline PrivacyReport privacy_tests(const Dataset& synthetic, const Dataset& target,
                                   const Dataset& holdout, const DistanceConfig& cfg) {
    cfg.validate();
    require_same_schema(synthetic, target);
    require_same_schema(holdout, target);
    if (target.size() < 2) throw EmptyReferenceError("privacy_tests: target needs >= 2 records");
    auto syn = distance_bundle(synthetic, target, cfg);
    auto hold = distance_bundle(holdout, target, cfg);
    return privacy_report_from_bundles(syn, hold, cfg.percentile_p);
}

// tau_DCR margin (synthetic percentile minus holdout percentile) across a
// percentile grid; the test passes at p iff the margin is >= 0.
inline std::vector<std::pair<double, double>> dcr_margin_sweep(const Dataset& synthetic,
                                                               const Dataset& target,
                                                               const Dataset& holdout,
                                                               const DistanceConfig& cfg,
                                                               const std::vector<double>& p_grid) {
    std::vector<std::pair<double, double>> out;
    if (p_grid.empty()) return out;
    auto syn = dcr_vector(synthetic, target, cfg).values;
    auto hold = dcr_vector(holdout, target, cfg).values;
    out.reserve(p_grid.size());
    for (double p : p_grid) out.emplace_back(p, percentile(syn, p) - percentile(hold, p));
    return out;
}

inline std::vector<double> margins_from_vectors(const std::vector<double>& syn_dcr,
                                                const std::vector<double>& hold_dcr,
                                                const std::vector<double>& p_grid) {
    std::vector<double> out;
    out.reserve(p_grid.size());
    for (double p : p_grid) out.push_back(percentile(syn_dcr, p) - percentile(hold_dcr, p));
    return out;
}

inline std::vector<double> default_p_grid() {
    std::vector<double> g;
    for (int i = 0; i <= 10; ++i) g.push_back(static_cast<double>(i) / 100.0);
    return g;
}

}  // namespace dcraudit
