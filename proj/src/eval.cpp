#include "wakescan/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace wakescan {

LineDistance line_distance(double r_a, double theta_a_deg, double r_b, double theta_b_deg) {
    double dt = std::fmod(theta_a_deg - theta_b_deg, 180.0);
    if (dt < 0.0) dt += 180.0;  // [0, 180)
    LineDistance out;
    if (dt <= 90.0) {
        out.d_theta = dt;
        out.d_r = std::abs(r_a - r_b);
    } else {
        out.d_theta = 180.0 - dt;
        out.d_r = std::abs(r_a + r_b);  // wrapped line has negated offset
    }
    return out;
}

DetectionCounts score_report(const WakeReport& report, const GroundTruth& truth,
                             double theta_tol_deg, double r_tol) {
    if (!(theta_tol_deg > 0.0 && r_tol > 0.0))
        throw std::invalid_argument("score_report: tolerances must be positive");

    DetectionCounts counts;
    for (int k = 0; k < kWakeKindCount; ++k) {
        const WakeCandidate& cand = report.candidates[static_cast<size_t>(k)];
        if (cand.kind != static_cast<WakeKind>(k))
            throw std::invalid_argument("score_report: report kinds out of order");
        const TruthEntry& entry = truth.wakes[static_cast<size_t>(k)];

        const bool confirmed = cand.status == CandidateStatus::Confirmed;
        if (entry.visible) {
            if (!confirmed) {
                counts.fn += 1.0;
            } else {
                const LineDistance d =
                    line_distance(cand.r, cand.theta_deg, entry.r, entry.theta_deg);
                const bool in_place = d.d_theta <= theta_tol_deg && d.d_r <= r_tol;
                if (in_place)
                    counts.tp += 1.0;
                else
                    counts.fp += 1.0;  // mislocated confirmation
            }
        } else {
            if (confirmed)
                counts.fp += 1.0;
            else
                counts.tn += 1.0;
        }
    }
    return counts;
}

Metrics compute_metrics(const DetectionCounts& counts) {
    const double n = counts.total();
    if (!(n > 0.0)) throw std::invalid_argument("compute_metrics: empty counts");

    Metrics m;
    if (counts.tp + counts.fn > 0.0) {
        m.sensitivity = counts.tp / (counts.tp + counts.fn);
    } else {
        m.sensitivity = 1.0;
        m.sensitivity_degenerate = true;
    }
    if (counts.tn + counts.fp > 0.0) {
        m.specificity = counts.tn / (counts.tn + counts.fp);
    } else {
        m.specificity = 1.0;
        m.specificity_degenerate = true;
    }
    m.accuracy_pct = 100.0 * (counts.tp + counts.tn) / n;
    const double f1_denom = 2.0 * counts.tp + counts.fp + counts.fn;
    if (f1_denom > 0.0) {
        m.f1 = 2.0 * counts.tp / f1_denom;
    } else {
        m.f1 = 1.0;
        m.f1_degenerate = true;
    }
    m.lr_plus = m.specificity == 1.0 ? std::numeric_limits<double>::infinity()
                                     : m.sensitivity / (1.0 - m.specificity);
    m.youden_j = m.sensitivity + m.specificity - 1.0;
    return m;
}

std::vector<RocPoint> roc_from_reports(
    const std::vector<std::pair<WakeReport, GroundTruth>>& scored,
    const std::vector<double>& margins, double theta_tol_deg, double r_tol) {
    if (scored.empty()) throw std::invalid_argument("roc_from_reports: no reports");
    if (margins.empty()) throw std::invalid_argument("roc_from_reports: empty margin grid");

    std::vector<RocPoint> points;
    points.reserve(margins.size());
    for (double margin : margins) {
        DetectionCounts agg;
        for (const auto& [report, truth] : scored)
            agg += score_report(reconfirm(report, margin), truth, theta_tol_deg, r_tol);
        RocPoint pt;
        pt.margin = margin;
        pt.tpr = (agg.tp + agg.fn) > 0.0 ? agg.tp / (agg.tp + agg.fn) : 1.0;
        pt.fpr = (agg.fp + agg.tn) > 0.0 ? agg.fp / (agg.fp + agg.tn) : 0.0;
        points.push_back(pt);
    }
    std::stable_sort(points.begin(), points.end(),
                     [](const RocPoint& a, const RocPoint& b) { return a.fpr < b.fpr; });
    return points;
}

std::vector<double> default_margin_grid() {
    std::vector<double> grid;
    grid.push_back(-std::numeric_limits<double>::infinity());
    for (int i = 0; i <= 15; ++i) grid.push_back(-0.5 + 0.1 * i);
    grid.push_back(std::numeric_limits<double>::infinity());
    return grid;
}

}  // namespace wakescan
