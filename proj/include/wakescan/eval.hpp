#ifndef WAKESCAN_EVAL_HPP
#define WAKESCAN_EVAL_HPP

#include "wakescan/detect.hpp"
#include "wakescan/synth.hpp"

#include <vector>

namespace wakescan {

/// Fractional counts are allowed so published percentage tables can be
/// replayed through the same arithmetic.
struct DetectionCounts {
    double tp = 0.0, tn = 0.0, fp = 0.0, fn = 0.0;

    double total() const { return tp + tn + fp + fn; }
    DetectionCounts& operator+=(const DetectionCounts& o) {
        tp += o.tp;
        tn += o.tn;
        fp += o.fp;
        fn += o.fn;
        return *this;
    }
};

struct Metrics {
    double sensitivity = 0.0;
    double specificity = 0.0;
    double accuracy_pct = 0.0;
    double f1 = 0.0;
    double lr_plus = 0.0;  // +inf sentinel when specificity == 1
    double youden_j = 0.0;
    // Degenerate-denominator flags; the corresponding value is reported as 1.
    bool sensitivity_degenerate = false;
    bool specificity_degenerate = false;
    bool f1_degenerate = false;
};

/// Distance between two lines in (r, theta) with the 180-degree wrap: when
/// the angular comparison crosses the wrap, r flips sign.
struct LineDistance {
    double d_theta = 0.0;
    double d_r = 0.0;
};
LineDistance line_distance(double r_a, double theta_a_deg, double r_b, double theta_b_deg);

/// Per-kind scoring: visible+confirmed in place -> TP, mislocated or falsely
/// confirmed -> FP, missed visible -> FN, correctly dropped invisible -> TN.
DetectionCounts score_report(const WakeReport& report, const GroundTruth& truth,
                             double theta_tol_deg = 3.0, double r_tol = 5.0);

Metrics compute_metrics(const DetectionCounts& counts);

struct RocPoint {
    double margin = 0.0;
    double fpr = 0.0;
    double tpr = 0.0;
};

/// Margin sweep over already-computed reports: only the confirmation rule
/// depends on the margin, so each report is re-confirmed and re-scored.
/// Points come back sorted by fpr.
std::vector<RocPoint> roc_from_reports(
    const std::vector<std::pair<WakeReport, GroundTruth>>& scored,
    const std::vector<double>& margins, double theta_tol_deg = 3.0, double r_tol = 5.0);

/// Default margin grid: -inf, -0.5..1.0 in 0.1 steps, +inf.
std::vector<double> default_margin_grid();

}  // namespace wakescan

#endif
