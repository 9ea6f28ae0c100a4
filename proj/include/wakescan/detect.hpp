#ifndef WAKESCAN_DETECT_HPP
#define WAKESCAN_DETECT_HPP

#include "wakescan/grid.hpp"
#include "wakescan/solver.hpp"

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace wakescan {

enum class WakeKind { Turbulent = 0, NarrowV1, NarrowV2, Kelvin1, Kelvin2 };
constexpr int kWakeKindCount = 5;
const char* wake_kind_name(WakeKind kind);
WakeKind wake_kind_from_name(const std::string& name);

enum class CandidateStatus { Confirmed, Discarded, NotSearched };
const char* candidate_status_name(CandidateStatus status);
CandidateStatus candidate_status_from_name(const std::string& name);

/// Half-line in image pixel coordinates (x, y), from the split point at the
/// ship to the image border.
struct HalfLine {
    Eigen::Vector2d start{0, 0};
    Eigen::Vector2d end{0, 0};

    Eigen::Vector2d direction() const {
        Eigen::Vector2d d = end - start;
        const double n = d.norm();
        return n > 0 ? Eigen::Vector2d(d / n) : Eigen::Vector2d(0, 0);
    }
};

struct WakeCandidate {
    WakeKind kind = WakeKind::Turbulent;
    double r = 0.0;
    double theta_deg = 0.0;
    double peak_value = 0.0;
    bool located = false;  // (r, theta) found in the restricted region
    HalfLine half_line;
    bool has_half_line = false;
    double f_index = 0.0;
    bool has_f_index = false;
    CandidateStatus status = CandidateStatus::NotSearched;
};

struct DetectConfig {
    double max_azimuth_shift = 0.0;  // A in pixels; <= 0 selects M/4
    double tn_window_deg = 4.0;      // total width of the T-N pairing window
    double kelvin_window_deg = 10.0; // searched band is [10, 10 + window] degrees out
    double f_margin = 0.1;           // narrow-V / Kelvin confirmation margin
    double mask_radius = 5.0;
    double halfline_cone_deg = 45.0;

    double azimuth_shift_for(int image_size) const {
        return max_azimuth_shift > 0.0 ? max_azimuth_shift : image_size / 4.0;
    }
    void validate(int image_size) const;
};

struct WakeReport {
    std::array<WakeCandidate, kWakeKindCount> candidates;  // indexed by WakeKind
    std::string source_id;
    DetectConfig config;
    std::vector<std::string> diagnostics;

    const WakeCandidate& of(WakeKind kind) const {
        return candidates[static_cast<size_t>(kind)];
    }
    WakeCandidate& of(WakeKind kind) { return candidates[static_cast<size_t>(kind)]; }
};

/// True when offset r lies inside the sine search region |r| <= A sin(theta).
bool sine_region_admits(double r, double theta_deg, double azimuth_shift);

/// Signed angular difference a - b folded into [-90, 90) degrees.
double signed_angle_diff_deg(double a_deg, double b_deg);

/// Angular distance modulo 180 degrees.
double angle_distance_deg(double a_deg, double b_deg);

/// Attach a mask that excludes the disk of the given radius around the ship.
/// Pixel values are untouched.
Image mask_ship(const Image& image, double center_x, double center_y, double radius);

/// Boolean grid of sinogram bins inside |r| <= A sin(theta).
ArrayXXb restrict_search(const Sinogram& sinogram, double azimuth_shift);

/// Scan all admissible bin pairs within the angular window and return the
/// (turbulent trough, narrow-V peak) pair maximizing the amplitude gap.
/// Ties resolve to the lexicographically smallest (theta, r) pair.
std::pair<WakeCandidate, WakeCandidate> detect_tn_pair(const Sinogram& estimate,
                                                       const ArrayXXb& region,
                                                       double window_deg);

/// Maximum bin in the same-width window on the opposite angular side of the
/// turbulent wake.
WakeCandidate detect_second_narrow(const Sinogram& estimate, const ArrayXXb& region,
                                   const WakeCandidate& turbulent,
                                   const WakeCandidate& narrow1, double window_deg);

/// Maximum bin per side in the bands 10..(10 + window) degrees away from the
/// turbulent wake. First entry is the positive angular side.
std::pair<WakeCandidate, WakeCandidate> detect_kelvin(const Sinogram& estimate,
                                                      const ArrayXXb& region,
                                                      const WakeCandidate& turbulent,
                                                      double window_deg);

/// Resolve the 180-degree ambiguity: split the candidate's line at the ship
/// and keep the darker half (turbulent) or the half within the cone around
/// the turbulent direction (other kinds). Candidates whose line misses the
/// image are discarded.
WakeCandidate resolve_halfline(const Image& image, const WakeCandidate& candidate,
                               const Eigen::Vector2d& ship_center, double cone_deg,
                               const HalfLine* turbulent_halfline);

/// F_I = (mean intensity along the half-line) / (unmasked image mean) - 1,
/// sampled bilinearly at unit arclength steps. Throws if fewer than 5
/// unmasked samples support the line.
double f_index(const Image& image, const HalfLine& half_line);

/// Apply the sign/margin confirmation rule per kind and assemble the report.
WakeReport confirm_wakes(const std::array<WakeCandidate, kWakeKindCount>& candidates,
                         const DetectConfig& config);

/// Re-run only the confirmation rule of an existing report with a different
/// margin; every other field is preserved.
WakeReport reconfirm(const WakeReport& report, double f_margin);

struct PipelineResult {
    WakeReport report;
    SolverResult solver;
};

/// Full chain: mask -> standardize -> solve -> restricted search -> T-N pair
/// -> second narrow-V -> Kelvin windows -> half-line resolution -> F-index ->
/// confirmation.
PipelineResult detect_pipeline(const Image& image, const Eigen::Vector2d& ship_center,
                               const SolverConfig& solver_config,
                               const DetectConfig& detect_config,
                               const std::string& source_id = "");

}  // namespace wakescan

#endif
