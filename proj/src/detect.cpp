#include "wakescan/detect.hpp"

#include "wakescan/transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace wakescan {

namespace {

constexpr double kAngleSlop = 1e-9;

struct Bin {
    int row;
    int col;
    double r;
    double theta_deg;
    double value;
};

// Admissible rows of one angle column, in ascending r order.
template <typename Fn>
void for_each_admissible(const Sinogram& sino, const ArrayXXb& region, int col, Fn&& fn) {
    for (int row = 0; row < sino.offset_count(); ++row) {
        if (!region(row, col)) continue;
        fn(Bin{row, col, sino.r_of_row(row), sino.grid.angle_deg(col), sino.values(row, col)});
    }
}

WakeCandidate candidate_from_bin(WakeKind kind, const Bin& bin) {
    WakeCandidate c;
    c.kind = kind;
    c.r = bin.r;
    c.theta_deg = bin.theta_deg;
    c.peak_value = bin.value;
    c.located = true;
    return c;
}

// Maximum-value bin among the columns whose signed offset from a reference
// angle lies in [lo, hi]; ties resolve to the lexicographically smallest
// (theta, r). Returns false when the window holds no admissible bin.
bool max_bin_in_offset_band(const Sinogram& sino, const ArrayXXb& region, double ref_deg,
                            double lo, double hi, Bin& best) {
    bool found = false;
    for (int col = 0; col < sino.grid.count; ++col) {
        const double off = signed_angle_diff_deg(sino.grid.angle_deg(col), ref_deg);
        if (off < lo - kAngleSlop || off > hi + kAngleSlop) continue;
        for_each_admissible(sino, region, col, [&](const Bin& b) {
            if (!found || b.value > best.value) {
                best = b;
                found = true;
            }
        });
    }
    return found;
}

struct LineSamples {
    std::vector<double> values;   // unmasked bilinear samples
    Eigen::Vector2d endpoint{0, 0};
    bool any_inside = false;
};

double bilinear_at(const Image& image, double px, double py) {
    const int m = image.size();
    const auto clampi = [m](int v) { return std::clamp(v, 0, m - 1); };
    const int x0 = clampi(static_cast<int>(std::floor(px)));
    const int y0 = clampi(static_cast<int>(std::floor(py)));
    const int x1 = clampi(x0 + 1);
    const int y1 = clampi(y0 + 1);
    const double fx = std::clamp(px - x0, 0.0, 1.0);
    const double fy = std::clamp(py - y0, 0.0, 1.0);
    const double top = (1.0 - fx) * image(y0, x0) + fx * image(y0, x1);
    const double bot = (1.0 - fx) * image(y1, x0) + fx * image(y1, x1);
    return (1.0 - fy) * top + fy * bot;
}

// Unit-arclength samples along origin + t * dir for t >= 0, restricted to the
// image square. Masked positions (nearest pixel) are skipped but still advance
// the endpoint.
LineSamples sample_ray(const Image& image, const Eigen::Vector2d& origin,
                       const Eigen::Vector2d& dir) {
    LineSamples out;
    const double m1 = image.size() - 1.0;

    double t_enter = 0.0;
    double t_exit = std::numeric_limits<double>::infinity();
    for (int axis = 0; axis < 2; ++axis) {
        const double p = origin[axis];
        const double d = dir[axis];
        if (std::abs(d) < 1e-12) {
            if (p < -1e-9 || p > m1 + 1e-9) return out;  // parallel and outside
            continue;
        }
        const double ta = (0.0 - p) / d;
        const double tb = (m1 - p) / d;
        t_enter = std::max(t_enter, std::min(ta, tb));
        t_exit = std::min(t_exit, std::max(ta, tb));
    }
    if (t_exit < t_enter) return out;

    out.any_inside = true;
    out.endpoint = origin + t_exit * dir;
    for (double t = t_enter; t <= t_exit + 1e-9; t += 1.0) {
        const Eigen::Vector2d pos = origin + t * dir;
        const int nx = std::clamp(static_cast<int>(std::lround(pos.x())), 0, image.size() - 1);
        const int ny = std::clamp(static_cast<int>(std::lround(pos.y())), 0, image.size() - 1);
        if (!image.is_unmasked(ny, nx)) continue;
        out.values.push_back(bilinear_at(image, pos.x(), pos.y()));
    }
    return out;
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

bool endpoint_less(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    if (a.x() != b.x()) return a.x() < b.x();
    return a.y() < b.y();
}

}  // namespace

const char* wake_kind_name(WakeKind kind) {
    switch (kind) {
        case WakeKind::Turbulent: return "turbulent";
        case WakeKind::NarrowV1: return "narrow_v1";
        case WakeKind::NarrowV2: return "narrow_v2";
        case WakeKind::Kelvin1: return "kelvin1";
        case WakeKind::Kelvin2: return "kelvin2";
    }
    return "unknown";
}

WakeKind wake_kind_from_name(const std::string& name) {
    for (int k = 0; k < kWakeKindCount; ++k)
        if (name == wake_kind_name(static_cast<WakeKind>(k))) return static_cast<WakeKind>(k);
    throw std::invalid_argument("unknown wake kind: " + name);
}

const char* candidate_status_name(CandidateStatus status) {
    switch (status) {
        case CandidateStatus::Confirmed: return "confirmed";
        case CandidateStatus::Discarded: return "discarded";
        case CandidateStatus::NotSearched: return "not_searched";
    }
    return "unknown";
}

CandidateStatus candidate_status_from_name(const std::string& name) {
    if (name == "confirmed") return CandidateStatus::Confirmed;
    if (name == "discarded") return CandidateStatus::Discarded;
    if (name == "not_searched") return CandidateStatus::NotSearched;
    throw std::invalid_argument("unknown candidate status: " + name);
}

void DetectConfig::validate(int image_size) const {
    const double a = azimuth_shift_for(image_size);
    if (!(a > 0.0 && a < image_size / std::sqrt(2.0)))
        throw std::invalid_argument("DetectConfig: A must be in (0, M/sqrt(2))");
    if (!(tn_window_deg > 0.0) || !(kelvin_window_deg > 0.0))
        throw std::invalid_argument("DetectConfig: windows must be positive");
    if (!(mask_radius > 0.0))
        throw std::invalid_argument("DetectConfig: mask radius must be positive");
    if (!(halfline_cone_deg > 0.0 && halfline_cone_deg <= 90.0))
        throw std::invalid_argument("DetectConfig: cone must be in (0, 90] degrees");
}

bool sine_region_admits(double r, double theta_deg, double azimuth_shift) {
    const double bound = azimuth_shift * std::sin(theta_deg * kPi / 180.0);
    return std::abs(r) <= bound + kAngleSlop;
}

double signed_angle_diff_deg(double a_deg, double b_deg) {
    double d = std::fmod(a_deg - b_deg, 180.0);
    if (d < 0.0) d += 180.0;
    if (d >= 90.0) d -= 180.0;
    return d;
}

double angle_distance_deg(double a_deg, double b_deg) {
    return std::abs(signed_angle_diff_deg(a_deg, b_deg));
}

Image mask_ship(const Image& image, double center_x, double center_y, double radius) {
    image.validate();
    const int m = image.size();
    if (center_x < 0 || center_x > m - 1 || center_y < 0 || center_y > m - 1)
        throw std::invalid_argument("mask_ship: center outside image");
    if (!(radius > 0.0)) throw std::invalid_argument("mask_ship: radius must be positive");
    if (radius >= m / 2.0)
        throw std::invalid_argument("mask_ship: radius would mask the whole search area");

    ArrayXXb mask = image.has_mask() ? image.mask() : ArrayXXb::Constant(m, m, true);
    for (int y = 0; y < m; ++y)
        for (int x = 0; x < m; ++x) {
            const double dx = x - center_x;
            const double dy = y - center_y;
            if (std::sqrt(dx * dx + dy * dy) < radius) mask(y, x) = false;
        }

    Image out(image.pixels());
    out.set_mask(std::move(mask));
    return out;
}

ArrayXXb restrict_search(const Sinogram& sinogram, double azimuth_shift) {
    sinogram.validate();
    if (!(azimuth_shift > 0.0))
        throw std::invalid_argument("restrict_search: A must be positive");
    ArrayXXb region(sinogram.offset_count(), sinogram.grid.count);
    for (int col = 0; col < sinogram.grid.count; ++col) {
        const double theta = sinogram.grid.angle_deg(col);
        for (int row = 0; row < sinogram.offset_count(); ++row)
            region(row, col) = sine_region_admits(sinogram.r_of_row(row), theta, azimuth_shift);
    }
    return region;
}

std::pair<WakeCandidate, WakeCandidate> detect_tn_pair(const Sinogram& estimate,
                                                       const ArrayXXb& region,
                                                       double window_deg) {
    estimate.validate();
    if (region.rows() != estimate.values.rows() || region.cols() != estimate.values.cols())
        throw std::invalid_argument("detect_tn_pair: region shape mismatch");
    if (!region.any()) throw std::invalid_argument("no candidates in restricted region");

    const int t_count = estimate.grid.count;
    bool found = false;
    double best_gap = 0.0;
    Bin best_trough{}, best_peak{};

    for (int tc = 0; tc < t_count; ++tc) {
        const double theta_t = estimate.grid.angle_deg(tc);
        for_each_admissible(estimate, region, tc, [&](const Bin& trough) {
            for (int nc = 0; nc < t_count; ++nc) {
                if (angle_distance_deg(estimate.grid.angle_deg(nc), theta_t) >
                    window_deg + kAngleSlop)
                    continue;
                for_each_admissible(estimate, region, nc, [&](const Bin& peak) {
                    const double gap = peak.value - trough.value;
                    if (!found || gap > best_gap) {
                        best_gap = gap;
                        best_trough = trough;
                        best_peak = peak;
                        found = true;
                    }
                });
            }
        });
    }
    if (!found) throw std::invalid_argument("no candidates in restricted region");
    return {candidate_from_bin(WakeKind::Turbulent, best_trough),
            candidate_from_bin(WakeKind::NarrowV1, best_peak)};
}

WakeCandidate detect_second_narrow(const Sinogram& estimate, const ArrayXXb& region,
                                   const WakeCandidate& turbulent,
                                   const WakeCandidate& narrow1, double window_deg) {
    estimate.validate();
    if (!turbulent.located || !narrow1.located)
        throw std::invalid_argument("detect_second_narrow: T-N pair must be located");

    const double side = signed_angle_diff_deg(narrow1.theta_deg, turbulent.theta_deg);
    // Opposite side of the turbulent wake, excluding its own angle column.
    const double grid_step = estimate.grid.spacing_deg();
    double lo, hi;
    if (side >= 0.0) {
        lo = -window_deg;
        hi = -grid_step;
    } else {
        lo = grid_step;
        hi = window_deg;
    }

    Bin best{};
    if (!max_bin_in_offset_band(estimate, region, turbulent.theta_deg, lo, hi, best)) {
        WakeCandidate none;
        none.kind = WakeKind::NarrowV2;
        return none;
    }
    return candidate_from_bin(WakeKind::NarrowV2, best);
}

std::pair<WakeCandidate, WakeCandidate> detect_kelvin(const Sinogram& estimate,
                                                      const ArrayXXb& region,
                                                      const WakeCandidate& turbulent,
                                                      double window_deg) {
    estimate.validate();
    if (!turbulent.located)
        throw std::invalid_argument("detect_kelvin: turbulent wake must be located");

    const auto side_candidate = [&](WakeKind kind, double lo, double hi) {
        Bin best{};
        if (!max_bin_in_offset_band(estimate, region, turbulent.theta_deg, lo, hi, best)) {
            WakeCandidate none;
            none.kind = kind;
            return none;
        }
        return candidate_from_bin(kind, best);
    };
    return {side_candidate(WakeKind::Kelvin1, 10.0, 10.0 + window_deg),
            side_candidate(WakeKind::Kelvin2, -(10.0 + window_deg), -10.0)};
}

WakeCandidate resolve_halfline(const Image& image, const WakeCandidate& candidate,
                               const Eigen::Vector2d& ship_center, double cone_deg,
                               const HalfLine* turbulent_halfline) {
    image.validate();
    WakeCandidate out = candidate;
    if (!candidate.located) return out;

    const double theta = candidate.theta_deg * kPi / 180.0;
    const Eigen::Vector2d normal(std::cos(theta), std::sin(theta));
    const Eigen::Vector2d along(-std::sin(theta), std::cos(theta));
    const Eigen::Vector2d center(image.center(), image.center());

    // Foot of the perpendicular from the ship onto the candidate line; the
    // two half-lines start here.
    const Eigen::Vector2d foot =
        ship_center + (candidate.r - normal.dot(ship_center - center)) * normal;

    const LineSamples pos = sample_ray(image, foot, along);
    const LineSamples neg = sample_ray(image, foot, -along);
    if (!pos.any_inside && !neg.any_inside) {
        out.status = CandidateStatus::Discarded;
        return out;
    }

    bool take_positive;
    if (turbulent_halfline == nullptr) {
        // Turbulent wake is dark: keep the half with the lower mean.
        if (pos.values.empty() && neg.values.empty()) {
            out.status = CandidateStatus::Discarded;
            return out;
        }
        if (pos.values.empty() || neg.values.empty()) {
            take_positive = neg.values.empty();
        } else {
            const double mp = mean_of(pos.values);
            const double mn = mean_of(neg.values);
            if (mp != mn) {
                take_positive = mp < mn;
            } else {
                take_positive = endpoint_less(neg.endpoint, pos.endpoint);
            }
        }
    } else {
        const Eigen::Vector2d turb_dir = turbulent_halfline->direction();
        const double cone_cos = std::cos(cone_deg * kPi / 180.0) - 1e-12;
        const bool pos_ok = pos.any_inside && along.dot(turb_dir) >= cone_cos;
        const bool neg_ok = neg.any_inside && (-along).dot(turb_dir) >= cone_cos;
        if (!pos_ok && !neg_ok) {
            out.status = CandidateStatus::Discarded;
            return out;
        }
        take_positive = pos_ok;
    }

    const LineSamples& chosen = take_positive ? pos : neg;
    out.half_line = HalfLine{foot, chosen.endpoint};
    out.has_half_line = true;
    return out;
}

double f_index(const Image& image, const HalfLine& half_line) {
    image.validate();
    const double length = (half_line.end - half_line.start).norm();
    if (length <= 0.0) throw std::runtime_error("f_index: insufficient support");

    const Eigen::Vector2d dir = half_line.direction();
    std::vector<double> kept;
    const int m = image.size();
    for (double s = 0.0; s <= length + 1e-9; s += 1.0) {
        const Eigen::Vector2d pos = half_line.start + s * dir;
        if (pos.x() < -1e-9 || pos.x() > m - 1 + 1e-9 || pos.y() < -1e-9 ||
            pos.y() > m - 1 + 1e-9)
            break;
        const int nx = std::clamp(static_cast<int>(std::lround(pos.x())), 0, m - 1);
        const int ny = std::clamp(static_cast<int>(std::lround(pos.y())), 0, m - 1);
        if (!image.is_unmasked(ny, nx)) continue;
        kept.push_back(bilinear_at(image, pos.x(), pos.y()));
    }
    if (kept.size() < 5) throw std::runtime_error("f_index: insufficient support");
    return mean_of(kept) / image.unmasked_mean() - 1.0;
}

WakeReport confirm_wakes(const std::array<WakeCandidate, kWakeKindCount>& candidates,
                         const DetectConfig& config) {
    WakeReport report;
    report.config = config;
    report.candidates = candidates;
    for (auto& cand : report.candidates) {
        if (cand.status == CandidateStatus::Discarded) continue;  // failed resolution
        if (!cand.has_f_index) {
            cand.status = CandidateStatus::NotSearched;
            continue;
        }
        const bool confirmed = (cand.kind == WakeKind::Turbulent)
                                   ? cand.f_index < 0.0
                                   : cand.f_index > config.f_margin;
        cand.status = confirmed ? CandidateStatus::Confirmed : CandidateStatus::Discarded;
    }
    return report;
}

WakeReport reconfirm(const WakeReport& report, double f_margin) {
    WakeReport out = report;
    out.config.f_margin = f_margin;
    for (auto& cand : out.candidates) {
        if (!cand.has_f_index) continue;
        const bool confirmed = (cand.kind == WakeKind::Turbulent)
                                   ? cand.f_index < 0.0
                                   : cand.f_index > f_margin;
        cand.status = confirmed ? CandidateStatus::Confirmed : CandidateStatus::Discarded;
    }
    return out;
}

PipelineResult detect_pipeline(const Image& image, const Eigen::Vector2d& ship_center,
                               const SolverConfig& solver_config,
                               const DetectConfig& detect_config,
                               const std::string& source_id) {
    image.validate();
    detect_config.validate(image.size());
    solver_config.validate();

    PipelineResult result;
    std::vector<std::string> diagnostics;

    const Image masked =
        mask_ship(image, ship_center.x(), ship_center.y(), detect_config.mask_radius);
    const Image standardized = standardize(masked);

    result.solver = (solver_config.prior.kind == PriorKind::GMC)
                        ? solve_fb_gmc(standardized, solver_config)
                        : solve_twist(standardized, solver_config);

    const double shift = detect_config.azimuth_shift_for(image.size());
    const ArrayXXb region = restrict_search(result.solver.estimate, shift);

    std::array<WakeCandidate, kWakeKindCount> cands;
    for (int k = 0; k < kWakeKindCount; ++k) cands[static_cast<size_t>(k)].kind = static_cast<WakeKind>(k);

    WakeCandidate turbulent, narrow1;
    bool have_pair = false;
    try {
        auto pair = detect_tn_pair(result.solver.estimate, region, detect_config.tn_window_deg);
        turbulent = pair.first;
        narrow1 = pair.second;
        have_pair = true;
    } catch (const std::exception& e) {
        diagnostics.push_back(std::string("tn_pair: ") + e.what());
    }

    if (have_pair) {
        WakeCandidate narrow2 = detect_second_narrow(result.solver.estimate, region, turbulent,
                                                     narrow1, detect_config.tn_window_deg);
        auto kelvins = detect_kelvin(result.solver.estimate, region, turbulent,
                                     detect_config.kelvin_window_deg);

        // Canonical labels: NarrowV1/Kelvin1 sit on the positive angular side
        // of the turbulent wake.
        const double side1 = signed_angle_diff_deg(narrow1.theta_deg, turbulent.theta_deg);
        WakeCandidate narrow_pos = side1 >= 0.0 ? narrow1 : narrow2;
        WakeCandidate narrow_neg = side1 >= 0.0 ? narrow2 : narrow1;
        narrow_pos.kind = WakeKind::NarrowV1;
        narrow_neg.kind = WakeKind::NarrowV2;

        cands[static_cast<size_t>(WakeKind::Turbulent)] = turbulent;
        cands[static_cast<size_t>(WakeKind::NarrowV1)] = narrow_pos;
        cands[static_cast<size_t>(WakeKind::NarrowV2)] = narrow_neg;
        cands[static_cast<size_t>(WakeKind::Kelvin1)] = kelvins.first;
        cands[static_cast<size_t>(WakeKind::Kelvin2)] = kelvins.second;

        auto& turb = cands[static_cast<size_t>(WakeKind::Turbulent)];
        turb = resolve_halfline(masked, turb, ship_center, detect_config.halfline_cone_deg,
                                nullptr);
        if (turb.has_half_line) {
            try {
                turb.f_index = f_index(masked, turb.half_line);
                turb.has_f_index = true;
            } catch (const std::exception& e) {
                turb.status = CandidateStatus::NotSearched;
                turb.has_half_line = false;
                diagnostics.push_back(std::string("turbulent: ") + e.what());
            }
        } else {
            diagnostics.push_back("turbulent: line does not intersect the image");
        }

        for (WakeKind kind : {WakeKind::NarrowV1, WakeKind::NarrowV2, WakeKind::Kelvin1,
                              WakeKind::Kelvin2}) {
            auto& cand = cands[static_cast<size_t>(kind)];
            if (!cand.located) continue;
            if (!turb.has_half_line) {
                cand.status = CandidateStatus::NotSearched;
                diagnostics.push_back(std::string(wake_kind_name(kind)) +
                                      ": no turbulent reference half-line");
                continue;
            }
            cand = resolve_halfline(masked, cand, ship_center, detect_config.halfline_cone_deg,
                                    &turb.half_line);
            if (!cand.has_half_line) continue;  // discarded by the cone or geometry
            try {
                cand.f_index = f_index(masked, cand.half_line);
                cand.has_f_index = true;
            } catch (const std::exception& e) {
                cand.status = CandidateStatus::NotSearched;
                cand.has_half_line = false;
                diagnostics.push_back(std::string(wake_kind_name(kind)) + ": " + e.what());
            }
        }
    }

    result.report = confirm_wakes(cands, detect_config);
    result.report.source_id = source_id;
    result.report.diagnostics = std::move(diagnostics);
    return result;
}

}  // namespace wakescan
