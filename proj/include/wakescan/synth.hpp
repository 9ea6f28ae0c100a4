#ifndef WAKESCAN_SYNTH_HPP
#define WAKESCAN_SYNTH_HPP

#include "wakescan/detect.hpp"
#include "wakescan/grid.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace wakescan {

struct ClutterSpec {
    double mean = 100.0;
    double noise_strength = 0.1;     // multiplicative, zero-mean Gaussian
    double swell_amplitude = 0.04;   // relative intensity of the swell sinusoid
    double swell_wavelength = 18.0;  // pixels
    double swell_direction_deg = 30.0;
};

struct WakePlacement {
    WakeKind kind = WakeKind::Turbulent;
    double theta_deg = 90.0;
    double r = 0.0;           // pixels, signed, from the image center
    double contrast = -0.4;   // relative intensity; negative = dark
    double width = 2.0;       // pixels
    int side = +1;            // half-line direction sign along (-sin t, cos t)
};

struct SceneSpec {
    int size = 128;
    ClutterSpec clutter;
    std::vector<WakePlacement> wakes;
    std::uint64_t seed = 0;

    void validate() const;
};

struct TruthEntry {
    bool visible = false;
    double r = 0.0;
    double theta_deg = 0.0;
    int side = +1;
};

struct GroundTruth {
    std::array<TruthEntry, kWakeKindCount> wakes;  // indexed by WakeKind

    const TruthEntry& of(WakeKind kind) const { return wakes[static_cast<size_t>(kind)]; }
    TruthEntry& of(WakeKind kind) { return wakes[static_cast<size_t>(kind)]; }
    int visible_count() const;
};

/// Sea-clutter background (swell sinusoid + multiplicative speckle) with
/// anti-aliased half-line wakes rendered from the image center. Deterministic
/// for a fixed seed.
std::pair<Image, GroundTruth> generate_scene(const SceneSpec& spec);

struct SuiteScene {
    std::string id;
    SceneSpec spec;
    Image image;
    GroundTruth truth;
};

struct SuiteConfig {
    int size = 128;
    std::uint64_t seed = 0;
    ClutterSpec clutter;
    // Contrast magnitudes drawn uniformly from these ranges.
    double turbulent_contrast_lo = 0.35, turbulent_contrast_hi = 0.5;
    double narrow_contrast_lo = 0.5, narrow_contrast_hi = 0.9;
    double kelvin_contrast_lo = 0.3, kelvin_contrast_hi = 0.5;
};

/// Visibility pattern per scene of the 28-tile study set, indexed by kind.
const std::vector<std::pair<std::string, std::array<bool, kWakeKindCount>>>&
suite_visibility_table();

/// 28 synthetic scenes whose visible-wake patterns replicate the study set,
/// with geometry randomized per seed.
std::vector<SuiteScene> paper_case_suite(const SuiteConfig& config);

/// Per-index derived seed so scenes are independent of generation order.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace wakescan

#endif
