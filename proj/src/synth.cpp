#include "wakescan/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace wakescan {

namespace {

const WakePlacement* find_kind(const std::vector<WakePlacement>& wakes, WakeKind kind) {
    for (const auto& w : wakes)
        if (w.kind == kind) return &w;
    return nullptr;
}

}  // namespace

void SceneSpec::validate() const {
    if (size <= 0) throw std::invalid_argument("SceneSpec: size must be positive");
    if (!(clutter.mean > 0.0)) throw std::invalid_argument("SceneSpec: mean must be positive");
    if (clutter.noise_strength < 0.0 || clutter.swell_amplitude < 0.0)
        throw std::invalid_argument("SceneSpec: noise/swell strengths must be nonnegative");
    if (clutter.swell_wavelength <= 0.0)
        throw std::invalid_argument("SceneSpec: swell wavelength must be positive");

    int kind_count[kWakeKindCount] = {0};
    for (const auto& w : wakes) {
        if (!(w.contrast >= -0.9 && w.contrast <= 5.0))
            throw std::invalid_argument("SceneSpec: contrast outside [-0.9, 5]");
        if (!(w.width > 0.0)) throw std::invalid_argument("SceneSpec: width must be positive");
        if (w.side != 1 && w.side != -1)
            throw std::invalid_argument("SceneSpec: side must be +1 or -1");
        ++kind_count[static_cast<size_t>(w.kind)];
    }
    for (int c : kind_count)
        if (c > 1) throw std::invalid_argument("SceneSpec: duplicate wake kind");

    const WakePlacement* turb = find_kind(wakes, WakeKind::Turbulent);
    if (turb == nullptr) return;
    for (const auto& w : wakes) {
        const double d = angle_distance_deg(w.theta_deg, turb->theta_deg);
        switch (w.kind) {
            case WakeKind::NarrowV1:
            case WakeKind::NarrowV2:
                if (d > 4.0 + 1e-9)
                    throw std::invalid_argument(
                        "SceneSpec: narrow-V wake more than 4 degrees from turbulent");
                break;
            case WakeKind::Kelvin1:
            case WakeKind::Kelvin2:
                if (d < 10.0 - 1e-9 || d > 20.0 + 1e-9)
                    throw std::invalid_argument(
                        "SceneSpec: Kelvin wake outside [10, 20] degrees from turbulent");
                break;
            case WakeKind::Turbulent:
                break;
        }
    }
}

int GroundTruth::visible_count() const {
    int n = 0;
    for (const auto& w : wakes) n += w.visible ? 1 : 0;
    return n;
}

std::pair<Image, GroundTruth> generate_scene(const SceneSpec& spec) {
    spec.validate();

    const int m = spec.size;
    const double ctr = (m - 1) / 2.0;
    const ClutterSpec& cl = spec.clutter;
    const double swell_rad = cl.swell_direction_deg * kPi / 180.0;
    const double swell_freq = 2.0 * kPi / cl.swell_wavelength;
    const Eigen::Vector2d swell_n(std::cos(swell_rad), std::sin(swell_rad));

    struct RenderedWake {
        Eigen::Vector2d normal;
        Eigen::Vector2d along;   // includes the side sign
        Eigen::Vector2d foot;    // centered coordinates
        double contrast;
        double half_width;
    };
    std::vector<RenderedWake> rendered;
    rendered.reserve(spec.wakes.size());
    for (const auto& w : spec.wakes) {
        const double th = w.theta_deg * kPi / 180.0;
        RenderedWake rw;
        rw.normal = Eigen::Vector2d(std::cos(th), std::sin(th));
        rw.along = w.side * Eigen::Vector2d(-std::sin(th), std::cos(th));
        rw.foot = w.r * rw.normal;
        rw.contrast = w.contrast;
        rw.half_width = w.width / 2.0;
        rendered.push_back(rw);
    }

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    Image image(m);
    for (int y = 0; y < m; ++y) {
        for (int x = 0; x < m; ++x) {
            const Eigen::Vector2d p(x - ctr, y - ctr);
            double value = cl.mean;
            if (cl.swell_amplitude > 0.0)
                value *= 1.0 + cl.swell_amplitude * std::sin(swell_freq * swell_n.dot(p));
            double wake_factor = 1.0;
            for (const auto& rw : rendered) {
                const double perp = std::abs(rw.normal.dot(p) - rw.normal.dot(rw.foot));
                const double lon = rw.along.dot(p - rw.foot);
                const double across = std::clamp(rw.half_width + 0.5 - perp, 0.0, 1.0);
                const double head = std::clamp(lon + 0.5, 0.0, 1.0);
                wake_factor += rw.contrast * across * head;
            }
            value *= wake_factor;
            if (cl.noise_strength > 0.0) value *= 1.0 + cl.noise_strength * gauss(rng);
            image(y, x) = std::max(value, 0.0);
        }
    }

    GroundTruth truth;
    for (const auto& w : spec.wakes) {
        TruthEntry& e = truth.of(w.kind);
        e.visible = true;
        e.r = w.r;
        e.theta_deg = w.theta_deg;
        e.side = w.side;
    }
    return {std::move(image), truth};
}

const std::vector<std::pair<std::string, std::array<bool, kWakeKindCount>>>&
suite_visibility_table() {
    // turbulent, narrow1, narrow2, kelvin1, kelvin2
    static const std::vector<std::pair<std::string, std::array<bool, kWakeKindCount>>> table = {
        {"1.1", {true, true, true, true, true}},
        {"1.2", {true, true, false, true, false}},
        {"1.3", {true, true, false, true, false}},
        {"1.4", {true, true, false, false, false}},
        {"2.1", {true, true, false, true, true}},
        {"2.2", {true, true, false, false, false}},
        {"2.3", {true, true, false, true, false}},
        {"2.4", {true, true, false, true, false}},
        {"2.5", {true, true, true, true, true}},
        {"3.1", {true, true, false, true, false}},
        {"3.2", {true, true, false, true, false}},
        {"3.3", {true, true, false, true, false}},
        {"4.1", {true, true, false, false, false}},
        {"5.1", {true, true, false, false, false}},
        {"5.2", {true, true, false, false, false}},
        {"5.3", {true, true, false, true, false}},
        {"6.1", {true, true, true, true, false}},
        {"6.2", {true, true, false, false, false}},
        {"6.3", {true, true, false, true, false}},
        {"7.1", {true, true, false, true, false}},
        {"8.1", {true, true, false, false, false}},
        {"8.2", {true, true, false, true, false}},
        {"8.3", {true, true, false, false, false}},
        {"9.1", {true, true, false, false, false}},
        {"10.1", {true, true, false, false, false}},
        {"10.2", {true, true, false, false, false}},
        {"10.3", {true, true, false, false, false}},
        {"11.1", {true, true, false, false, false}},
    };
    return table;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    // splitmix64 over seed + index
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<SuiteScene> paper_case_suite(const SuiteConfig& config) {
    if (config.size < 32) throw std::invalid_argument("paper_case_suite: size must be >= 32");

    const auto& table = suite_visibility_table();
    std::vector<SuiteScene> scenes;
    scenes.reserve(table.size());

    for (size_t idx = 0; idx < table.size(); ++idx) {
        const auto& [id, visible] = table[idx];

        std::mt19937_64 rng(mix_seed(config.seed, idx));
        auto uniform = [&](double lo, double hi) {
            return std::uniform_real_distribution<double>(lo, hi)(rng);
        };

        SceneSpec spec;
        spec.size = config.size;
        spec.clutter = config.clutter;
        spec.clutter.swell_direction_deg = uniform(0.0, 180.0);
        spec.seed = mix_seed(config.seed, idx + 1000);

        const double theta_turb = uniform(35.0, 145.0);
        const int side = rng() % 2 == 0 ? 1 : -1;

        auto add_wake = [&](WakeKind kind, double theta, double r, double contrast,
                            double width) {
            WakePlacement w;
            w.kind = kind;
            w.theta_deg = theta;
            w.r = r;
            w.contrast = contrast;
            w.width = width;
            w.side = side;
            spec.wakes.push_back(w);
        };

        if (visible[0])
            add_wake(WakeKind::Turbulent, theta_turb, uniform(-2.0, 2.0),
                     -uniform(config.turbulent_contrast_lo, config.turbulent_contrast_hi), 2.5);
        if (visible[1])
            add_wake(WakeKind::NarrowV1, theta_turb + uniform(2.0, 4.0), uniform(-3.0, 3.0),
                     uniform(config.narrow_contrast_lo, config.narrow_contrast_hi), 1.5);
        if (visible[2])
            add_wake(WakeKind::NarrowV2, theta_turb - uniform(2.0, 4.0), uniform(-3.0, 3.0),
                     uniform(config.narrow_contrast_lo, config.narrow_contrast_hi), 1.5);
        if (visible[3])
            add_wake(WakeKind::Kelvin1, theta_turb + uniform(11.0, 19.0), uniform(-4.0, 4.0),
                     uniform(config.kelvin_contrast_lo, config.kelvin_contrast_hi), 1.5);
        if (visible[4])
            add_wake(WakeKind::Kelvin2, theta_turb - uniform(11.0, 19.0), uniform(-4.0, 4.0),
                     uniform(config.kelvin_contrast_lo, config.kelvin_contrast_hi), 1.5);

        SuiteScene scene;
        scene.id = id;
        scene.spec = spec;
        auto [image, truth] = generate_scene(spec);
        scene.image = std::move(image);
        scene.truth = truth;
        scenes.push_back(std::move(scene));
    }
    return scenes;
}

}  // namespace wakescan
