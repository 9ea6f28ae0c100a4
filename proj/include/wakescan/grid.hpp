#ifndef WAKESCAN_GRID_HPP
#define WAKESCAN_GRID_HPP

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace wakescan {

using ArrayXXb = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

constexpr double kPi = 3.14159265358979323846;

/// Uniform angle grid over [0, 180) degrees, angle[0] = 0.
struct AngleGrid {
    int count = 180;

    double spacing_deg() const { return 180.0 / count; }
    double angle_deg(int t) const { return t * spacing_deg(); }
    double angle_rad(int t) const { return angle_deg(t) * kPi / 180.0; }

    std::vector<double> angles_deg() const {
        std::vector<double> a(static_cast<size_t>(count));
        for (int t = 0; t < count; ++t) a[static_cast<size_t>(t)] = angle_deg(t);
        return a;
    }

    void validate() const {
        if (count <= 0) throw std::invalid_argument("AngleGrid: count must be positive");
    }
};

/// Square intensity grid with an optional participation mask (true = pixel counts).
class Image {
public:
    Image() = default;
    explicit Image(int size) : pixels_(Eigen::ArrayXXd::Zero(size, size)) {}
    explicit Image(Eigen::ArrayXXd pixels) : pixels_(std::move(pixels)) {
        if (pixels_.rows() != pixels_.cols())
            throw std::invalid_argument("Image: grid must be square");
    }

    int size() const { return static_cast<int>(pixels_.rows()); }
    // (M-1)/2; pixel coordinates are measured from here in both axes.
    double center() const { return (size() - 1) / 2.0; }

    Eigen::ArrayXXd& pixels() { return pixels_; }
    const Eigen::ArrayXXd& pixels() const { return pixels_; }

    // row = y, col = x
    double operator()(int y, int x) const { return pixels_(y, x); }
    double& operator()(int y, int x) { return pixels_(y, x); }

    bool has_mask() const { return mask_.has_value(); }
    const ArrayXXb& mask() const { return *mask_; }
    void set_mask(ArrayXXb m) {
        if (m.rows() != pixels_.rows() || m.cols() != pixels_.cols())
            throw std::invalid_argument("Image: mask dimensions must match pixels");
        mask_ = std::move(m);
    }
    void clear_mask() { mask_.reset(); }

    bool is_unmasked(int y, int x) const { return !mask_ || (*mask_)(y, x); }

    /// Rejects non-finite pixels and all-false masks.
    void validate() const {
        if (size() == 0) throw std::invalid_argument("Image: empty");
        if (!pixels_.isFinite().all())
            throw std::invalid_argument("Image: non-finite pixel value");
        if (mask_ && !mask_->any())
            throw std::invalid_argument("Image: mask excludes every pixel");
    }

    double unmasked_mean() const {
        if (!mask_) return pixels_.mean();
        double sum = 0.0;
        long n = 0;
        for (long j = 0; j < pixels_.cols(); ++j)
            for (long i = 0; i < pixels_.rows(); ++i)
                if ((*mask_)(i, j)) { sum += pixels_(i, j); ++n; }
        if (n == 0) throw std::invalid_argument("Image: mask excludes every pixel");
        return sum / static_cast<double>(n);
    }

private:
    Eigen::ArrayXXd pixels_;
    std::optional<ArrayXXb> mask_;
};

/// Radon-domain grid: rows index signed offsets r in {-(R-1)/2, ..., (R-1)/2},
/// columns index the angle grid.
struct Sinogram {
    AngleGrid grid;
    Eigen::ArrayXXd values;  // R x T

    Sinogram() = default;
    Sinogram(AngleGrid g, Eigen::ArrayXXd v) : grid(g), values(std::move(v)) {}

    int offset_count() const { return static_cast<int>(values.rows()); }
    int half_range() const { return (offset_count() - 1) / 2; }
    double r_of_row(int row) const { return row - half_range(); }
    int row_of_r(int r) const { return r + half_range(); }

    /// Smallest valid odd offset count for an M x M image.
    static int offsets_for(int image_size) {
        return 2 * static_cast<int>(std::ceil(image_size * std::sqrt(2.0) / 2.0)) + 1;
    }

    void validate() const {
        grid.validate();
        if (values.cols() != grid.count)
            throw std::invalid_argument("Sinogram: column count must match angle grid");
        if (offset_count() % 2 == 0)
            throw std::invalid_argument("Sinogram: offset count must be odd");
        if (!values.isFinite().all())
            throw std::invalid_argument("Sinogram: non-finite value");
    }
};

struct FbpFilter {
    enum class Kind { RamLak };
    Kind kind = Kind::RamLak;
    double cutoff = 1.0;  // fraction of Nyquist kept, (0, 1]

    void validate() const {
        if (!(cutoff > 0.0 && cutoff <= 1.0))
            throw std::invalid_argument("FbpFilter: cutoff must be in (0, 1]");
    }
};

}  // namespace wakescan

#endif
