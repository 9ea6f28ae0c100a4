#include "wakescan/transform.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace wakescan {

namespace {

// Shifted projected offset of pixel (x, y): x*cos(theta) + y*sin(theta) +
// half. radon and back_project must evaluate the identical expression so the
// pair stays an exact transpose. The +half shift keeps offsets positive,
// making plain integer truncation the floor. Written as start + y*s to keep
// pixel offsets independent of each other in the inner loop.
inline double column_start_offset(int x, double ctr, double c, double s, int half) {
    return (x - ctr) * c + (0.0 - ctr) * s + half;
}

inline int next_pow2(int n) {
    int p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace

Sinogram radon(const Image& image, const AngleGrid& grid) {
    image.validate();
    grid.validate();

    const int m = image.size();
    const int r_count = Sinogram::offsets_for(m);
    const int half = (r_count - 1) / 2;
    const double ctr = image.center();
    const bool masked = image.has_mask();

    Sinogram sino{grid, Eigen::ArrayXXd::Zero(r_count, grid.count)};

    std::vector<double> full_w, open_w;
    if (masked) {
        full_w.assign(static_cast<size_t>(r_count), 0.0);
        open_w.assign(static_cast<size_t>(r_count), 0.0);
    }

    for (int t = 0; t < grid.count; ++t) {
        const double c = std::cos(grid.angle_rad(t));
        const double s = std::sin(grid.angle_rad(t));
        double* col = sino.values.col(t).data();
        if (!masked) {
            for (int x = 0; x < m; ++x) {
                const double* px = image.pixels().col(x).data();
                const double start = column_start_offset(x, ctr, c, s, half);
                for (int y = 0; y < m; ++y) {
                    const double off = start + y * s;
                    const int row = static_cast<int>(off);
                    const double f = off - row;
                    const double v = px[y];
                    col[row] += (1.0 - f) * v;
                    col[row + 1] += f * v;
                }
            }
            continue;
        }

        std::fill(full_w.begin(), full_w.end(), 0.0);
        std::fill(open_w.begin(), open_w.end(), 0.0);
        for (int x = 0; x < m; ++x) {
            const double* px = image.pixels().col(x).data();
            const double start = column_start_offset(x, ctr, c, s, half);
            for (int y = 0; y < m; ++y) {
                const double off = start + y * s;
                const int row = static_cast<int>(off);
                const double f = off - row;
                const bool open = image.is_unmasked(y, x);
                if (open) {
                    const double v = px[y];
                    col[row] += (1.0 - f) * v;
                    col[row + 1] += f * v;
                    open_w[static_cast<size_t>(row)] += 1.0 - f;
                    open_w[static_cast<size_t>(row) + 1] += f;
                }
                full_w[static_cast<size_t>(row)] += 1.0 - f;
                full_w[static_cast<size_t>(row) + 1] += f;
            }
        }
        for (int row = 0; row < r_count; ++row) {
            const double ow = open_w[static_cast<size_t>(row)];
            if (ow > 0.0)
                col[row] *= std::min(full_w[static_cast<size_t>(row)] / ow, 2.0);
        }
    }
    return sino;
}

Image back_project(const Sinogram& sinogram, int image_size) {
    sinogram.validate();
    if (image_size <= 0)
        throw std::invalid_argument("back_project: image size must be positive");
    if (sinogram.offset_count() <
        static_cast<int>(std::ceil(image_size * std::sqrt(2.0))) + 1)
        throw std::invalid_argument(
            "back_project: offset range too small for requested image size");

    const int m = image_size;
    const int t_count = sinogram.grid.count;
    const int half = sinogram.half_range();
    const double ctr = (m - 1) / 2.0;

    Image out(m);
    for (int t = 0; t < t_count; ++t) {
        const double c = std::cos(sinogram.grid.angle_rad(t));
        const double s = std::sin(sinogram.grid.angle_rad(t));
        const double* col = sinogram.values.col(t).data();
        for (int x = 0; x < m; ++x) {
            double* px = out.pixels().col(x).data();
            const double start = column_start_offset(x, ctr, c, s, half);
            for (int y = 0; y < m; ++y) {
                const double off = start + y * s;
                const int row = static_cast<int>(off);
                const double f = off - row;
                px[y] += (1.0 - f) * col[row] + f * col[row + 1];
            }
        }
    }
    return out;
}

std::vector<double> ramp_filter_kernel(int offset_count, double cutoff) {
    const int pad = next_pow2(2 * offset_count);
    std::vector<double> kernel(static_cast<size_t>(pad), 0.0);
    const double keep = 0.5 * cutoff;
    for (int k = 0; k < pad; ++k) {
        const double v = static_cast<double>(std::min(k, pad - k)) / pad;
        if (v > keep) continue;
        for (int n = 0; n < pad; ++n)
            kernel[static_cast<size_t>(n)] += v * std::cos(2.0 * kPi * k * n / pad) / pad;
    }
    return kernel;
}

Image inverse_radon(const Sinogram& sinogram, int image_size, const FbpFilter& filter) {
    sinogram.validate();
    filter.validate();

    const int r_count = sinogram.offset_count();
    const int t_count = sinogram.grid.count;
    const int pad = next_pow2(2 * r_count);
    const int start = (pad - r_count) / 2;

    // |v| on the discrete frequency axis, truncated at the cutoff fraction
    // of Nyquist.
    std::vector<double> response(static_cast<size_t>(pad));
    const double keep = 0.5 * filter.cutoff;
    for (int k = 0; k < pad; ++k) {
        const double v = static_cast<double>(std::min(k, pad - k)) / pad;
        response[static_cast<size_t>(k)] = (v <= keep) ? v : 0.0;
    }

    Eigen::FFT<double> fft;
    std::vector<double> padded(static_cast<size_t>(pad));
    std::vector<std::complex<double>> spectrum(static_cast<size_t>(pad));

    Sinogram filtered{sinogram.grid, Eigen::ArrayXXd::Zero(r_count, t_count)};
    for (int t = 0; t < t_count; ++t) {
        std::fill(padded.begin(), padded.end(), 0.0);
        for (int r = 0; r < r_count; ++r)
            padded[static_cast<size_t>(start + r)] = sinogram.values(r, t);
        fft.fwd(spectrum, padded);
        for (int k = 0; k < pad; ++k) spectrum[static_cast<size_t>(k)] *= response[static_cast<size_t>(k)];
        fft.inv(padded, spectrum);
        for (int r = 0; r < r_count; ++r)
            filtered.values(r, t) = padded[static_cast<size_t>(start + r)];
    }

    Image out = back_project(filtered, image_size);
    out.pixels() *= kPi / t_count;
    return out;
}

}  // namespace wakescan
