#ifndef WAKESCAN_TRANSFORM_HPP
#define WAKESCAN_TRANSFORM_HPP

#include "wakescan/grid.hpp"

namespace wakescan {

/// Discrete Radon transform: pixel-driven projection with linear interpolation
/// between the two nearest offset bins. Masked pixels contribute nothing; each
/// line integral is rescaled by (full line weight)/(unmasked line weight),
/// capped at 2x.
Sinogram radon(const Image& image, const AngleGrid& grid);

/// Unfiltered back-projection, the exact transpose of the unmasked Radon
/// transform: <radon(P), S> == <P, back_project(S, M)> up to rounding.
Image back_project(const Sinogram& sinogram, int image_size);

/// Filtered back-projection: per-angle ramp filtering in the frequency domain
/// (zero-padded to the next power of two >= 2R), back-projection, and the
/// pi/T angle-measure normalization. Approximates the inverse of radon().
Image inverse_radon(const Sinogram& sinogram, int image_size,
                    const FbpFilter& filter = FbpFilter{});

/// Spatial impulse response of the discrete ramp filter used by
/// inverse_radon, centered at index 0 (symmetric, length = pad size).
std::vector<double> ramp_filter_kernel(int offset_count, double cutoff = 1.0);

}  // namespace wakescan

#endif
