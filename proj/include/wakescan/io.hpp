#ifndef WAKESCAN_IO_HPP
#define WAKESCAN_IO_HPP

#include "wakescan/detect.hpp"
#include "wakescan/eval.hpp"
#include "wakescan/grid.hpp"
#include "wakescan/solver.hpp"
#include "wakescan/synth.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace wakescan {

/// Write via a temporary file in the same directory, then rename.
void atomic_write(const std::filesystem::path& path, const std::string& bytes);

/// 16-bit binary PGM (P5, big-endian samples). Values are scaled linearly so
/// the image maximum maps to 65535; an all-zero image stays zero.
void write_pgm16(const std::filesystem::path& path, const Image& image);

/// Reads binary P5 with maxval up to 65535. Non-square rasters are
/// center-cropped to the largest inscribed square.
Image read_pgm(const std::filesystem::path& path);

/// 8-bit overlay: the image compressed to gray levels 0..140 with confirmed
/// half-lines burned in (turbulent 255, narrow 200, kelvin 160).
void write_overlay_pgm(const std::filesystem::path& path, const Image& image,
                       const WakeReport& report);

void write_sino(const std::filesystem::path& path, const Sinogram& sinogram, int image_size);
std::pair<Sinogram, int> read_sino(const std::filesystem::path& path);

std::string report_to_json(const WakeReport& report);
WakeReport report_from_json(const std::string& text);

struct TruthSidecar {
    std::string scene_id;
    Eigen::Vector2d ship_center{0, 0};
    std::uint64_t seed = 0;
    GroundTruth truth;
};

std::string truth_to_json(const TruthSidecar& sidecar);
TruthSidecar truth_from_json(const std::string& text);

std::string metrics_to_json(const Metrics& metrics, const DetectionCounts& counts);

std::string trace_to_csv(const SolverResult& result);
std::string roc_to_csv(const std::vector<RocPoint>& points);
std::string manifest_to_csv(const std::vector<SuiteScene>& scenes);

/// (margin-free) per-prior metric table, one row per label.
std::string metrics_table_csv(
    const std::vector<std::pair<std::string, std::pair<DetectionCounts, Metrics>>>& rows);

/// Minimal line plot of ROC curves, one polyline per labelled series.
std::string roc_svg(const std::vector<std::pair<std::string, std::vector<RocPoint>>>& curves);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace wakescan

#endif
