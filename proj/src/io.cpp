#include "wakescan/io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace wakescan {

namespace {

using nlohmann::json;

std::string double_or_inf(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

json number_or_inf(double v) {
    if (std::isinf(v)) return json(v > 0 ? "inf" : "-inf");
    return json(v);
}

double parse_number_or_inf(const json& j) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        return std::stod(s);
    }
    return j.get<double>();
}

void burn_line(Eigen::ArrayXXd& gray, const HalfLine& line, double level) {
    const Eigen::Vector2d dir = line.direction();
    const double length = (line.end - line.start).norm();
    const int m = static_cast<int>(gray.rows());
    for (double s = 0.0; s <= length; s += 0.5) {
        const Eigen::Vector2d p = line.start + s * dir;
        const int x = static_cast<int>(std::lround(p.x()));
        const int y = static_cast<int>(std::lround(p.y()));
        if (x >= 0 && x < m && y >= 0 && y < m) gray(y, x) = level;
    }
}

}  // namespace

void atomic_write(const std::filesystem::path& path, const std::string& bytes) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

void write_pgm16(const std::filesystem::path& path, const Image& image) {
    image.validate();
    const int m = image.size();
    const double maxv = image.pixels().maxCoeff();
    const double scale = maxv > 0.0 ? 65535.0 / maxv : 0.0;

    std::string bytes;
    {
        std::ostringstream head;
        head << "P5\n" << m << " " << m << "\n65535\n";
        bytes = head.str();
    }
    bytes.reserve(bytes.size() + static_cast<size_t>(m) * m * 2);
    for (int y = 0; y < m; ++y)
        for (int x = 0; x < m; ++x) {
            const double v = std::clamp(image(y, x) * scale, 0.0, 65535.0);
            const auto q = static_cast<std::uint16_t>(std::lround(v));
            bytes.push_back(static_cast<char>(q >> 8));
            bytes.push_back(static_cast<char>(q & 0xff));
        }
    atomic_write(path, bytes);
}

Image read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open image: " + path.string());

    std::string magic;
    in >> magic;
    if (magic != "P5") throw std::invalid_argument("not a binary PGM (P5): " + path.string());

    auto next_token = [&in, &path]() {
        std::string tok;
        while (in >> tok) {
            if (tok[0] == '#') {
                std::string rest;
                std::getline(in, rest);
                continue;
            }
            return tok;
        }
        throw std::invalid_argument("truncated PGM header: " + path.string());
    };
    const int width = std::stoi(next_token());
    const int height = std::stoi(next_token());
    const long maxval = std::stol(next_token());
    if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 65535)
        throw std::invalid_argument("bad PGM header: " + path.string());
    in.get();  // single whitespace after maxval

    const int bytes_per = maxval > 255 ? 2 : 1;
    std::vector<char> raw(static_cast<size_t>(width) * height * bytes_per);
    in.read(raw.data(), static_cast<std::streamsize>(raw.size()));
    if (!in) throw std::invalid_argument("truncated PGM data: " + path.string());

    Eigen::ArrayXXd full(height, width);
    size_t pos = 0;
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            unsigned v;
            if (bytes_per == 2) {
                v = (static_cast<unsigned char>(raw[pos]) << 8) |
                    static_cast<unsigned char>(raw[pos + 1]);
                pos += 2;
            } else {
                v = static_cast<unsigned char>(raw[pos]);
                pos += 1;
            }
            full(y, x) = static_cast<double>(v);
        }

    const int side = std::min(width, height);
    const int x0 = (width - side) / 2;
    const int y0 = (height - side) / 2;
    return Image(Eigen::ArrayXXd(full.block(y0, x0, side, side)));
}

void write_overlay_pgm(const std::filesystem::path& path, const Image& image,
                       const WakeReport& report) {
    const int m = image.size();
    const double maxv = image.pixels().maxCoeff();
    Eigen::ArrayXXd gray =
        maxv > 0.0 ? Eigen::ArrayXXd(image.pixels() * (140.0 / maxv)) : Eigen::ArrayXXd::Zero(m, m);

    for (const auto& cand : report.candidates) {
        if (cand.status != CandidateStatus::Confirmed || !cand.has_half_line) continue;
        double level = 160.0;
        if (cand.kind == WakeKind::Turbulent) level = 255.0;
        else if (cand.kind == WakeKind::NarrowV1 || cand.kind == WakeKind::NarrowV2) level = 200.0;
        burn_line(gray, cand.half_line, level);
    }

    std::string bytes;
    {
        std::ostringstream head;
        head << "P5\n" << m << " " << m << "\n255\n";
        bytes = head.str();
    }
    for (int y = 0; y < m; ++y)
        for (int x = 0; x < m; ++x)
            bytes.push_back(static_cast<char>(
                static_cast<std::uint8_t>(std::clamp(gray(y, x), 0.0, 255.0))));
    atomic_write(path, bytes);
}

void write_sino(const std::filesystem::path& path, const Sinogram& sinogram, int image_size) {
    sinogram.validate();
    std::ostringstream head;
    head << "SINO1\n"
         << image_size << " " << sinogram.offset_count() << " " << sinogram.grid.count << " "
         << std::setprecision(17) << sinogram.grid.spacing_deg() << "\n";
    std::string bytes = head.str();
    const size_t count = static_cast<size_t>(sinogram.offset_count()) * sinogram.grid.count;
    bytes.reserve(bytes.size() + count * sizeof(double));
    for (int row = 0; row < sinogram.offset_count(); ++row)
        for (int col = 0; col < sinogram.grid.count; ++col) {
            const double v = sinogram.values(row, col);
            char buf[sizeof(double)];
            std::memcpy(buf, &v, sizeof(double));
            bytes.append(buf, sizeof(double));
        }
    atomic_write(path, bytes);
}

std::pair<Sinogram, int> read_sino(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open sinogram: " + path.string());
    std::string magic;
    std::getline(in, magic);
    if (magic != "SINO1") throw std::invalid_argument("bad sinogram magic: " + path.string());
    int m = 0, r = 0, t = 0;
    double spacing = 0.0;
    std::string header;
    std::getline(in, header);
    std::istringstream hs(header);
    hs >> m >> r >> t >> spacing;
    if (!hs || m <= 0 || r <= 0 || t <= 0)
        throw std::invalid_argument("bad sinogram header: " + path.string());

    Sinogram sino{AngleGrid{t}, Eigen::ArrayXXd::Zero(r, t)};
    for (int row = 0; row < r; ++row)
        for (int col = 0; col < t; ++col) {
            char buf[sizeof(double)];
            in.read(buf, sizeof(double));
            if (!in) throw std::invalid_argument("truncated sinogram data: " + path.string());
            double v;
            std::memcpy(&v, buf, sizeof(double));
            sino.values(row, col) = v;
        }
    return {std::move(sino), m};
}

std::string report_to_json(const WakeReport& report) {
    json j;
    j["source"] = report.source_id;
    j["f_margin"] = report.config.f_margin;
    j["candidates"] = json::array();
    for (const auto& cand : report.candidates) {
        json c;
        c["kind"] = wake_kind_name(cand.kind);
        c["status"] = candidate_status_name(cand.status);
        c["located"] = cand.located;
        c["r"] = cand.r;
        c["theta_deg"] = cand.theta_deg;
        c["peak_value"] = cand.peak_value;
        if (cand.has_f_index) c["f_index"] = cand.f_index;
        if (cand.has_half_line)
            c["endpoints"] = {{cand.half_line.start.x(), cand.half_line.start.y()},
                              {cand.half_line.end.x(), cand.half_line.end.y()}};
        j["candidates"].push_back(c);
    }
    j["diagnostics"] = report.diagnostics;
    return j.dump(2) + "\n";
}

WakeReport report_from_json(const std::string& text) {
    const json j = json::parse(text);
    WakeReport report;
    report.source_id = j.value("source", "");
    report.config.f_margin = j.value("f_margin", 0.1);
    for (const auto& c : j.at("candidates")) {
        const WakeKind kind = wake_kind_from_name(c.at("kind").get<std::string>());
        WakeCandidate& cand = report.of(kind);
        cand.kind = kind;
        cand.status = candidate_status_from_name(c.at("status").get<std::string>());
        cand.located = c.value("located", false);
        cand.r = c.value("r", 0.0);
        cand.theta_deg = c.value("theta_deg", 0.0);
        cand.peak_value = c.value("peak_value", 0.0);
        if (c.contains("f_index")) {
            cand.f_index = c["f_index"].get<double>();
            cand.has_f_index = true;
        }
        if (c.contains("endpoints")) {
            const auto& e = c["endpoints"];
            cand.half_line.start = {e[0][0].get<double>(), e[0][1].get<double>()};
            cand.half_line.end = {e[1][0].get<double>(), e[1][1].get<double>()};
            cand.has_half_line = true;
        }
    }
    if (j.contains("diagnostics"))
        report.diagnostics = j["diagnostics"].get<std::vector<std::string>>();
    return report;
}

std::string truth_to_json(const TruthSidecar& sidecar) {
    json j;
    j["scene_id"] = sidecar.scene_id;
    j["ship_center"] = {sidecar.ship_center.x(), sidecar.ship_center.y()};
    j["seed"] = sidecar.seed;
    j["wakes"] = json::array();
    for (int k = 0; k < kWakeKindCount; ++k) {
        const TruthEntry& e = sidecar.truth.wakes[static_cast<size_t>(k)];
        json w;
        w["kind"] = wake_kind_name(static_cast<WakeKind>(k));
        w["visible"] = e.visible;
        if (e.visible) {
            w["r"] = e.r;
            w["theta_deg"] = e.theta_deg;
            w["side"] = e.side;
        }
        j["wakes"].push_back(w);
    }
    // Reference acquisition parameters for the full-physics simulations this
    // generator stands in for; metadata only.
    j["sim_reference"] = {{"wind_mps", 4.0}, {"ship_length_m", 50.0}, {"ship_velocity_mps", 9.0}};
    return j.dump(2) + "\n";
}

TruthSidecar truth_from_json(const std::string& text) {
    const json j = json::parse(text);
    TruthSidecar sidecar;
    sidecar.scene_id = j.value("scene_id", "");
    if (j.contains("ship_center"))
        sidecar.ship_center = {j["ship_center"][0].get<double>(),
                               j["ship_center"][1].get<double>()};
    sidecar.seed = j.value("seed", std::uint64_t{0});
    for (const auto& w : j.at("wakes")) {
        const WakeKind kind = wake_kind_from_name(w.at("kind").get<std::string>());
        TruthEntry& e = sidecar.truth.of(kind);
        e.visible = w.value("visible", false);
        e.r = w.value("r", 0.0);
        e.theta_deg = w.value("theta_deg", 0.0);
        e.side = w.value("side", 1);
    }
    return sidecar;
}

std::string metrics_to_json(const Metrics& metrics, const DetectionCounts& counts) {
    json j;
    j["counts"] = {{"tp", counts.tp}, {"tn", counts.tn}, {"fp", counts.fp}, {"fn", counts.fn}};
    j["sensitivity"] = metrics.sensitivity;
    j["specificity"] = metrics.specificity;
    j["accuracy_pct"] = metrics.accuracy_pct;
    j["f1"] = metrics.f1;
    j["lr_plus"] = number_or_inf(metrics.lr_plus);
    j["youden_j"] = metrics.youden_j;
    if (metrics.sensitivity_degenerate) j["sensitivity_degenerate"] = true;
    if (metrics.specificity_degenerate) j["specificity_degenerate"] = true;
    if (metrics.f1_degenerate) j["f1_degenerate"] = true;
    return j.dump(2) + "\n";
}

std::string trace_to_csv(const SolverResult& result) {
    std::ostringstream os;
    os << "iteration,rel_change,cost\n" << std::setprecision(17);
    for (size_t i = 0; i < result.cost_trace.size(); ++i) {
        os << i << ",";
        if (i > 0 && i - 1 < result.rel_trace.size())
            os << double_or_inf(result.rel_trace[i - 1]);
        os << "," << result.cost_trace[i] << "\n";
    }
    return os.str();
}

std::string roc_to_csv(const std::vector<RocPoint>& points) {
    std::ostringstream os;
    os << "margin,fpr,tpr\n" << std::setprecision(17);
    for (const auto& p : points)
        os << double_or_inf(p.margin) << "," << p.fpr << "," << p.tpr << "\n";
    return os.str();
}

std::string manifest_to_csv(const std::vector<SuiteScene>& scenes) {
    std::ostringstream os;
    os << "scene_id,turbulent,narrow_v1,narrow_v2,kelvin1,kelvin2\n";
    for (const auto& s : scenes) {
        os << s.id;
        for (int k = 0; k < kWakeKindCount; ++k)
            os << "," << (s.truth.wakes[static_cast<size_t>(k)].visible ? 1 : 0);
        os << "\n";
    }
    return os.str();
}

std::string metrics_table_csv(
    const std::vector<std::pair<std::string, std::pair<DetectionCounts, Metrics>>>& rows) {
    std::ostringstream os;
    os << "label,tp,tn,fp,fn,sensitivity,specificity,accuracy_pct,f1,lr_plus,youden_j\n"
       << std::setprecision(10);
    for (const auto& [label, data] : rows) {
        const auto& [c, m] = data;
        os << label << "," << c.tp << "," << c.tn << "," << c.fp << "," << c.fn << ","
           << m.sensitivity << "," << m.specificity << "," << m.accuracy_pct << "," << m.f1
           << "," << double_or_inf(m.lr_plus) << "," << m.youden_j << "\n";
    }
    return os.str();
}

std::string roc_svg(const std::vector<std::pair<std::string, std::vector<RocPoint>>>& curves) {
    const int w = 480, h = 480, pad = 50;
    const auto sx = [&](double fpr) { return pad + fpr * (w - 2 * pad); };
    const auto sy = [&](double tpr) { return h - pad - tpr * (h - 2 * pad); };
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf"};

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
       << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<line x1=\"" << pad << "\" y1=\"" << h - pad << "\" x2=\"" << w - pad << "\" y2=\""
       << h - pad << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad << "\" y2=\""
       << h - pad << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << w / 2 << "\" y=\"" << h - 12
       << "\" text-anchor=\"middle\" font-size=\"12\">false positive rate</text>\n";
    os << "<text x=\"14\" y=\"" << h / 2
       << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 14 " << h / 2
       << ")\">true positive rate</text>\n";

    int color = 0;
    int legend_y = pad;
    for (const auto& [label, points] : curves) {
        const char* stroke = palette[color % 7];
        os << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& p : points) os << sx(p.fpr) << "," << sy(p.tpr) << " ";
        os << "\"/>\n";
        for (const auto& p : points)
            os << "<circle cx=\"" << sx(p.fpr) << "\" cy=\"" << sy(p.tpr)
               << "\" r=\"2.5\" fill=\"" << stroke << "\"/>\n";
        os << "<text x=\"" << w - pad - 90 << "\" y=\"" << legend_y
           << "\" font-size=\"12\" fill=\"" << stroke << "\">" << label << "</text>\n";
        legend_y += 16;
        ++color;
    }
    os << "</svg>\n";
    return os.str();
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open file: " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace wakescan
