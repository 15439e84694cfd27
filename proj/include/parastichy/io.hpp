#pragma once

// Bit-stable exporters for point sets (CSV / JSON / SVG) and the
// verification-report structure emitted by the CLI.

#include <parastichy/packer.hpp>

#include <nlohmann/json.hpp>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace parastichy {

namespace detail {

// 17 significant digits round-trips any double and is byte-stable across
// runs (C locale formatting).
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// viridis anchors (every 16th entry of the standard 256-color table),
// linearly interpolated to the full palette.
inline const std::array<std::array<int, 3>, 17>& viridis_anchors() {
    static const std::array<std::array<int, 3>, 17> a = {{{68, 1, 84},
                                                          {72, 26, 108},
                                                          {71, 47, 125},
                                                          {65, 68, 135},
                                                          {57, 86, 140},
                                                          {49, 104, 142},
                                                          {42, 120, 142},
                                                          {35, 136, 142},
                                                          {31, 152, 139},
                                                          {34, 168, 132},
                                                          {53, 183, 121},
                                                          {84, 197, 104},
                                                          {122, 209, 81},
                                                          {165, 219, 54},
                                                          {210, 226, 27},
                                                          {253, 231, 37},
                                                          {253, 231, 37}}};
    return a;
}

inline std::array<int, 3> viridis256(int idx) {
    idx = std::clamp(idx, 0, 255);
    int seg = idx / 16, off = idx % 16;
    const auto& a = viridis_anchors();
    std::array<int, 3> c{};
    for (int k = 0; k < 3; ++k)
        c[k] = a[seg][k] + (a[seg + 1][k] - a[seg][k]) * off / 16;
    return c;
}

}  // namespace detail

inline void export_csv(const PointSet& ps, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("export_csv: cannot open " + path);
    out << (ps.dim == 3 ? "x,y,z,color\n" : "x,y,color\n");
    for (std::size_t i = 0; i < ps.size(); ++i) {
        for (int k = 0; k < ps.dim; ++k) out << detail::fmt17(ps.points[i](k)) << ',';
        out << detail::fmt17(ps.color[i]) << '\n';
    }
    if (!out) throw std::runtime_error("export_csv: write failed for " + path);
}

inline nlohmann::json pointset_to_json(const PointSet& ps) {
    nlohmann::json j;
    j["meta"] = ps.meta;
    j["meta"]["dim"] = ps.dim;
    auto points = nlohmann::json::array();
    for (const auto& p : ps.points) {
        auto row = nlohmann::json::array();
        for (int k = 0; k < ps.dim; ++k) row.push_back(p(k));
        points.push_back(std::move(row));
    }
    j["points"] = std::move(points);
    j["color"] = ps.color;
    return j;
}

inline void export_json(const PointSet& ps, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("export_json: cannot open " + path);
    out << pointset_to_json(ps).dump(2) << '\n';
    if (!out) throw std::runtime_error("export_json: write failed for " + path);
}

/// Rebuilds a PointSet from an exported JSON file (preimages are not part
/// of the format, so re-coloring needs regeneration).
inline PointSet import_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("import_json: cannot open " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    PointSet ps;
    ps.meta = j.at("meta");
    ps.dim = ps.meta.at("dim").get<int>();
    for (const auto& row : j.at("points")) {
        Eigen::VectorXd p(ps.dim);
        for (int k = 0; k < ps.dim; ++k) p(k) = row.at(k).get<double>();
        ps.points.push_back(std::move(p));
    }
    ps.color = j.at("color").get<std::vector<double>>();
    std::string kind = ps.meta.value("color", "none");
    ps.color_kind = kind == "birth" ? PointSet::ColorKind::birth
                    : kind == "density" ? PointSet::ColorKind::density
                                        : PointSet::ColorKind::none;
    if (ps.color.size() != ps.points.size())
        throw std::runtime_error("import_json: color / point count mismatch");
    return ps;
}

/// One circle per point, radius = half the minimum pairwise distance,
/// viewBox fitted with a 5% margin. Density channels are clipped to
/// [0.3, 0.95] before palette lookup so figures are comparable across maps.
/// Point sets tagged radius_mode = "nearest" (the conformal exponential)
/// draw each circle with half its own nearest-neighbor distance instead.
inline void export_svg(const PointSet& ps, const std::string& path) {
    if (ps.dim != 2) throw std::invalid_argument("export_svg: 2D point sets only");
    if (ps.size() == 0) throw std::invalid_argument("export_svg: empty point set");

    const bool per_point = ps.meta.value("radius_mode", "global") == std::string("nearest");
    std::vector<double> radii;
    double radius = 0.5;
    if (ps.size() >= 2) {
        if (per_point) {
            std::vector<int> all(ps.size());
            for (std::size_t i = 0; i < ps.size(); ++i) all[i] = static_cast<int>(i);
            radii = nn_distances(ps.points, all);
            for (double& r : radii) r /= 2;
        } else {
            radius = min_pairwise_distance(ps).value / 2;
        }
    }
    if (!per_point && radius <= 0)
        throw std::invalid_argument("export_svg: duplicate points give zero radius");

    Eigen::Vector2d lo = ps.points.front(), hi = ps.points.front();
    for (const auto& p : ps.points) {
        lo = lo.cwiseMin(Eigen::Vector2d(p));
        hi = hi.cwiseMax(Eigen::Vector2d(p));
    }
    double rmax = per_point && !radii.empty() ? *std::max_element(radii.begin(), radii.end())
                                              : radius;
    lo.array() -= rmax;
    hi.array() += rmax;
    Eigen::Vector2d span = hi - lo;
    lo -= 0.05 * span;
    span *= 1.10;

    double cmin = 0, cmax = 1;
    if (ps.color_kind == PointSet::ColorKind::density) {
        cmin = 0.30;
        cmax = 0.95;
    } else if (!ps.color.empty()) {
        cmin = *std::min_element(ps.color.begin(), ps.color.end());
        cmax = *std::max_element(ps.color.begin(), ps.color.end());
        if (cmax <= cmin) cmax = cmin + 1;
    }

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << detail::fmt17(lo(0)) << ' '
        << detail::fmt17(lo(1)) << ' ' << detail::fmt17(span(0)) << ' ' << detail::fmt17(span(1))
        << "\">\n";
    for (std::size_t i = 0; i < ps.size(); ++i) {
        double t = (ps.color[i] - cmin) / (cmax - cmin);
        auto rgb = detail::viridis256(static_cast<int>(std::clamp(t, 0.0, 1.0) * 255.0));
        double r = per_point && !radii.empty() ? radii[i] : radius;
        svg << "  <circle cx=\"" << detail::fmt17(ps.points[i](0)) << "\" cy=\""
            << detail::fmt17(ps.points[i](1)) << "\" r=\"" << detail::fmt17(r)
            << "\" fill=\"rgb(" << rgb[0] << ',' << rgb[1] << ',' << rgb[2] << ")\"/>\n";
    }
    svg << "</svg>\n";

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("export_svg: cannot open " + path);
    out << svg.str();
    if (!out) throw std::runtime_error("export_svg: write failed for " + path);
}

inline void export_points(const PointSet& ps, const std::string& format,
                          const std::string& path) {
    if (format == "csv") return export_csv(ps, path);
    if (format == "json") return export_json(ps, path);
    if (format == "svg") return export_svg(ps, path);
    throw std::invalid_argument("unsupported format '" + format + "' (csv, json, svg)");
}

// ---------------------------------------------------------------------------
// Verification reports
// ---------------------------------------------------------------------------

struct VerificationCheck {
    std::string name;
    double measured = 0;
    double tolerance = 0;
    bool pass = false;
};

struct VerificationReport {
    std::string suite;
    std::vector<VerificationCheck> checks;

    bool pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }

    /// measured <= tolerance
    void check_bound(const std::string& name, double measured, double tolerance) {
        checks.push_back({name, measured, tolerance, measured <= tolerance});
    }
    /// |measured - expected| <= tolerance, recorded as the deviation
    void check_close(const std::string& name, double measured, double expected,
                     double tolerance) {
        double dev = std::abs(measured - expected);
        checks.push_back({name, dev, tolerance, dev <= tolerance});
    }
    void check_flag(const std::string& name, bool ok) {
        checks.push_back({name, ok ? 1.0 : 0.0, 1.0, ok});
    }
};

inline nlohmann::json report_to_json(const VerificationReport& r) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"name", c.name},
                          {"measured", c.measured},
                          {"tolerance", c.tolerance},
                          {"pass", c.pass}});
    return {{"suite", r.suite}, {"checks", checks}, {"pass", r.pass()}};
}

}  // namespace parastichy
