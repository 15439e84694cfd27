#pragma once

// Point packings f(c L(B) cap D): lattice enumeration over a domain box,
// seam-parameter selection from continued-fraction convergents, density and
// birth-time coloring, and nearest-neighbor packing validation.

#include <parastichy/lattice.hpp>
#include <parastichy/maps.hpp>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

namespace parastichy {

/// Generated points with a per-point color channel and the preimages they
/// came from (kept for re-coloring).
struct PointSet {
    enum class ColorKind { none, density, birth };

    int dim = 2;
    std::vector<Eigen::VectorXd> points;
    std::vector<double> color;
    ColorKind color_kind = ColorKind::none;
    std::vector<Eigen::VectorXd> preimages;
    nlohmann::json meta;

    std::size_t size() const { return points.size(); }
};

enum class SeamScheme { none, basis_i, basis_ii, basis_iii, logspiral };

inline std::string to_string(SeamScheme s) {
    switch (s) {
        case SeamScheme::none: return "none";
        case SeamScheme::basis_i: return "basis_i";
        case SeamScheme::basis_ii: return "basis_ii";
        case SeamScheme::basis_iii: return "basis_iii";
        case SeamScheme::logspiral: return "logspiral";
    }
    return "none";
}

/// Seam (domain-width) choice. For the disk bases the admissible widths come
/// from the convergents of -1/phibar, phi = 1/(1+gamma_1); for logspiral the
/// width must additionally keep X^2 - (4 pi / log s) X + 1 = 0 solvable,
/// i.e. 1 <= s < e^{2 pi}.
struct SeamChoice {
    SeamScheme scheme = SeamScheme::none;
    long n = -1;   // convergent index (when derived from one)
    double s = 0;  // domain width
};

/// Admissible seam parameter from the convergent index n. The disk formulas
/// use the trace phi + phibar, which defaults to 3; the caption value 47 at
/// n = 9 comes out of exactly that choice.
inline SeamChoice seam_parameter(SeamScheme scheme, long n, long trace = 3) {
    if (scheme == SeamScheme::none)
        throw std::invalid_argument("seam_parameter: scheme 'none' has no parameter");
    if (n < 0) throw std::invalid_argument("seam_parameter: index must be >= 0");
    if (scheme == SeamScheme::basis_i) {
        if (n < 1) throw std::invalid_argument("seam_parameter: basis_i needs a positive integer");
        return {scheme, n, double(n)};
    }

    // convergents of -1/phibar = (-3 + sqrt5)/2
    QuadraticIrrational phibar(3, 1, 2, 5);
    auto cf = cf_expand((-phibar).inverse());
    auto pq = convergents(cf, n);
    const Int p = pq[static_cast<std::size_t>(n) + 2].first;
    const Int q = pq[static_cast<std::size_t>(n) + 2].second;

    SeamChoice out;
    out.scheme = scheme;
    out.n = n;
    Int s;
    switch (scheme) {
        case SeamScheme::basis_ii: s = abs(2 * q + trace * p); break;
        case SeamScheme::basis_iii: s = abs(p); break;
        case SeamScheme::logspiral: s = abs(q + trace * p); break;
        default: throw std::logic_error("seam_parameter: unreachable");
    }
    out.s = s.get_d();
    if (scheme == SeamScheme::logspiral) {
        logspiral_beta_from_seam(out.s);  // throws for s >= e^{2 pi} or s <= 1
    }
    return out;
}

inline void validate_seam(const SeamChoice& seam, const std::string& map_kind) {
    switch (seam.scheme) {
        case SeamScheme::none:
            return;
        case SeamScheme::basis_i:
        case SeamScheme::basis_ii:
        case SeamScheme::basis_iii:
            if (map_kind != "vogel" && map_kind != "ball")
                throw std::invalid_argument("seam scheme " + to_string(seam.scheme) +
                                            " does not apply to map kind '" + map_kind + "'");
            if (seam.s < 1 || seam.s != std::floor(seam.s))
                throw std::invalid_argument("disk seam parameter must be a positive integer");
            return;
        case SeamScheme::logspiral:
            if (map_kind != "logspiral")
                throw std::invalid_argument("logspiral seam applies only to logspiral maps");
            if (seam.s < 1 || seam.s >= std::exp(2 * M_PI))
                throw std::invalid_argument("logspiral seam requires 1 <= s < e^{2 pi}");
            return;
    }
}

/// Exactly the points of c L(B) inside the box, found by enumerating integer
/// coefficients over the preimage box B^-1 (D / c) expanded by one.
inline std::vector<Eigen::VectorXd> enumerate_lattice_points(const BasisMatrix& B, const Box& box,
                                                             double scale = 1.0) {
    if (!box.bounded()) throw std::invalid_argument("enumerate_lattice_points: unbounded domain");
    if (scale <= 0) throw std::invalid_argument("enumerate_lattice_points: scale must be positive");
    const int n = B.n();
    if (box.dim() != n)
        throw std::invalid_argument("enumerate_lattice_points: dimension mismatch");

    Eigen::MatrixXd inv = B.mat.inverse();
    Eigen::VectorXd klo = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());
    Eigen::VectorXd khi = -klo;
    // hull of the 2^n preimage corners
    for (unsigned corner = 0; corner < (1u << n); ++corner) {
        Eigen::VectorXd c(n);
        for (int i = 0; i < n; ++i)
            c(i) = ((corner >> i) & 1u) ? box.hi(i) / scale : box.lo(i) / scale;
        Eigen::VectorXd k = inv * c;
        klo = klo.cwiseMin(k);
        khi = khi.cwiseMax(k);
    }

    std::vector<long> lo(n), hi(n);
    double count = 1;
    for (int i = 0; i < n; ++i) {
        lo[i] = static_cast<long>(std::floor(klo(i))) - 1;
        hi[i] = static_cast<long>(std::ceil(khi(i))) + 1;
        count *= double(hi[i] - lo[i] + 1);
    }
    if (count > 2e8)
        throw std::runtime_error("enumerate_lattice_points: coefficient box too large");

    std::vector<Eigen::VectorXd> out;
    std::vector<long> k(n, 0);
    std::function<void(int)> rec = [&](int level) {
        if (level == n) {
            Eigen::VectorXd kd(n);
            for (int i = 0; i < n; ++i) kd(i) = double(k[i]);
            Eigen::VectorXd x = scale * (B.mat * kd);
            if (box.contains(x)) out.push_back(x);
            return;
        }
        for (long v = lo[level]; v <= hi[level]; ++v) {
            k[level] = v;
            rec(level + 1);
        }
    };
    rec(0);
    return out;
}

/// Applies the map to every lattice point of c L(B) inside the map's domain.
inline PointSet generate_packing(const LatticeMap& map, const BasisMatrix& B, double scale = 1.0,
                                 const SeamChoice& seam = {}) {
    if (map.n != B.n())
        throw std::invalid_argument("generate_packing: map/basis dimension mismatch");
    validate_seam(seam, map.kind);

    PointSet ps;
    ps.dim = map.N;
    ps.preimages = enumerate_lattice_points(B, map.domain, scale);
    ps.points.reserve(ps.preimages.size());
    for (const auto& x : ps.preimages) ps.points.push_back(map.eval(x));
    ps.color.assign(ps.points.size(), 0.0);
    ps.meta = {{"map", map.kind},
               {"basis", B.provenance},
               {"scale", scale},
               {"seam_scheme", to_string(seam.scheme)},
               {"seam_s", seam.s},
               {"birth_axis", map.birth_axis},
               // conformal images have wildly varying spacing; draw those
               // with per-point radii instead of the global minimum
               {"radius_mode", map.kind == "doyle" ? "nearest" : "global"},
               {"color", "none"}};
    return ps;
}

/// Local packing density around f(x): the density of the lattice with basis
/// Df(x) B.
inline double local_density(const LatticeMap& map, const BasisMatrix& B,
                            const Eigen::VectorXd& x) {
    Eigen::MatrixXd J = map.jacobian(x);
    Eigen::MatrixXd local = J * B.mat;  // N x n
    Eigen::MatrixXd G = local.transpose() * local;
    if (std::abs(G.determinant()) < 1e-300)
        throw std::domain_error("local_density: Jacobian singular at the point");
    return packing_density_gram(G);
}

/// Fills the color channel: density evaluates the local packing density at
/// every preimage; birth copies the preimage coordinate recorded as the
/// map's time axis.
inline void color(PointSet& ps, PointSet::ColorKind kind, const LatticeMap* map = nullptr,
                  const BasisMatrix* B = nullptr) {
    switch (kind) {
        case PointSet::ColorKind::none:
            ps.color.assign(ps.size(), 0.0);
            break;
        case PointSet::ColorKind::birth: {
            int axis = ps.meta.value("birth_axis", 0);
            for (std::size_t i = 0; i < ps.size(); ++i) ps.color[i] = ps.preimages[i](axis);
            break;
        }
        case PointSet::ColorKind::density: {
            if (!map || !B)
                throw std::invalid_argument("color: density coloring needs the map and basis");
            for (std::size_t i = 0; i < ps.size(); ++i)
                ps.color[i] = local_density(*map, *B, ps.preimages[i]);
            break;
        }
        default:
            throw std::invalid_argument("color: unknown kind");
    }
    ps.color_kind = kind;
    ps.meta["color"] = kind == PointSet::ColorKind::none
                           ? "none"
                           : (kind == PointSet::ColorKind::birth ? "birth" : "density");
}

struct MinPairDistance {
    double value = 0;
    bool valid = false;  // false when a duplicate point collapses it to zero
};

namespace detail {

struct CellKey {
    long long v[3];
    bool operator==(const CellKey& o) const {
        return v[0] == o.v[0] && v[1] == o.v[1] && v[2] == o.v[2];
    }
};
struct CellKeyHash {
    std::size_t operator()(const CellKey& k) const {
        std::uint64_t h = 1469598103934665603ull;
        for (long long x : k.v) {
            h ^= static_cast<std::uint64_t>(x);
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

}  // namespace detail

/// Exact minimum over all pairs, grid-bucketed for near-linear expected time.
inline MinPairDistance min_pairwise_distance(const std::vector<Eigen::VectorXd>& pts) {
    if (pts.size() < 2)
        throw std::invalid_argument("min_pairwise_distance: need at least two points");
    const int dim = static_cast<int>(pts.front().size());

    Eigen::VectorXd lo = pts.front(), hi = pts.front();
    for (const auto& p : pts) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    double diag = (hi - lo).norm();
    if (diag == 0) return {0.0, false};

    // initial cell size from the density of an even spread
    double cell = diag / std::max(1.0, std::pow(double(pts.size()), 1.0 / dim));
    double best = std::numeric_limits<double>::infinity();

    for (int attempt = 0; attempt < 8; ++attempt) {
        std::unordered_map<detail::CellKey, std::vector<int>, detail::CellKeyHash> grid;
        auto key = [&](const Eigen::VectorXd& p) {
            detail::CellKey k{{0, 0, 0}};
            for (int i = 0; i < dim; ++i)
                k.v[i] = static_cast<long long>(std::floor((p(i) - lo(i)) / cell));
            return k;
        };
        for (int i = 0; i < static_cast<int>(pts.size()); ++i)
            grid[key(pts[i])].push_back(i);

        best = std::numeric_limits<double>::infinity();
        long long off[3] = {0, 0, 0};
        for (const auto& [k, members] : grid) {
            // neighbor cells with lexicographically non-smaller keys cover
            // every pair once
            std::vector<detail::CellKey> neigh;
            int span = 1;
            std::function<void(int)> walk = [&](int axis) {
                if (axis == dim) {
                    detail::CellKey nk = k;
                    for (int i = 0; i < dim; ++i) nk.v[i] += off[i];
                    neigh.push_back(nk);
                    return;
                }
                for (off[axis] = -span; off[axis] <= span; ++off[axis]) walk(axis + 1);
            };
            walk(0);
            for (const auto& nk : neigh) {
                auto it = grid.find(nk);
                if (it == grid.end()) continue;
                for (int a : members)
                    for (int b : it->second) {
                        if (b <= a) continue;
                        best = std::min(best, (pts[a] - pts[b]).squaredNorm());
                    }
            }
        }
        best = std::sqrt(best);
        if (best <= cell || best == 0) break;  // grid fine enough to be exact
        cell = best * 1.001;                   // rare: respread with larger cells
    }
    return {best, best > 0};
}

inline MinPairDistance min_pairwise_distance(const PointSet& ps) {
    return min_pairwise_distance(ps.points);
}

/// Nearest-neighbor distance of each query point over the whole cloud,
/// grid-bucketed with ring expansion.
inline std::vector<double> nn_distances(const std::vector<Eigen::VectorXd>& pts,
                                        const std::vector<int>& queries) {
    if (pts.size() < 2) throw std::invalid_argument("nn_distances: need at least two points");
    const int dim = static_cast<int>(pts.front().size());
    Eigen::VectorXd lo = pts.front(), hi = pts.front();
    for (const auto& p : pts) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    double diag = (hi - lo).norm();
    double cell = std::max(1e-300, diag / std::max(1.0, std::pow(double(pts.size()), 1.0 / dim)));

    std::unordered_map<detail::CellKey, std::vector<int>, detail::CellKeyHash> grid;
    auto key_of = [&](const Eigen::VectorXd& p) {
        detail::CellKey k{{0, 0, 0}};
        for (int i = 0; i < dim; ++i)
            k.v[i] = static_cast<long long>(std::floor((p(i) - lo(i)) / cell));
        return k;
    };
    for (int i = 0; i < static_cast<int>(pts.size()); ++i) grid[key_of(pts[i])].push_back(i);

    std::vector<double> out;
    out.reserve(queries.size());
    for (int qi : queries) {
        const auto& p = pts[qi];
        detail::CellKey base = key_of(p);
        double best = std::numeric_limits<double>::infinity();
        for (int ring = 1; ring < 1 << 20; ++ring) {
            long long off[3] = {0, 0, 0};
            std::function<void(int)> walk = [&](int axis) {
                if (axis == dim) {
                    bool on_shell = false;
                    for (int i = 0; i < dim; ++i)
                        if (std::llabs(off[i]) == ring) on_shell = true;
                    if (!on_shell && ring > 1) return;  // inner cells already visited
                    detail::CellKey nk = base;
                    for (int i = 0; i < dim; ++i) nk.v[i] += off[i];
                    auto it = grid.find(nk);
                    if (it == grid.end()) return;
                    for (int b : it->second) {
                        if (b == qi) continue;
                        best = std::min(best, (p - pts[b]).squaredNorm());
                    }
                    return;
                }
                long long span = (ring == 1) ? 1 : ring;
                for (off[axis] = -span; off[axis] <= span; ++off[axis]) walk(axis + 1);
            };
            walk(0);
            // cells beyond Chebyshev radius `ring` hold points at distance
            // >= ring * cell, so the current best cannot be beaten
            if (best <= double(ring) * ring * cell * cell) break;
        }
        out.push_back(std::sqrt(best));
    }
    return out;
}

/// Seam quality of a disk packing over the preimage birth times
/// [y_lo, y_hi]. The seam is the positive x-ray of the image; points within
/// band_spacings interior medians of the ray form the seam band. The
/// statistic is the nearest-neighbor disk area of the worst seam-band point
/// relative to the interior median disk area: a non-admissible width forces
/// crowding somewhere along the seam and collapses that area, while medians
/// barely move (the seam band is a vanishing fraction of the annulus).
struct SeamGapStats {
    double interior_median_nn = 0;
    double seam_min_nn = 0;
    double deviation = 0;  // |(seam_min / interior_median)^2 - 1|
    int seam_points = 0;
};

inline SeamGapStats disk_seam_gap(const PointSet& ps, double y_lo, double y_hi,
                                  double band_spacings = 2.0) {
    if (ps.dim != 2) throw std::invalid_argument("disk_seam_gap: 2D point sets only");

    std::vector<int> annulus;
    for (int i = 0; i < static_cast<int>(ps.size()); ++i) {
        double y = ps.preimages[i](1);
        if (y >= y_lo && y <= y_hi) annulus.push_back(i);
    }
    if (annulus.size() < 32) throw std::invalid_argument("disk_seam_gap: annulus too thin");

    auto nn = nn_distances(ps.points, annulus);
    auto ray_distance = [](const Eigen::VectorXd& p) {
        return p(0) > 0 ? std::abs(p(1)) : p.norm();
    };

    std::vector<double> sorted_nn = nn;
    std::nth_element(sorted_nn.begin(), sorted_nn.begin() + sorted_nn.size() / 2,
                     sorted_nn.end());
    const double rough_median = sorted_nn[sorted_nn.size() / 2];
    const double band = band_spacings * rough_median;

    double seam_min = std::numeric_limits<double>::infinity();
    int seam_points = 0;
    std::vector<double> interior_nn;
    for (std::size_t j = 0; j < annulus.size(); ++j) {
        if (ray_distance(ps.points[annulus[j]]) <= band) {
            seam_min = std::min(seam_min, nn[j]);
            ++seam_points;
        } else {
            interior_nn.push_back(nn[j]);
        }
    }
    if (interior_nn.empty() || seam_points < 8)
        throw std::invalid_argument("disk_seam_gap: seam band or interior is empty");

    std::nth_element(interior_nn.begin(), interior_nn.begin() + interior_nn.size() / 2,
                     interior_nn.end());
    SeamGapStats st;
    st.interior_median_nn = interior_nn[interior_nn.size() / 2];
    st.seam_min_nn = seam_min;
    double ratio = seam_min / st.interior_median_nn;
    st.deviation = std::abs(ratio * ratio - 1.0);
    st.seam_points = seam_points;
    return st;
}

}  // namespace parastichy
