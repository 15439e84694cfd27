#pragma once

// Volume-preserving diagonal-metric maps: the Vogel disk, logarithmic-spiral
// plane, 3D ball, inviscid-Burgers characteristics family, and the conformal
// Doyle exponential, plus finite-difference verification of the governing
// PDE system.

#include <parastichy/exact.hpp>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace parastichy {

/// Axis-aligned domain box. Faces are half-open [lo, hi) by default;
/// lo_open excludes the lower face (coordinates where the map is singular),
/// hi_closed includes the upper face (seam conventions).
struct Box {
    Eigen::VectorXd lo, hi;
    std::vector<bool> lo_open;
    std::vector<bool> hi_closed;

    Box() = default;
    Box(Eigen::VectorXd l, Eigen::VectorXd h) : lo(std::move(l)), hi(std::move(h)) {
        if (lo.size() != hi.size()) throw std::invalid_argument("Box: dimension mismatch");
        lo_open.assign(lo.size(), false);
        hi_closed.assign(lo.size(), false);
    }

    int dim() const { return static_cast<int>(lo.size()); }
    double width(int i) const { return hi(i) - lo(i); }

    bool bounded() const {
        for (int i = 0; i < dim(); ++i)
            if (!std::isfinite(lo(i)) || !std::isfinite(hi(i)) || lo(i) >= hi(i)) return false;
        return dim() > 0;
    }

    bool contains(const Eigen::VectorXd& x) const {
        for (int i = 0; i < dim(); ++i) {
            if (lo_open[i] ? x(i) <= lo(i) : x(i) < lo(i)) return false;
            if (hi_closed[i] ? x(i) > hi(i) : x(i) >= hi(i)) return false;
        }
        return true;
    }

    Eigen::VectorXd sample_interior(std::mt19937_64& rng, double margin = 0.05) const {
        Eigen::VectorXd x(dim());
        for (int i = 0; i < dim(); ++i) {
            std::uniform_real_distribution<double> u(lo(i) + margin * width(i),
                                                     hi(i) - margin * width(i));
            x(i) = u(rng);
        }
        return x;
    }
};

namespace detail {

template <typename F>
Eigen::MatrixXd fd_jacobian(const F& f, const Eigen::VectorXd& x, double rel_step) {
    Eigen::VectorXd fx = f(x);
    Eigen::MatrixXd J(fx.size(), x.size());
    Eigen::VectorXd xp = x, xm = x;
    for (int j = 0; j < x.size(); ++j) {
        double h = rel_step * std::max(std::abs(x(j)), 1.0);
        xp(j) = x(j) + h;
        xm(j) = x(j) - h;
        J.col(j) = (f(xp) - f(xm)) / (2 * h);
        xp(j) = x(j);
        xm(j) = x(j);
    }
    return J;
}

}  // namespace detail

/// A map f: D -> R^N with evaluator, Jacobian (closed form when available,
/// finite differences otherwise), domain box, and the declared constant c of
/// the constant-determinant condition. volume_preserving is false for kinds
/// that only satisfy the diagonality condition (Doyle).
struct LatticeMap {
    int n = 0, N = 0;
    Box domain;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> eval;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> jac;
    double c = 1.0;
    std::string kind = "custom";
    bool volume_preserving = true;
    int birth_axis = 0;
    double fd_step = 1e-5;
    nlohmann::json params;

    Eigen::VectorXd operator()(const Eigen::VectorXd& x) const { return eval(x); }

    Eigen::MatrixXd jacobian(const Eigen::VectorXd& x, bool force_fd = false) const {
        if (jac && !force_fd) return jac(x);
        return detail::fd_jacobian(eval, x, fd_step);
    }
};

/// Sampled verification of the diagonality and constant-determinant
/// conditions via finite-difference Jacobians.
struct MapConditionReport {
    double max_offdiag_rel = 0;  // max |offdiag(Df^T Df)| / trace
    double max_det_dev_rel = 0;  // max |sqrt(det) - c| / c
    double det_spread_rel = 0;   // (max - min) sqrt(det) / mean, over samples
    double max_aniso_rel = 0;    // 2D only: |M_11 - M_22| / trace
    int samples = 0;

    bool diagonal_ok(double tol = 1e-6) const { return max_offdiag_rel <= tol; }
    bool det_ok(double tol = 1e-5) const { return max_det_dev_rel <= tol; }
    bool conformal_ok(double tol = 1e-6) const {
        return max_offdiag_rel <= tol && max_aniso_rel <= tol;
    }
};

inline MapConditionReport check_map_conditions(const LatticeMap& map, int npoints = 1000,
                                               unsigned long seed = 0, double margin = 0.05) {
    std::mt19937_64 rng(seed);
    MapConditionReport rep;
    rep.samples = npoints;
    double det_min = std::numeric_limits<double>::infinity(), det_max = 0, det_sum = 0;
    for (int it = 0; it < npoints; ++it) {
        Eigen::VectorXd x = map.domain.sample_interior(rng, margin);
        Eigen::MatrixXd J = map.jacobian(x, /*force_fd=*/true);
        Eigen::MatrixXd M = J.transpose() * J;
        double tr = M.trace();
        for (int i = 0; i < M.rows(); ++i)
            for (int j = 0; j < M.cols(); ++j)
                if (i != j) rep.max_offdiag_rel = std::max(rep.max_offdiag_rel, std::abs(M(i, j)) / tr);
        if (map.n == 2)
            rep.max_aniso_rel = std::max(rep.max_aniso_rel, std::abs(M(0, 0) - M(1, 1)) / tr);
        double sd = std::sqrt(std::max(0.0, M.determinant()));
        det_min = std::min(det_min, sd);
        det_max = std::max(det_max, sd);
        det_sum += sd;
        if (map.volume_preserving)
            rep.max_det_dev_rel = std::max(rep.max_det_dev_rel, std::abs(sd - map.c) / map.c);
    }
    rep.det_spread_rel = (det_max - det_min) / (det_sum / npoints);
    return rep;
}

// ---------------------------------------------------------------------------
// Disk: f(x, y) = sqrt(y) (cos(beta x / 2), sin(beta x / 2))
// ---------------------------------------------------------------------------

inline LatticeMap vogel_map(double beta, double M) {
    if (beta <= 0 || M <= 0) throw std::invalid_argument("vogel_map: beta, M must be positive");
    LatticeMap m;
    m.n = m.N = 2;
    m.kind = "vogel";
    m.c = beta / 4.0;
    m.birth_axis = 1;
    m.params = {{"beta", beta}, {"M", M}};
    m.domain = Box(Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(4 * M_PI / beta, M));
    m.domain.lo_open[1] = true;  // y > 0
    m.eval = [beta](const Eigen::VectorXd& p) -> Eigen::VectorXd {
        if (p(1) <= 0) throw std::domain_error("vogel_map: y must be positive");
        const double ang = 0.5 * beta * p(0);
        const double r = std::sqrt(p(1));
        return Eigen::Vector2d(r * std::cos(ang), r * std::sin(ang));
    };
    m.jac = [beta](const Eigen::VectorXd& p) -> Eigen::MatrixXd {
        if (p(1) <= 0) throw std::domain_error("vogel_map: y must be positive");
        const double ang = 0.5 * beta * p(0);
        const double r = std::sqrt(p(1));
        Eigen::Matrix2d J;
        J << -r * (beta / 2) * std::sin(ang), std::cos(ang) / (2 * r),
             r * (beta / 2) * std::cos(ang), std::sin(ang) / (2 * r);
        return J;
    };
    return m;
}

// ---------------------------------------------------------------------------
// Plane with logarithmic spirals:
// f(x, y) = sqrt(x y) (cos t, sin t),  t = -(1/(2 beta)) log x + (beta/2) log y
// ---------------------------------------------------------------------------

inline LatticeMap logspiral_map(double beta, double M) {
    if (beta <= 0 || M <= 0)
        throw std::invalid_argument("logspiral_map: beta, M must be positive");
    LatticeMap m;
    m.n = m.N = 2;
    m.kind = "logspiral";
    m.c = (beta + 1.0 / beta) / 4.0;
    m.birth_axis = 1;
    m.params = {{"beta", beta}, {"M", M}};
    const double xmax = std::exp(4 * M_PI / (beta + 1.0 / beta));
    m.domain = Box(Eigen::Vector2d(1.0, 0.0), Eigen::Vector2d(xmax, M));
    m.domain.lo_open[0] = true;   // log x > 0
    m.domain.lo_open[1] = true;   // y > 0
    m.domain.hi_closed[0] = true; // log x <= 4 pi / (beta + 1/beta)
    m.domain.hi_closed[1] = true; // y <= M
    auto theta = [beta](double x, double y) {
        return -std::log(std::abs(x)) / (2 * beta) + (beta / 2) * std::log(std::abs(y));
    };
    m.eval = [theta](const Eigen::VectorXd& p) -> Eigen::VectorXd {
        if (p(0) <= 0 || p(1) <= 0)
            throw std::domain_error("logspiral_map: x, y must be positive");
        const double t = theta(p(0), p(1));
        const double r = std::sqrt(p(0) * p(1));
        return Eigen::Vector2d(r * std::cos(t), r * std::sin(t));
    };
    m.jac = [theta, beta](const Eigen::VectorXd& p) -> Eigen::MatrixXd {
        if (p(0) <= 0 || p(1) <= 0)
            throw std::domain_error("logspiral_map: x, y must be positive");
        const double x = p(0), y = p(1);
        const double t = theta(x, y);
        const double r = std::sqrt(x * y);
        const double ct = std::cos(t), st = std::sin(t);
        const double tx = -1.0 / (2 * beta * x), ty = beta / (2 * y);
        Eigen::Matrix2d J;
        J(0, 0) = 0.5 * std::sqrt(y / x) * ct - r * st * tx;
        J(1, 0) = 0.5 * std::sqrt(y / x) * st + r * ct * tx;
        J(0, 1) = 0.5 * std::sqrt(x / y) * ct - r * st * ty;
        J(1, 1) = 0.5 * std::sqrt(x / y) * st + r * ct * ty;
        return J;
    };
    return m;
}

/// beta from the seam width s via X^2 - (4 pi / log s) X + 1 = 0 (larger root).
inline double logspiral_beta_from_seam(double s) {
    if (s >= std::exp(2 * M_PI))
        throw std::domain_error("logspiral seam: s must be < e^{2 pi} ~ 535.5");
    if (s <= 1.0) throw std::domain_error("logspiral seam: s must exceed 1");
    const double b = 4 * M_PI / std::log(s);
    const double disc = b * b - 4;
    if (disc < 0) throw std::domain_error("logspiral seam: no real root beta");
    return (b + std::sqrt(disc)) / 2;
}

// ---------------------------------------------------------------------------
// Ball: f(x) = x3^{1/3} (x2, rho sin(2 pi x1/s), rho cos(2 pi x1/s)),
// rho = sqrt(r^2 - x2^2)
// ---------------------------------------------------------------------------

inline LatticeMap ball_map(double r, double s, double R) {
    if (r <= 0 || s <= 0 || R <= 0)
        throw std::invalid_argument("ball_map: r, s, R must be positive");
    LatticeMap m;
    m.n = m.N = 3;
    m.kind = "ball";
    m.c = 2 * M_PI * r * r / (3 * s);
    m.birth_axis = 2;
    m.params = {{"r", r}, {"s", s}, {"R", R}};
    m.domain = Box(Eigen::Vector3d(0.0, -r, 0.0), Eigen::Vector3d(s, r, R));
    m.domain.lo_open[1] = true;  // |x2| < r
    m.domain.lo_open[2] = true;  // x3 > 0
    m.eval = [r, s](const Eigen::VectorXd& p) -> Eigen::VectorXd {
        if (std::abs(p(1)) >= r) throw std::domain_error("ball_map: |x2| must be < r");
        if (p(2) <= 0) throw std::domain_error("ball_map: x3 must be positive");
        const double rho = std::sqrt(r * r - p(1) * p(1));
        const double ang = 2 * M_PI * p(0) / s;
        const double t = std::cbrt(p(2));
        return Eigen::Vector3d(t * p(1), t * rho * std::sin(ang), t * rho * std::cos(ang));
    };
    m.jac = [r, s](const Eigen::VectorXd& p) -> Eigen::MatrixXd {
        if (std::abs(p(1)) >= r) throw std::domain_error("ball_map: |x2| must be < r");
        if (p(2) <= 0) throw std::domain_error("ball_map: x3 must be positive");
        const double rho = std::sqrt(r * r - p(1) * p(1));
        const double ang = 2 * M_PI * p(0) / s;
        const double t = std::cbrt(p(2));
        const double dt = 1.0 / (3 * std::cbrt(p(2)) * std::cbrt(p(2)));
        const double w = 2 * M_PI / s;
        const double sa = std::sin(ang), ca = std::cos(ang);
        Eigen::Matrix3d J;
        J(0, 0) = 0;                      J(0, 1) = t;                        J(0, 2) = dt * p(1);
        J(1, 0) = t * rho * w * ca;       J(1, 1) = -t * p(1) / rho * sa;     J(1, 2) = dt * rho * sa;
        J(2, 0) = -t * rho * w * sa;      J(2, 1) = -t * p(1) / rho * ca;     J(2, 2) = dt * rho * ca;
        return J;
    };
    return m;
}

// ---------------------------------------------------------------------------
// Inviscid-Burgers family
// ---------------------------------------------------------------------------

/// Initial profile eps(t, 0) = h(t) on [t0, t1]; h > 0 and h' >= 0 keep the
/// characteristics t + h(t) y = x from crossing for y > 0.
struct BurgersProfile {
    std::function<double(double)> h;
    std::function<double(double)> dh;
    double t0 = 1.0, t1 = 10.0;
    std::string tag = "custom";

    static BurgersProfile linear(double t0 = 1.0, double t1 = std::exp(2 * M_PI)) {
        BurgersProfile p;
        p.h = [](double t) { return t; };
        p.dh = [](double) { return 1.0; };
        p.t0 = t0;
        p.t1 = t1;
        p.tag = "linear";
        return p;
    }
};

namespace detail {

// Characteristic root: t + h(t) y = x on [t0, t1] (monotone in t).
inline double solve_characteristic(const BurgersProfile& prof, double x, double y) {
    auto psi = [&](double t) { return t + prof.h(t) * y - x; };
    double a = prof.t0, b = prof.t1;
    double fa = psi(a), fb = psi(b);
    if (fa > 0 || fb < 0)
        throw std::domain_error("burgers: characteristic root not bracketed in the profile interval");
    for (int it = 0; it < 40; ++it) {
        double mid = 0.5 * (a + b);
        if (psi(mid) <= 0) a = mid;
        else b = mid;
    }
    double t = 0.5 * (a + b);
    for (int it = 0; it < 4; ++it) {
        double deriv = 1.0 + prof.dh(t) * y;
        double step = psi(t) / deriv;
        double tn = t - step;
        if (tn < prof.t0 || tn > prof.t1) break;
        t = tn;
    }
    return t;
}

// Cumulative integral table with C^1 Hermite interpolation; integrand values
// are stored at the nodes so finite-difference probes of the map stay smooth.
class PrefixIntegral {
public:
    PrefixIntegral() = default;
    PrefixIntegral(const std::function<double(double)>& g, double a, double b, int cells)
        : a_(a), h_((b - a) / cells) {
        gv_.resize(cells + 1);
        F_.resize(cells + 1);
        for (int i = 0; i <= cells; ++i) gv_[i] = g(a_ + h_ * i);
        F_[0] = 0;
        for (int i = 0; i < cells; ++i) {
            double mid = g(a_ + h_ * (i + 0.5));
            F_[i + 1] = F_[i] + h_ / 6.0 * (gv_[i] + 4 * mid + gv_[i + 1]);
        }
    }

    double operator()(double t) const {
        double u = (t - a_) / h_;
        int i = std::clamp(static_cast<int>(std::floor(u)), 0, static_cast<int>(F_.size()) - 2);
        double s = u - i;
        double F0 = F_[i], F1 = F_[i + 1];
        double d0 = gv_[i] * h_, d1 = gv_[i + 1] * h_;
        double s2 = s * s, s3 = s2 * s;
        return (2 * s3 - 3 * s2 + 1) * F0 + (s3 - 2 * s2 + s) * d0 +
               (-2 * s3 + 3 * s2) * F1 + (s3 - s2) * d1;
    }

private:
    double a_ = 0, h_ = 1;
    std::vector<double> gv_, F_;
};

}  // namespace detail

/// Map built from a Burgers solution eps with eps(t, 0) = h(t): evaluation
/// solves the characteristic equation for t and then
/// f(x, y) = f(t, 0) + y sqrt(2 h) (sin(log h / 2), cos(log h / 2)),
/// with f(t, 0) accumulated by quadrature of the closed-form integrand.
/// The orientation constant d is fixed to -pi/2.
inline LatticeMap burgers_map(const BurgersProfile& prof, double M, int quad_cells = (1 << 18)) {
    if (M <= 0) throw std::invalid_argument("burgers_map: M must be positive");
    const int samples = 512;
    for (int i = 0; i <= samples; ++i) {
        double t = prof.t0 + (prof.t1 - prof.t0) * i / samples;
        if (prof.h(t) <= 0) throw std::invalid_argument("burgers_map: profile must be positive");
        if (prof.dh(t) < -1e-12)
            throw std::invalid_argument("burgers_map: h' < 0 detected (shock would form)");
    }
    const double xlo = prof.t0 + prof.h(prof.t0) * M;
    if (xlo >= prof.t1)
        throw std::invalid_argument("burgers_map: domain empty; reduce M or widen the interval");

    auto g1 = [&prof](double t) {
        double hh = prof.h(t);
        return std::cos((std::log(hh) - M_PI_2) / 2) / std::sqrt(hh);
    };
    auto g2 = [&prof](double t) {
        double hh = prof.h(t);
        return -std::sin((std::log(hh) - M_PI_2) / 2) / std::sqrt(hh);
    };
    auto F1 = std::make_shared<detail::PrefixIntegral>(g1, prof.t0, prof.t1, quad_cells);
    auto F2 = std::make_shared<detail::PrefixIntegral>(g2, prof.t0, prof.t1, quad_cells);
    auto profile = std::make_shared<BurgersProfile>(prof);

    LatticeMap m;
    m.n = m.N = 2;
    m.kind = "burgers";
    m.c = 1.0;
    m.birth_axis = 1;
    m.params = {{"profile", prof.tag}, {"M", M}, {"t0", prof.t0}, {"t1", prof.t1}};
    m.domain = Box(Eigen::Vector2d(xlo, 0.0), Eigen::Vector2d(prof.t1, M));
    m.domain.lo_open[1] = true;
    m.eval = [profile, F1, F2](const Eigen::VectorXd& p) -> Eigen::VectorXd {
        const double t = detail::solve_characteristic(*profile, p(0), p(1));
        const double hh = profile->h(t);
        const double w = std::log(hh) / 2;
        return Eigen::Vector2d((*F1)(t) + p(1) * std::sqrt(2 * hh) * std::sin(w),
                               (*F2)(t) + p(1) * std::sqrt(2 * hh) * std::cos(w));
    };
    m.jac = [profile](const Eigen::VectorXd& p) -> Eigen::MatrixXd {
        const double t = detail::solve_characteristic(*profile, p(0), p(1));
        const double eps = profile->h(t);
        const double theta = -(std::log(eps) - M_PI_2) / 2;
        Eigen::Matrix2d J;
        J << std::cos(theta) / std::sqrt(eps), -std::sin(theta) * std::sqrt(eps),
             std::sin(theta) / std::sqrt(eps), std::cos(theta) * std::sqrt(eps);
        return J;
    };
    return m;
}

// ---------------------------------------------------------------------------
// Doyle exponential (conformal; diagonality only)
// ---------------------------------------------------------------------------

inline LatticeMap doyle_map(std::complex<double> w, double extent = 3.0) {
    if (w == std::complex<double>(0, 0)) throw std::invalid_argument("doyle_map: w must be nonzero");
    LatticeMap m;
    m.n = m.N = 2;
    m.kind = "doyle";
    m.c = 0.0;
    m.volume_preserving = false;  // determinant varies: diagonality only
    m.birth_axis = 1;
    m.params = {{"wre", w.real()}, {"wim", w.imag()}, {"extent", extent}};
    m.domain = Box(Eigen::Vector2d(-extent, -extent), Eigen::Vector2d(extent, extent));
    m.eval = [w](const Eigen::VectorXd& p) -> Eigen::VectorXd {
        std::complex<double> z(p(0), p(1));
        std::complex<double> f = std::exp(w * z);
        return Eigen::Vector2d(f.real(), f.imag());
    };
    m.jac = [w](const Eigen::VectorXd& p) -> Eigen::MatrixXd {
        std::complex<double> z(p(0), p(1));
        std::complex<double> g = w * std::exp(w * z);
        Eigen::Matrix2d J;
        J << g.real(), -g.imag(), g.imag(), g.real();
        return J;
    };
    return m;
}

// ---------------------------------------------------------------------------
// Scalar fields and PDE residuals
// ---------------------------------------------------------------------------

/// Positive scalar field eps(x, y), the square of the second metric
/// coefficient over c.
struct ScalarField2D {
    std::function<double(double, double)> eval;
    std::string tag = "custom";
};

inline ScalarField2D eps_inv_beta_y(double beta) {
    return {[beta](double, double y) { return 1.0 / (beta * y); }, "inv_beta_y"};
}
inline ScalarField2D eps_beta_x(double beta) {
    return {[beta](double x, double) { return beta * x; }, "beta_x"};
}
inline ScalarField2D eps_beta_x_over_y(double beta) {
    return {[beta](double x, double y) { return beta * x / y; }, "beta_x_over_y"};
}
/// Separated solution eps = d0 + d1 x1 - (d2 x1)^2 of the ball compatibility
/// equation.
inline ScalarField2D eps_quadratic(double d0, double d1, double d2) {
    return {[d0, d1, d2](double x, double) { return d0 + d1 * x - (d2 * x) * (d2 * x); },
            "quadratic"};
}
/// eps(x, y) = h(t(x, y)) along the Burgers characteristics.
inline ScalarField2D eps_burgers(const BurgersProfile& prof) {
    auto p = std::make_shared<BurgersProfile>(prof);
    return {[p](double x, double y) { return p->h(detail::solve_characteristic(*p, x, y)); },
            "burgers"};
}

/// eps eps_x + eps_y by central differences (the inviscid Burgers residual).
inline double burgers_residual(const ScalarField2D& eps, double x, double y,
                               double rel_step = 1e-6) {
    double hx = rel_step * std::max(std::abs(x), 1.0);
    double hy = rel_step * std::max(std::abs(y), 1.0);
    double ex = (eps.eval(x + hx, y) - eps.eval(x - hx, y)) / (2 * hx);
    double ey = (eps.eval(x, y + hy) - eps.eval(x, y - hy)) / (2 * hy);
    return eps.eval(x, y) * ex + ey;
}

using ScalarFieldN = std::function<double(const Eigen::VectorXd&)>;

/// Central-difference residual of the diagonal-metric PDE system for the
/// fields phi_1..phi_n at a point; returns the largest violation over both
/// equation families. Steps are rel_step * max(|x_k|, 1) per axis, with
/// 5-point stencils for the nested second derivatives.
inline double pde_residual(const std::vector<ScalarFieldN>& phi, const Eigen::VectorXd& point,
                           double rel_step = 1e-5, const Box* domain = nullptr) {
    const int n = static_cast<int>(phi.size());
    if (n < 2) throw std::invalid_argument("pde_residual: need at least two fields");
    if (rel_step <= 0) throw std::invalid_argument("pde_residual: step must be positive");

    auto step = [&](const Eigen::VectorXd& x, int k) {
        return rel_step * std::max(std::abs(x(k)), 1.0);
    };
    if (domain) {
        for (int k = 0; k < n; ++k) {
            double h = 2.5 * step(point, k);
            Eigen::VectorXd p = point, q = point;
            p(k) += h;
            q(k) -= h;
            if (!domain->contains(p) || !domain->contains(q))
                throw std::domain_error("pde_residual: point too close to the domain boundary");
        }
    }

    auto d1 = [&](const ScalarFieldN& f, const Eigen::VectorXd& x, int k) {
        Eigen::VectorXd p = x, q = x;
        double h = step(x, k);
        p(k) += h;
        q(k) -= h;
        return (f(p) - f(q)) / (2 * h);
    };
    auto d1_of = [&](const std::function<double(const Eigen::VectorXd&)>& g,
                     const Eigen::VectorXd& x, int k) {
        Eigen::VectorXd p = x, q = x;
        double h = step(x, k);
        p(k) += h;
        q(k) -= h;
        return (g(p) - g(q)) / (2 * h);
    };

    double worst = 0;
    // first family: phi_i^-1 (phi_i)_k (phi_j)_i + phi_k^-1 (phi_k)_i (phi_j)_k = (phi_j)_{ik}
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            for (int k = i + 1; k < n; ++k) {
                if (i == j || k == j) continue;
                double lhs = d1(phi[i], point, k) / phi[i](point) * d1(phi[j], point, i) +
                             d1(phi[k], point, i) / phi[k](point) * d1(phi[j], point, k);
                auto inner = [&](const Eigen::VectorXd& x) { return d1(phi[j], x, i); };
                double mixed = d1_of(inner, point, k);
                worst = std::max(worst, std::abs(lhs - mixed));
            }
        }
    }
    // second family:
    // (phi_k^-1 (phi_j)_k)_k + (phi_j^-1 (phi_k)_j)_j = -sum_{i != j,k} phi_i^-2 (phi_k)_i (phi_j)_i
    for (int j = 0; j < n; ++j) {
        for (int k = j + 1; k < n; ++k) {
            auto gk = [&](const Eigen::VectorXd& x) { return d1(phi[j], x, k) / phi[k](x); };
            auto gj = [&](const Eigen::VectorXd& x) { return d1(phi[k], x, j) / phi[j](x); };
            double lhs = d1_of(gk, point, k) + d1_of(gj, point, j);
            double rhs = 0;
            for (int i = 0; i < n; ++i) {
                if (i == j || i == k) continue;
                double pi = phi[i](point);
                rhs -= d1(phi[k], point, i) * d1(phi[j], point, i) / (pi * pi);
            }
            worst = std::max(worst, std::abs(lhs - rhs));
        }
    }
    return worst;
}

/// The three scalar fields of the A3 = 0 solution family on R^3:
/// phi1 = c^{1/3} (d^3 + 3 d2 x3)^{1/3} eps^{-1/2}, phi2 likewise with
/// eps^{+1/2}, phi3 = c^{1/3} (d^3 + 3 d2 x3)^{-2/3}; phi1 phi2 phi3 = c.
struct A3ZeroSolution {
    std::vector<ScalarFieldN> phi;
    Box domain;
};

inline A3ZeroSolution a3zero_solution(double c, double d, double d2, const ScalarField2D& eps,
                                      const Box& domain, int compat_samples = 64,
                                      double compat_tol = 1e-4, unsigned long seed = 17) {
    if (domain.dim() != 3) throw std::invalid_argument("a3zero_solution: domain must be 3D");
    if (c <= 0) throw std::invalid_argument("a3zero_solution: c must be positive");

    // eps_{x1 x1} + (1/eps)_{x2 x2} = -2 d2^2, sampled
    std::mt19937_64 rng(seed);
    auto inv = [&eps](double x, double y) { return 1.0 / eps.eval(x, y); };
    for (int it = 0; it < compat_samples; ++it) {
        Eigen::VectorXd p = domain.sample_interior(rng, 0.1);
        double h1 = 1e-4 * std::max(std::abs(p(0)), 1.0);
        double h2 = 1e-4 * std::max(std::abs(p(1)), 1.0);
        double exx =
            (eps.eval(p(0) + h1, p(1)) - 2 * eps.eval(p(0), p(1)) + eps.eval(p(0) - h1, p(1))) /
            (h1 * h1);
        double iyy = (inv(p(0), p(1) + h2) - 2 * inv(p(0), p(1)) + inv(p(0), p(1) - h2)) / (h2 * h2);
        if (std::abs(exx + iyy + 2 * d2 * d2) > compat_tol)
            throw std::domain_error("a3zero_solution: eps fails the compatibility equation");
    }
    for (double x3 : {domain.lo(2), domain.hi(2)}) {
        if (d * d * d + 3 * d2 * x3 <= 0)
            throw std::domain_error("a3zero_solution: d^3 + 3 d2 x3 must stay positive");
    }

    auto depth = [c, d, d2](double x3) { return std::cbrt(c) * std::cbrt(d * d * d + 3 * d2 * x3); };
    auto e = eps.eval;
    A3ZeroSolution sol;
    sol.domain = domain;
    sol.phi = {
        [depth, e](const Eigen::VectorXd& x) { return depth(x(2)) / std::sqrt(e(x(0), x(1))); },
        [depth, e](const Eigen::VectorXd& x) { return depth(x(2)) * std::sqrt(e(x(0), x(1))); },
        [c, depth](const Eigen::VectorXd& x) {
            double t = depth(x(2));
            return c / (t * t);
        },
    };
    return sol;
}

// ---------------------------------------------------------------------------
// JSON configs
// ---------------------------------------------------------------------------

inline nlohmann::json map_to_json(const LatticeMap& m) {
    nlohmann::json j = m.params;
    j["kind"] = m.kind;
    return j;
}

inline LatticeMap map_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "vogel") return vogel_map(j.at("beta").get<double>(), j.at("M").get<double>());
    if (kind == "logspiral")
        return logspiral_map(j.at("beta").get<double>(), j.at("M").get<double>());
    if (kind == "ball")
        return ball_map(j.at("r").get<double>(), j.at("s").get<double>(), j.at("R").get<double>());
    if (kind == "burgers") {
        if (j.at("profile").get<std::string>() != "linear")
            throw std::invalid_argument("map_from_json: only the linear burgers profile is serializable");
        return burgers_map(BurgersProfile::linear(j.at("t0").get<double>(), j.at("t1").get<double>()),
                           j.at("M").get<double>());
    }
    if (kind == "doyle")
        return doyle_map({j.at("wre").get<double>(), j.at("wim").get<double>()},
                         j.at("extent").get<double>());
    throw std::invalid_argument("map_from_json: unknown kind '" + kind + "'");
}

}  // namespace parastichy
