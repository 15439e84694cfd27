#pragma once

// Lifting construction F(x, x_{n+1}) = e^{alpha h} exp(A h) f(x): produces an
// (n+1)-dimensional diagonal constant-determinant map from an n-dimensional
// one, given a constant alpha and an antisymmetric matrix A compatible with f.

#include <parastichy/maps.hpp>

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>

namespace parastichy {

namespace detail {

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double tol, int depth = 24) {
    auto simpson = [&](double lo, double hi) {
        return (hi - lo) / 6.0 * (f(lo) + 4 * f(0.5 * (lo + hi)) + f(hi));
    };
    std::function<double(double, double, double, double, int)> rec =
        [&](double lo, double hi, double whole, double eps, int d) -> double {
        double mid = 0.5 * (lo + hi);
        double left = simpson(lo, mid), right = simpson(mid, hi);
        if (d <= 0 || std::abs(left + right - whole) < 15 * eps)
            return left + right + (left + right - whole) / 15.0;
        return rec(lo, mid, left, eps / 2, d - 1) + rec(mid, hi, right, eps / 2, d - 1);
    };
    if (a == b) return 0.0;
    return rec(a, b, simpson(a, b), tol, depth);
}

}  // namespace detail

struct LiftOptions {
    double lifted_hi = 10.0;  // lifted coordinate ranges over (0, lifted_hi)
    int samples = 64;
    double tol = 1e-7;
    unsigned long seed = 23;
};

struct DimensionLift {
    LatticeMap base;
    double alpha = 0;
    Eigen::MatrixXd A;
    double d1 = 1, d2 = 0;
    std::function<double(const Eigen::VectorXd&)> H;          // potential of f*.f_j / f*.f*
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> q; // the induced metric q_f
    double gamma = 0;            // sqrt(det q_f) (sampled mean)
    double gamma_spread_rel = 0; // (max-min)/mean over samples; ~0 when (b) holds
    double path_defect = 0;      // worst axis-order disagreement of H
    LatticeMap lifted;
};

/// Builds the lift after verifying, at sampled points: A antisymmetric,
/// the closability condition Jf^T Q Jf = 0, nondegeneracy of Jf and of
/// [Jf | f*], and positive definiteness of q_f. Whether the result actually
/// satisfies the two metric conditions is the downstream map check: it holds
/// exactly when det q_f is constant (gamma_spread_rel ~ 0).
inline DimensionLift lift_map(const LatticeMap& f, double alpha, const Eigen::MatrixXd& A,
                                  double d1, double d2, const LiftOptions& opt = {}) {
    const int n = f.n, N = f.N;
    if (A.rows() != N || A.cols() != N)
        throw std::invalid_argument("lift_map: A must be N x N");
    if ((A + A.transpose()).norm() > 1e-12 * (1.0 + A.norm()))
        throw std::invalid_argument("lift_map: A must be antisymmetric");
    if (d1 == 0) throw std::invalid_argument("lift_map: d1 must be nonzero");
    if (alpha != 0 && d2 <= 0)
        throw std::invalid_argument("lift_map: alpha != 0 needs d1 x + d2 > 0 at x = 0");

    DimensionLift lift;
    lift.base = f;
    lift.alpha = alpha;
    lift.A = A;
    lift.d1 = d1;
    lift.d2 = d2;

    const Eigen::MatrixXd S = alpha * Eigen::MatrixXd::Identity(N, N) + A;
    auto fstar = [S, f](const Eigen::VectorXd& x) -> Eigen::VectorXd { return S * f.eval(x); };

    const bool degenerate = S.norm() == 0.0;  // alpha = 0, A = O: F = f identically

    if (!degenerate) {
        std::mt19937_64 rng(opt.seed);
        for (int it = 0; it < opt.samples; ++it) {
            Eigen::VectorXd x = f.domain.sample_interior(rng, 0.05);
            Eigen::MatrixXd J = f.jacobian(x);
            Eigen::VectorXd fs = fstar(x);
            double fs2 = fs.squaredNorm();

            Eigen::MatrixXd JtJ = J.transpose() * J;
            if (std::abs(JtJ.determinant()) < 1e-12 * std::pow(JtJ.trace(), n))
                throw std::domain_error("lift_map: Jf^T Jf is singular (condition ii)");
            Eigen::MatrixXd ext(N, n + 1);
            ext.leftCols(n) = J;
            ext.col(n) = fs;
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(ext);
            if (svd.singularValues()(n) < 1e-9 * svd.singularValues()(0))
                throw std::domain_error(
                    "lift_map: f* not independent of the partials (condition ii)");

            Eigen::MatrixXd Q = fs * fs.transpose() * A + A * fs * fs.transpose() - fs2 * A;
            double scale = J.squaredNorm() * fs2 * (A.norm() + 1.0) + 1e-300;
            if ((J.transpose() * Q * J).norm() > opt.tol * scale)
                throw std::domain_error("lift_map: closability condition (i) violated");
        }
    }

    // H by staircase integration of f*.f_{x_j} / (f*.f*) from the box center;
    // condition (i) makes the value path independent.
    Eigen::VectorXd x0 = 0.5 * (f.domain.lo + f.domain.hi);
    auto grad_component = [f, fstar](const Eigen::VectorXd& x, int j) {
        Eigen::VectorXd fs = fstar(x);
        return fs.dot(f.jacobian(x).col(j)) / fs.squaredNorm();
    };
    auto H_along = [f, x0, grad_component](const Eigen::VectorXd& x,
                                           const std::vector<int>& order) {
        Eigen::VectorXd p = x0;
        double acc = 0;
        for (int j : order) {
            auto integrand = [&](double t) {
                Eigen::VectorXd y = p;
                y(j) = t;
                return grad_component(y, j);
            };
            acc += detail::adaptive_simpson(integrand, x0(j), x(j), 1e-12);
            p(j) = x(j);
        }
        return acc;
    };
    if (degenerate) {
        lift.H = [](const Eigen::VectorXd&) { return 0.0; };
    } else {
        std::vector<int> order(n);
        for (int j = 0; j < n; ++j) order[j] = j;
        lift.H = [H_along, order](const Eigen::VectorXd& x) { return H_along(x, order); };

        std::vector<int> rev(order.rbegin(), order.rend());
        std::mt19937_64 rng(opt.seed + 1);
        for (int it = 0; it < 8; ++it) {
            Eigen::VectorXd x = f.domain.sample_interior(rng, 0.05);
            lift.path_defect =
                std::max(lift.path_defect, std::abs(H_along(x, order) - H_along(x, rev)));
        }
        if (lift.path_defect > opt.tol)
            throw std::domain_error("lift_map: H_f is path dependent beyond tolerance");
    }

    auto H = lift.H;
    if (!degenerate) {
        lift.q = [f, fstar, H, alpha, n](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
            Eigen::MatrixXd J = f.jacobian(x);
            Eigen::VectorXd fs = fstar(x);
            double fs2 = fs.squaredNorm();
            Eigen::MatrixXd P =
                Eigen::MatrixXd::Identity(fs.size(), fs.size()) - fs * fs.transpose() / fs2;
            double pre = std::exp(-2.0 * (n + 1) / n * alpha * H(x)) * std::pow(fs2, 1.0 / n);
            return pre * J.transpose() * P * J;
        };
        std::mt19937_64 rng(opt.seed + 2);
        double gmin = std::numeric_limits<double>::infinity(), gmax = 0, gsum = 0;
        for (int it = 0; it < opt.samples; ++it) {
            Eigen::VectorXd x = f.domain.sample_interior(rng, 0.05);
            Eigen::MatrixXd qx = lift.q(x);
            Eigen::LLT<Eigen::MatrixXd> llt(qx);
            if (llt.info() != Eigen::Success)
                throw std::domain_error("lift_map: q_f not positive definite");
            double g = std::sqrt(qx.determinant());
            gmin = std::min(gmin, g);
            gmax = std::max(gmax, g);
            gsum += g;
        }
        lift.gamma = gsum / opt.samples;
        lift.gamma_spread_rel = (gmax - gmin) / lift.gamma;
    }

    const double hconst = (alpha == 0) ? 0.0 : 1.0 / ((n + 1) * alpha);
    auto h_of = [H, alpha, d1, d2, hconst](const Eigen::VectorXd& x, double u) {
        double tail = (alpha == 0) ? (d1 * u + d2) : hconst * std::log(d1 * u + d2);
        return -H(x) + tail;
    };

    LatticeMap F;
    F.n = n + 1;
    F.N = N;
    F.kind = "lift(" + f.kind + ")";
    F.birth_axis = n;
    F.params = {{"base", f.kind}, {"alpha", alpha}, {"d1", d1}, {"d2", d2}};
    Eigen::VectorXd lo(n + 1), hi(n + 1);
    lo.head(n) = f.domain.lo;
    hi.head(n) = f.domain.hi;
    lo(n) = 0.0;
    hi(n) = opt.lifted_hi;
    F.domain = Box(lo, hi);
    F.domain.lo_open = f.domain.lo_open;
    F.domain.lo_open.push_back(true);
    F.domain.hi_closed = f.domain.hi_closed;
    F.domain.hi_closed.push_back(false);
    Eigen::MatrixXd Acopy = A;
    auto feval = f.eval;
    F.eval = [Acopy, feval, h_of, alpha](const Eigen::VectorXd& xu) -> Eigen::VectorXd {
        Eigen::VectorXd x = xu.head(xu.size() - 1);
        double h = h_of(x, xu(xu.size() - 1));
        Eigen::MatrixXd rot = (Acopy * h).exp();
        return std::exp(alpha * h) * (rot * feval(x));
    };
    F.volume_preserving = !degenerate;
    F.c = degenerate ? 0.0
                     : std::abs(alpha == 0 ? d1 : d1 * hconst) * lift.gamma;
    lift.lifted = F;
    return lift;
}

/// The two-dimensional base of the ball instance:
/// f(s, t) = s^{1/3} (t, 0, sqrt(r^2 - t^2)) on (0, S) x (t_lo, t_hi).
inline LatticeMap ball_lift_base(double r, double S, double t_lo_frac = -0.95,
                                 double t_hi_frac = 0.95) {
    if (r <= 0 || S <= 0) throw std::invalid_argument("ball_lift_base: r, S must be positive");
    LatticeMap m;
    m.n = 2;
    m.N = 3;
    m.kind = "ball-base";
    m.c = 0;  // not itself square; conditions apply to the lift
    m.volume_preserving = false;
    m.birth_axis = 0;
    m.params = {{"r", r}, {"S", S}};
    m.domain = Box(Eigen::Vector2d(0.0, t_lo_frac * r), Eigen::Vector2d(S, t_hi_frac * r));
    m.domain.lo_open[0] = true;
    m.eval = [r](const Eigen::VectorXd& p) -> Eigen::VectorXd {
        if (p(0) <= 0) throw std::domain_error("ball_lift_base: s must be positive");
        if (std::abs(p(1)) >= r) throw std::domain_error("ball_lift_base: |t| must be < r");
        double c = std::cbrt(p(0));
        return Eigen::Vector3d(c * p(1), 0.0, c * std::sqrt(r * r - p(1) * p(1)));
    };
    m.jac = [r](const Eigen::VectorXd& p) -> Eigen::MatrixXd {
        double c = std::cbrt(p(0));
        double rho = std::sqrt(r * r - p(1) * p(1));
        double dc = 1.0 / (3 * c * c);
        Eigen::MatrixXd J(3, 2);
        J << dc * p(1), c, 0, 0, dc * rho, -c * p(1) / rho;
        return J;
    };
    return m;
}

/// The antisymmetric generator of rotations in the (2,3)-plane used by the
/// ball instance.
inline Eigen::MatrixXd ball_lift_rotation() {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(3, 3);
    A(1, 2) = 1;
    A(2, 1) = -1;
    return A;
}

}  // namespace parastichy
