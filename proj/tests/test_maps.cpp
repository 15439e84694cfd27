#include <catch2/catch_amalgamated.hpp>

#include <parastichy/maps.hpp>

#include <random>

using namespace parastichy;
using Catch::Approx;

TEST_CASE("vogel map point values and closed-form metric") {
    auto m = vogel_map(1.0, 10.0);
    Eigen::Vector2d f1 = m(Eigen::Vector2d(0, 4));
    CHECK(f1(0) == Approx(2.0));
    CHECK(f1(1) == Approx(0.0).margin(1e-15));

    Eigen::Vector2d f2 = m(Eigen::Vector2d(M_PI, 1.0));
    CHECK(f2(0) == Approx(0.0).margin(1e-12));
    CHECK(f2(1) == Approx(1.0));

    // Df^T Df = diag(beta^2 y/4, 1/(4y)), both closed form and by differences
    std::mt19937_64 rng(3);
    for (int it = 0; it < 100; ++it) {
        Eigen::VectorXd p = m.domain.sample_interior(rng);
        Eigen::MatrixXd G = m.jacobian(p).transpose() * m.jacobian(p);
        CHECK(G(0, 0) == Approx(p(1) / 4).epsilon(1e-10));
        CHECK(G(1, 1) == Approx(1 / (4 * p(1))).epsilon(1e-10));
        CHECK(std::abs(G(0, 1)) < 1e-12);
        Eigen::MatrixXd Jfd = m.jacobian(p, true);
        CHECK((Jfd - m.jacobian(p)).norm() < 1e-6);
    }
    CHECK_THROWS_AS(m(Eigen::Vector2d(0, -1)), std::domain_error);
}

TEST_CASE("logspiral map values and conditions") {
    double beta = logspiral_beta_from_seam(55.0);
    auto m = logspiral_map(beta, 8.0);

    Eigen::Vector2d f1 = m(Eigen::Vector2d(1, 1));
    CHECK(f1(0) == Approx(1.0));
    CHECK(f1(1) == Approx(0.0).margin(1e-15));

    Eigen::Vector2d f2 = m(Eigen::Vector2d(1.0, std::exp(2.0 / beta)));
    CHECK(f2(0) == Approx(std::exp(1.0 / beta) * std::cos(1.0)).epsilon(1e-12));
    CHECK(f2(1) == Approx(std::exp(1.0 / beta) * std::sin(1.0)).epsilon(1e-12));

    auto rep = check_map_conditions(m, 100, 2);
    CHECK(rep.diagonal_ok(1e-6));
    CHECK(rep.det_ok(1e-5));

    CHECK_THROWS_AS(m(Eigen::Vector2d(-1, 1)), std::domain_error);
    CHECK_THROWS_AS(logspiral_beta_from_seam(536.0), std::domain_error);
}

TEST_CASE("logspiral slices are similar across birth times") {
    double beta = logspiral_beta_from_seam(47.0);
    auto m = logspiral_map(beta, 10.0);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ux(1.0 + 1e-3, m.domain.hi(0));
    for (double t : {2.0, 5.0, 9.6}) {
        double x0 = ux(rng), x1 = ux(rng);
        Eigen::Vector2d a0 = m(Eigen::Vector2d(x0, 1.0)), a1 = m(Eigen::Vector2d(x1, 1.0));
        Eigen::Vector2d b0 = m(Eigen::Vector2d(x0, t)), b1 = m(Eigen::Vector2d(x1, t));
        // the slice y = t is the slice y = 1 scaled by sqrt(t) (plus rotation)
        CHECK((b0 - b1).norm() == Approx(std::sqrt(t) * (a0 - a1).norm()).epsilon(1e-9));
        CHECK(b0.norm() == Approx(std::sqrt(t) * a0.norm()).epsilon(1e-9));
    }
}

TEST_CASE("ball map values and conditions") {
    auto m = ball_map(2.0, 4.0, 27.0);
    Eigen::Vector3d f1 = m(Eigen::Vector3d(0, 0, 1));
    CHECK(f1(0) == Approx(0.0).margin(1e-15));
    CHECK(f1(1) == Approx(0.0).margin(1e-15));
    CHECK(f1(2) == Approx(2.0));

    Eigen::Vector3d f2 = m(Eigen::Vector3d(1.0, 0, 8));  // s/4 rotates to the y-axis
    CHECK(f2(0) == Approx(0.0).margin(1e-12));
    CHECK(f2(1) == Approx(2 * 2.0).epsilon(1e-12));
    CHECK(f2(2) == Approx(0.0).margin(1e-12));

    auto rep = check_map_conditions(m, 100, 4);
    CHECK(rep.diagonal_ok(1e-6));
    CHECK(rep.det_ok(1e-5));
    CHECK(m.c == Approx(2 * M_PI * 4.0 / 12.0));

    // image containment: |f| = x3^{1/3} r
    std::mt19937_64 rng(5);
    for (int it = 0; it < 50; ++it) {
        Eigen::VectorXd p = m.domain.sample_interior(rng);
        CHECK(m(p).norm() == Approx(std::cbrt(p(2)) * 2.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(m(Eigen::Vector3d(0, 2.5, 1)), std::domain_error);
}

TEST_CASE("burgers: eps is constant along characteristics") {
    auto prof = BurgersProfile::linear();
    auto eps = eps_burgers(prof);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ut(1.5, 60.0), us(0.01, 6.0);
    for (int it = 0; it < 50; ++it) {
        double t = ut(rng), s = us(rng);
        double q = t + prof.h(t) * s;  // characteristic line through (t, 0)
        CHECK(eps.eval(q, s) == Approx(prof.h(t)).epsilon(1e-10));
    }
    // and eps solves the Burgers equation away from y = 0
    for (int it = 0; it < 20; ++it) {
        double t = ut(rng), s = us(rng);
        CHECK(std::abs(burgers_residual(eps, t + prof.h(t) * s + 1.0, s + 0.5)) < 1e-5);
    }
}

TEST_CASE("burgers map satisfies both conditions with c = 1") {
    auto m = burgers_map(BurgersProfile::linear(), 25.0);
    auto rep = check_map_conditions(m, 200, 6);
    CHECK(rep.diagonal_ok(1e-6));
    CHECK(rep.max_det_dev_rel < 1e-5);

    // closed form vs finite differences
    std::mt19937_64 rng(8);
    for (int it = 0; it < 40; ++it) {
        Eigen::VectorXd p = m.domain.sample_interior(rng);
        CHECK((m.jacobian(p, true) - m.jacobian(p)).norm() < 1e-6);
    }
    CHECK_THROWS_AS(m(Eigen::Vector2d(1e9, 1.0)), std::domain_error);

    BurgersProfile bad;
    bad.h = [](double t) { return 10.0 - t; };
    bad.dh = [](double) { return -1.0; };
    bad.t0 = 1;
    bad.t1 = 5;
    CHECK_THROWS_AS(burgers_map(bad, 1.0), std::invalid_argument);
}

TEST_CASE("burgers h(t) = t reproduces the logspiral family at s = e^{2pi}") {
    // eps(x, y) = x/(1+y) is the beta = 1 self-similar solution shifted by
    // one in birth time: f_burgers(x, y) equals the quarter-turn of the
    // logspiral image of (sqrt2 x, sqrt2 (1+y)) up to a constant offset.
    auto mb = burgers_map(BurgersProfile::linear(), 20.0);
    auto ml = logspiral_map(1.0, 40.0);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> ux(80.0, 300.0), uy(0.5, 18.0);
    auto lsp = [&](const Eigen::Vector2d& p) {
        return ml(Eigen::Vector2d(std::sqrt(2.0) * p(0), std::sqrt(2.0) * (1.0 + p(1))));
    };
    Eigen::Vector2d pa(ux(rng), uy(rng));
    for (int it = 0; it < 10; ++it) {
        Eigen::Vector2d pb(ux(rng), uy(rng));
        Eigen::Vector2d vb = mb(pa) - mb(pb);
        Eigen::Vector2d vl = lsp(pa) - lsp(pb);
        CHECK(vb(0) == Approx(-vl(1)).margin(1e-7));  // quarter turn
        CHECK(vb(1) == Approx(vl(0)).margin(1e-7));
    }
}

TEST_CASE("doyle map is conformal but not volume preserving") {
    auto m = doyle_map({0.15, 0.9}, 2.5);
    Eigen::Vector2d f0 = m(Eigen::Vector2d(0, 0));
    CHECK(f0(0) == Approx(1.0));
    CHECK(f0(1) == Approx(0.0).margin(1e-15));

    auto rep = check_map_conditions(m, 100, 10);
    CHECK(rep.conformal_ok(1e-6));
    CHECK(rep.det_spread_rel > 0.1);  // the determinant genuinely varies
    CHECK_FALSE(m.volume_preserving);
    CHECK_THROWS_AS(doyle_map({0, 0}), std::invalid_argument);
}

TEST_CASE("pde residual vanishes for the separated eps families") {
    const double c = 0.7, beta = 1.7;
    std::mt19937_64 rng(12);

    // (a) eps = 1/(beta y): phi = (sqrt(c/eps), sqrt(c eps))
    {
        auto eps = eps_inv_beta_y(beta);
        std::vector<ScalarFieldN> phi = {
            [&](const Eigen::VectorXd& x) { return std::sqrt(c / eps.eval(x(0), x(1))); },
            [&](const Eigen::VectorXd& x) { return std::sqrt(c * eps.eval(x(0), x(1))); }};
        std::uniform_real_distribution<double> u(3.0, 12.0);
        for (int it = 0; it < 100; ++it) {
            Eigen::Vector2d p(u(rng), u(rng));
            CHECK(pde_residual(phi, p) < 1e-6);
        }
    }
    // (c) eps = beta x / y
    {
        auto eps = eps_beta_x_over_y(beta);
        std::vector<ScalarFieldN> phi = {
            [&](const Eigen::VectorXd& x) { return std::sqrt(c / eps.eval(x(0), x(1))); },
            [&](const Eigen::VectorXd& x) { return std::sqrt(c * eps.eval(x(0), x(1))); }};
        std::uniform_real_distribution<double> u(3.0, 12.0);
        for (int it = 0; it < 100; ++it) {
            Eigen::Vector2d p(u(rng), u(rng));
            CHECK(pde_residual(phi, p) < 1e-6);
        }
    }
    // eps = x/y solves the Burgers equation (case (c) with beta = 1)
    auto exy = eps_beta_x_over_y(1.0);
    CHECK(std::abs(burgers_residual(exy, 3.0, 2.0)) < 1e-9);
}

TEST_CASE("a3 zero solution: product identity and pde residual") {
    // Mixed-partial differences carry an eps_machine/h^2 noise floor, so the
    // sample box keeps coordinates >= 5 (h = 1e-5 * |x|) and |phi| moderate.
    const double c = 1.0, d = 1.0, d2 = 0.04;
    Box dom(Eigen::Vector3d(5.0, 5.0, 5.0), Eigen::Vector3d(10.0, 10.0, 10.0));

    // case (a): eps = d0 + d1 x1 - (d2 x1)^2 with the matching d2
    auto sol = a3zero_solution(c, d, d2, eps_quadratic(4.0, 0.2, d2), dom);
    std::mt19937_64 rng(13);
    for (int it = 0; it < 100; ++it) {
        Eigen::VectorXd p = dom.sample_interior(rng, 0.1);
        double prod = sol.phi[0](p) * sol.phi[1](p) * sol.phi[2](p);
        CHECK(prod == Approx(c).epsilon(1e-12));
        CHECK(pde_residual(sol.phi, p) < 1e-6);
    }

    // d2 = 0 with eps = 1/(beta x2) degenerates to a cylinder-like stack
    Box dom2(Eigen::Vector3d(5.0, 5.0, 5.0), Eigen::Vector3d(9.0, 12.0, 9.0));
    auto flat = a3zero_solution(c, d, 0.0, eps_inv_beta_y(2.0), dom2);
    for (int it = 0; it < 50; ++it) {
        Eigen::VectorXd p = dom2.sample_interior(rng, 0.1);
        CHECK(pde_residual(flat.phi, p) < 1e-6);
    }

    // incompatible eps is rejected
    CHECK_THROWS_AS(a3zero_solution(c, d, 0.9, eps_quadratic(4.0, 0.2, 0.2), dom),
                    std::domain_error);
    // stencil too close to the boundary
    std::vector<ScalarFieldN> phi = sol.phi;
    Eigen::Vector3d edge(5.0 + 1e-9, 7.0, 7.0);
    CHECK_THROWS_AS(pde_residual(phi, edge, 1e-5, &dom), std::domain_error);
}

TEST_CASE("map conditions hold at 1000 points for the volume-preserving maps") {
    for (const auto& m : {vogel_map(2.0, 20.0), logspiral_map(1.4, 10.0),
                          ball_map(1.5, 3.0, 20.0), burgers_map(BurgersProfile::linear(), 30.0)}) {
        auto rep = check_map_conditions(m, 1000, 42);
        INFO(m.kind);
        CHECK(rep.diagonal_ok(1e-6));
        CHECK(rep.det_ok(1e-5));
    }
}

TEST_CASE("map json round trip") {
    for (const auto& m : {vogel_map(2.0, 20.0), logspiral_map(1.4, 10.0), ball_map(1.5, 3.0, 20.0),
                          burgers_map(BurgersProfile::linear(), 30.0), doyle_map({0.1, 0.8})}) {
        auto j = map_to_json(m);
        auto back = map_from_json(j);
        CHECK(back.kind == m.kind);
        CHECK(back.n == m.n);
        CHECK(back.c == Approx(m.c).margin(1e-15));
        CHECK(back.domain.lo == m.domain.lo);
        CHECK(back.domain.hi == m.domain.hi);
    }
    CHECK_THROWS_AS(map_from_json(nlohmann::json{{"kind", "moebius"}}), std::invalid_argument);
}
