#include <catch2/catch_amalgamated.hpp>

#include <parastichy/packer.hpp>

#include <random>

using namespace parastichy;
using Catch::Approx;

namespace {

BasisMatrix z2() { return BasisMatrix(Eigen::MatrixXd::Identity(2, 2)); }

LatticeMap identity_map(double extent = 100.0) {
    LatticeMap m;
    m.n = m.N = 2;
    m.kind = "custom";
    m.domain = Box(Eigen::Vector2d(-extent, -extent), Eigen::Vector2d(extent, extent));
    m.eval = [](const Eigen::VectorXd& x) { return x; };
    m.jac = [](const Eigen::VectorXd& x) {
        return Eigen::MatrixXd(Eigen::MatrixXd::Identity(2, 2));
    };
    return m;
}

}  // namespace

TEST_CASE("lattice point enumeration") {
    Box strip(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 10));
    auto pts = enumerate_lattice_points(z2(), strip);
    CHECK(pts.size() == 10);  // (0, 0..9)

    // golden basis vs brute force over a small window
    auto B = golden_basis(1);
    Box small(Eigen::Vector2d(-2, -2), Eigen::Vector2d(2, 2));
    auto fast = enumerate_lattice_points(B, small);
    std::size_t brute = 0;
    for (long a = -100; a <= 100; ++a)
        for (long b = -100; b <= 100; ++b) {
            Eigen::Vector2d x = double(a) * B.mat.col(0) + double(b) * B.mat.col(1);
            if (small.contains(x)) ++brute;
        }
    CHECK(fast.size() == brute);

    Box far(Eigen::Vector2d(0.30, 0.30), Eigen::Vector2d(0.31, 0.31));
    CHECK(enumerate_lattice_points(z2(), far).empty());

    Box unbounded(Eigen::Vector2d(0, 0),
                  Eigen::Vector2d(std::numeric_limits<double>::infinity(), 1));
    CHECK_THROWS_AS(enumerate_lattice_points(z2(), unbounded), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_lattice_points(z2(), strip, -1.0), std::invalid_argument);
}

TEST_CASE("vogel packing with basis (i), s = 1 is the classical spiral") {
    const double M = 50;
    auto map = vogel_map(4 * M_PI, M);  // s = 4 pi / beta = 1
    auto ps = generate_packing(map, vogel_basis(VogelBasisKind::i), 1.0,
                               {SeamScheme::basis_i, 1, 1.0});
    REQUIRE(ps.size() == 49);  // integers 0 < n < 50

    const double phi = (3.0 - std::sqrt(5.0)) / 2.0;
    std::vector<int> order(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return ps.preimages[a](1) < ps.preimages[b](1); });
    for (std::size_t i = 0; i < order.size(); ++i) {
        double n = i + 1.0;
        CHECK(ps.preimages[order[i]](1) == Approx(n).margin(1e-12));
        double t = n * phi - std::floor(n * phi);
        Eigen::Vector2d expect(std::sqrt(n) * std::cos(2 * M_PI * t),
                               std::sqrt(n) * std::sin(2 * M_PI * t));
        CHECK((ps.points[order[i]] - expect).norm() < 1e-12);
    }
}

TEST_CASE("generate_packing validates dimensions and seams") {
    auto map = vogel_map(4 * M_PI, 10);
    CHECK_THROWS_AS(generate_packing(map, optimal_basis(3).basis), std::invalid_argument);
    CHECK_THROWS_AS(generate_packing(map, z2(), 1.0, {SeamScheme::logspiral, 9, 8.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        generate_packing(logspiral_map(1.0, 5.0), z2(), 1.0, {SeamScheme::logspiral, -1, 536.0}),
        std::invalid_argument);
}

TEST_CASE("seam parameters from the convergents of -1/phibar") {
    auto ii = seam_parameter(SeamScheme::basis_ii, 9);
    CHECK(ii.s == 47.0);  // |2 q_9 + 3 p_9| = |110 - 63|

    auto iii = seam_parameter(SeamScheme::basis_iii, 11);
    CHECK(iii.s == 55.0);  // |p_11|

    auto log9 = seam_parameter(SeamScheme::logspiral, 9);
    CHECK(log9.s == 8.0);  // |q_9 + 3 p_9|

    CHECK(seam_parameter(SeamScheme::basis_i, 7).s == 7.0);
    CHECK_THROWS_AS(seam_parameter(SeamScheme::logspiral, 18), std::domain_error);  // s = 610
    CHECK_THROWS_AS(seam_parameter(SeamScheme::none, 1), std::invalid_argument);
    // the gamma-trace variant (trace 1) changes the admissible set
    CHECK(seam_parameter(SeamScheme::basis_ii, 9, 1).s == 89.0);
}

TEST_CASE("local density: identity Jacobian gives the Z^2 density") {
    auto m = identity_map();
    CHECK(local_density(m, z2(), Eigen::Vector2d(0.3, 0.4)) == Approx(M_PI / 4).epsilon(1e-9));
}

TEST_CASE("vogel + golden basis: density over a birth-time decade dips to pi/(2 sqrt 5)") {
    auto map = vogel_map(4 * M_PI / 47, 4000);
    auto B = golden_basis(1);
    double target = M_PI / (2 * std::sqrt(5.0));
    double lo = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 3000; ++k) {
        double y = 40.0 * std::pow(10.0, k / 3000.0);  // one decade
        double d = local_density(map, B, Eigen::Vector2d(1.0, y));
        lo = std::min(lo, d);
        CHECK(d >= target - 1e-6);  // the density-stability floor
    }
    CHECK(lo == Approx(target).margin(1e-3));
}

TEST_CASE("logspiral + B2: density floor holds at sampled interior points") {
    auto map = logspiral_map(1.6, 30.0);
    auto B = optimal_basis(2).basis;
    double floor_val = M_PI / (2 * std::sqrt(5.0));
    std::mt19937_64 rng(77);
    for (int it = 0; it < 300; ++it) {
        Eigen::VectorXd p = map.domain.sample_interior(rng, 0.02);
        CHECK(local_density(map, B, p) >= floor_val - 1e-6);
    }
}

TEST_CASE("drawn radius = min distance / 2 leaves no overlapping pair") {
    auto map = vogel_map(4 * M_PI / 8, 120);
    auto ps = generate_packing(map, optimal_basis(2).basis, 1.0,
                               {SeamScheme::basis_ii, -1, 8});
    double r = min_pairwise_distance(ps).value / 2;
    for (std::size_t i = 0; i < ps.size(); ++i)
        for (std::size_t j = i + 1; j < ps.size(); ++j)
            CHECK((ps.points[i] - ps.points[j]).norm() >= 2 * r - 1e-12);
}

TEST_CASE("vogel basis (i): tail infimum over shrinking eps reaches pi/(2 L)") {
    // The liminf discards the low-denominator transient (the sweep starts
    // past the q <= 5 dips, which fall below pi/(2 sqrt 5)).
    auto B = vogel_basis(VogelBasisKind::i);
    auto map = vogel_map(4 * M_PI / 47, 1e9);
    double target = M_PI / (2 * std::sqrt(5.0));  // L(phi) = sqrt 5
    double tail_min = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 160; ++k) {
        double y = 100.0 * std::pow(1.03, k);
        tail_min = std::min(tail_min, local_density(map, B, Eigen::Vector2d(1.0, y)));
    }
    CHECK(tail_min == Approx(target).margin(1e-2));
}

TEST_CASE("coloring by birth and by density") {
    auto map = vogel_map(4 * M_PI, 40);
    auto B = vogel_basis(VogelBasisKind::i);
    auto ps = generate_packing(map, B);
    REQUIRE(ps.size() == 39);

    color(ps, PointSet::ColorKind::birth);
    CHECK(ps.color_kind == PointSet::ColorKind::birth);
    for (std::size_t i = 0; i < ps.size(); ++i) CHECK(ps.color[i] == ps.preimages[i](1));

    color(ps, PointSet::ColorKind::density, &map, &B);
    for (double c : ps.color) CHECK(c > 0.2);
    CHECK_THROWS_AS(color(ps, PointSet::ColorKind::density), std::invalid_argument);

    // constant Jacobian means a constant density channel
    auto idm = identity_map(8.0);
    auto zb = z2();
    auto flat = generate_packing(idm, zb);
    color(flat, PointSet::ColorKind::density, &idm, &zb);
    for (double c : flat.color) CHECK(c == Approx(M_PI / 4).epsilon(1e-12));
}

TEST_CASE("min pairwise distance") {
    auto pts = enumerate_lattice_points(z2(), Box(Eigen::Vector2d(0, 0), Eigen::Vector2d(5, 5)));
    auto d = min_pairwise_distance(pts);
    CHECK(d.valid);
    CHECK(d.value == Approx(1.0));

    auto dup = pts;
    dup.push_back(pts.front());
    auto d2 = min_pairwise_distance(dup);
    CHECK_FALSE(d2.valid);
    CHECK(d2.value == 0.0);

    CHECK_THROWS_AS(min_pairwise_distance(std::vector<Eigen::VectorXd>{Eigen::Vector2d(0, 0)}),
                    std::invalid_argument);
}

TEST_CASE("vogel spiral: spacing stays positive and stable as M grows") {
    double prev = 0;
    for (double M : {2000.0, 6000.0, 10000.0}) {
        auto map = vogel_map(4 * M_PI, M);
        auto ps = generate_packing(map, vogel_basis(VogelBasisKind::i));
        auto d = min_pairwise_distance(ps);
        CHECK(d.valid);
        CHECK(d.value > 0.3);
        if (prev > 0) CHECK(d.value == Approx(prev).epsilon(0.05));
        prev = d.value;
    }
}

TEST_CASE("scale equivariance: scale c equals the c-scaled basis") {
    auto map = vogel_map(4 * M_PI / 8, 300);
    auto B = optimal_basis(2).basis;
    const double c = 0.35;
    auto a = generate_packing(map, B, c);
    auto b = generate_packing(map, BasisMatrix(c * B.mat, B.provenance), 1.0);
    REQUIRE(a.size() == b.size());
    // same point sets up to enumeration order; sort lexicographically
    auto lex = [](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
        return std::lexicographical_compare(u.data(), u.data() + u.size(), v.data(),
                                            v.data() + v.size());
    };
    std::sort(a.points.begin(), a.points.end(), lex);
    std::sort(b.points.begin(), b.points.end(), lex);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK((a.points[i] - b.points[i]).norm() < 1e-12);
}

TEST_CASE("injectivity spot check on the three closed-form maps") {
    std::mt19937_64 rng(99);
    for (const auto& m :
         {vogel_map(1.0, 50.0), logspiral_map(1.3, 20.0), ball_map(2.0, 5.0, 50.0)}) {
        std::vector<Eigen::VectorXd> images;
        images.reserve(10000);
        for (int i = 0; i < 10000; ++i) images.push_back(m(m.domain.sample_interior(rng, 0.01)));
        auto d = min_pairwise_distance(images);
        INFO(m.kind);
        CHECK(d.value > 1e-9);
    }
}

TEST_CASE("seam gap: s = 47 glues, s = 45 does not") {
    const double M = 100;
    auto B = vogel_basis(VogelBasisKind::ii);

    auto run = [&](double s) {
        auto map = vogel_map(4 * M_PI / s, M);
        auto ps = generate_packing(map, B, 1.0, {SeamScheme::basis_ii, 9, s});
        return disk_seam_gap(ps, M / 4, M / 2);
    };
    auto good = run(47);
    auto bad = run(45);
    INFO("good deviation " << good.deviation << ", bad deviation " << bad.deviation);
    CHECK(good.deviation < 0.10);
    CHECK(bad.deviation > 0.25);

    // larger admissible widths glue even more tightly
    auto better = run(123);
    CHECK(better.deviation < 0.10);
}
