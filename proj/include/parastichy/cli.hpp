#pragma once

// Command-line interface: packing generators (vogel, logspiral, ball,
// burgers, doyle), the Markoff spectra printer, and the verification suites.
// Exit codes: 0 success, 1 validation/config error, 2 failed verification.

#include <parastichy/io.hpp>
#include <parastichy/lift.hpp>

#include <CLI11.hpp>

#include <iostream>
#include <random>
#include <string>
#include <vector>

namespace parastichy {

namespace cli_detail {

struct CommonOpts {
    std::string color = "none";
    double scale = 1.0;
    std::string out;
    std::string format = "csv";
    long seed = 0;
};

inline void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--color", o.color,
                    "point color channel: density (clipped to [0.3, 0.95] for SVG "
                    "palette mapping) or birth")
        ->check(CLI::IsMember({"none", "density", "birth"}));
    cmd->add_option("--scale", o.scale, "lattice scale factor c (default 1)");
    cmd->add_option("--out", o.out, "output path (omit to print a summary)");
    cmd->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"csv", "json", "svg"}));
    cmd->add_option("--seed", o.seed, "seed for sampled verification checks");
}

inline int emit(PointSet& ps, const LatticeMap& map, const BasisMatrix& B,
                const CommonOpts& o) {
    if (o.color == "density")
        color(ps, PointSet::ColorKind::density, &map, &B);
    else if (o.color == "birth")
        color(ps, PointSet::ColorKind::birth);
    if (o.out.empty()) {
        std::cout << ps.size() << " points (" << map.kind << ", basis " << B.provenance
                  << ")\n";
        return 0;
    }
    export_points(ps, o.format, o.out);
    std::cout << "wrote " << ps.size() << " points to " << o.out << "\n";
    return 0;
}

inline BasisMatrix disk_basis(const std::string& tag) {
    if (tag == "i") return vogel_basis(VogelBasisKind::i);
    if (tag == "ii") return vogel_basis(VogelBasisKind::ii);
    if (tag == "iii") return vogel_basis(VogelBasisKind::iii);
    if (tag == "B2") return optimal_basis(2).basis;
    throw std::invalid_argument("unknown basis tag '" + tag + "'");
}

inline SeamScheme disk_scheme(const std::string& tag) {
    if (tag == "i") return SeamScheme::basis_i;
    if (tag == "iii") return SeamScheme::basis_iii;
    return SeamScheme::basis_ii;  // ii and the equal-lattice B2
}

inline BurgersProfile profile_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("burgers profile: cannot open " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    auto t = j.at("t").get<std::vector<double>>();
    auto h = j.at("h").get<std::vector<double>>();
    if (t.size() != h.size() || t.size() < 2)
        throw std::invalid_argument("burgers profile: need matching t/h arrays (>= 2 samples)");
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        if (t[i + 1] <= t[i]) throw std::invalid_argument("burgers profile: t must increase");
        if (h[i + 1] < h[i]) throw std::invalid_argument("burgers profile: h must not decrease");
    }
    for (double v : h)
        if (v <= 0) throw std::invalid_argument("burgers profile: h must be positive");

    auto tt = std::make_shared<std::vector<double>>(std::move(t));
    auto hh = std::make_shared<std::vector<double>>(std::move(h));
    BurgersProfile p;
    p.t0 = tt->front();
    p.t1 = tt->back();
    p.tag = "table";
    auto segment = [tt](double x) {
        auto it = std::upper_bound(tt->begin(), tt->end(), x);
        std::size_t i = std::clamp<std::size_t>(it - tt->begin(), 1, tt->size() - 1);
        return i - 1;
    };
    p.h = [tt, hh, segment](double x) {
        std::size_t i = segment(x);
        double u = (x - (*tt)[i]) / ((*tt)[i + 1] - (*tt)[i]);
        return (*hh)[i] + u * ((*hh)[i + 1] - (*hh)[i]);
    };
    p.dh = [tt, hh, segment](double x) {
        std::size_t i = segment(x);
        return ((*hh)[i + 1] - (*hh)[i]) / ((*tt)[i + 1] - (*tt)[i]);
    };
    return p;
}

// ---------------------------------------------------------------------------
// Verification suites
// ---------------------------------------------------------------------------

inline VerificationReport verify_lattices(unsigned long seed) {
    VerificationReport r;
    r.suite = "lattices";

    const double dks[] = {5, 49, 725, 14641};
    for (int n = 2; n <= 5; ++n) {
        auto ob = optimal_basis(n);
        double det2 = ob.basis.det() * ob.basis.det();
        r.check_close("discriminant n=" + std::to_string(n), det2, dks[n - 2],
                      1e-6 * dks[n - 2]);
    }

    const double deltas[] = {M_PI / (2 * std::sqrt(5.0)), std::sqrt(3.0) * M_PI / 14,
                             M_PI * M_PI / (10 * std::sqrt(29.0)),
                             5 * std::sqrt(5.0) * M_PI * M_PI / 1452};
    for (int n = 2; n <= 5; ++n) {
        double d = delta_prime(optimal_basis(n).basis, known_lambda(n));
        r.check_close("delta_prime n=" + std::to_string(n), d, deltas[n - 2],
                      1e-9 * deltas[n - 2]);
    }

    r.check_close("lambda_2 (box 300)", linear_form_product(normalized_optimal_basis(2), 300).value,
                  1.0 / std::sqrt(5.0), 1e-9);
    r.check_close("lambda_3 (box 60)", linear_form_product(normalized_optimal_basis(3), 60).value,
                  1.0 / 7.0, 1e-9);

    bool spectra_ok = true;
    for (const auto& m : markoff_numbers(100)) {
        auto L = lagrange_number(gamma_m(m));
        auto sq = (L * L).to_rational();
        Rational expect(9 * m * m - 4, m * m);
        expect.canonicalize();
        spectra_ok = spectra_ok && sq == expect;
    }
    r.check_flag("lagrange(gamma_m)^2 = 9 - 4/m^2 for m <= 100", spectra_ok);

    std::mt19937_64 rng(seed + 11);
    std::uniform_real_distribution<double> leps(-2.0, 2.0);
    std::uniform_int_distribution<long> coef(1, 6);
    const long ds[] = {2, 3, 5, 7, 13};
    std::uniform_int_distribution<std::size_t> di(0, std::size(ds) - 1);
    int good = 0;
    const int cases = 100;
    for (int it = 0; it < cases; ++it) {
        QuadraticIrrational p1(coef(rng), 1, coef(rng), ds[di(rng)]);
        QuadraticIrrational p2(-coef(rng), -1, coef(rng), ds[di(rng)]);
        double eps = std::exp(leps(rng));
        auto sb = selling_superbasis(p1, p2, eps);
        bool ok = sb.u1.dot(sb.u2) <= 1e-9 && sb.u1.dot(sb.u3) <= 1e-9 &&
                  sb.u2.dot(sb.u3) <= 1e-9;
        auto oracle = min_norm(pair_basis(p1, p2, eps), MinNormMethod::oracle, 50);
        ok = ok && std::abs(sb.shortest.squaredNorm() - oracle.norm2) <=
                       1e-9 * std::max(1.0, oracle.norm2);
        if (ok) ++good;
    }
    r.check_close("selling superbasis vs oracle (100 random)", good, cases, 0);

    double floor_val = M_PI / (2 * std::sqrt(5.0));
    auto B2 = optimal_basis(2).basis;
    std::uniform_real_distribution<double> ex(-2.5, 2.5);
    double worst = 1.0;
    for (int it = 0; it < 100; ++it) {
        double e = ex(rng);
        Eigen::Vector2d d(std::exp(e), std::exp(-e));
        Eigen::MatrixXd DB = d.asDiagonal() * B2.mat;
        worst = std::min(worst, packing_density_gram(DB.transpose() * DB));
    }
    r.check_bound("density floor pi/(2 sqrt5) - Delta(D B2)", floor_val - worst, 1e-9);
    return r;
}

inline VerificationReport verify_maps(unsigned long seed) {
    VerificationReport r;
    r.suite = "maps";
    for (const auto& m : {vogel_map(2.0, 20.0), logspiral_map(1.4, 10.0),
                          ball_map(1.5, 3.0, 20.0), burgers_map(BurgersProfile::linear(), 30.0)}) {
        auto rep = check_map_conditions(m, 300, seed);
        r.check_bound(m.kind + " off-diagonal (rel)", rep.max_offdiag_rel, 1e-6);
        r.check_bound(m.kind + " det deviation (rel)", rep.max_det_dev_rel, 1e-5);
    }
    auto doyle = doyle_map({0.15, 0.9}, 2.5);
    auto rep = check_map_conditions(doyle, 300, seed);
    r.check_bound("doyle conformality (rel)", std::max(rep.max_offdiag_rel, rep.max_aniso_rel),
                  1e-6);
    r.check_flag("doyle determinant varies (diagonality-only map)", rep.det_spread_rel > 0.1);
    return r;
}

inline VerificationReport verify_pde(unsigned long seed) {
    VerificationReport r;
    r.suite = "pde";
    std::mt19937_64 rng(seed + 3);
    const double c = 0.7, beta = 1.7;

    auto pair_fields = [c](const ScalarField2D& eps) {
        std::vector<ScalarFieldN> phi = {
            [c, eps](const Eigen::VectorXd& x) { return std::sqrt(c / eps.eval(x(0), x(1))); },
            [c, eps](const Eigen::VectorXd& x) { return std::sqrt(c * eps.eval(x(0), x(1))); }};
        return phi;
    };
    std::uniform_real_distribution<double> u(3.0, 12.0);
    double worst_a = 0, worst_c = 0;
    for (int it = 0; it < 100; ++it) {
        Eigen::Vector2d p(u(rng), u(rng));
        worst_a = std::max(worst_a, pde_residual(pair_fields(eps_inv_beta_y(beta)), p));
        worst_c = std::max(worst_c, pde_residual(pair_fields(eps_beta_x_over_y(beta)), p));
    }
    r.check_bound("eps = 1/(beta y) residual", worst_a, 1e-6);
    r.check_bound("eps = beta x/y residual", worst_c, 1e-6);

    Box dom(Eigen::Vector3d(5.0, 5.0, 5.0), Eigen::Vector3d(10.0, 10.0, 10.0));
    auto sol = a3zero_solution(1.0, 1.0, 0.04, eps_quadratic(4.0, 0.2, 0.04), dom);
    double worst3 = 0;
    for (int it = 0; it < 100; ++it)
        worst3 = std::max(worst3, pde_residual(sol.phi, dom.sample_interior(rng, 0.1)));
    r.check_bound("A3 = 0 three-field residual", worst3, 1e-6);

    auto exy = eps_beta_x_over_y(1.0);
    r.check_bound("burgers residual of eps = x/y", std::abs(burgers_residual(exy, 3.0, 2.0)),
                  1e-9);
    return r;
}

inline VerificationReport verify_thm4(unsigned long seed) {
    VerificationReport r;
    r.suite = "thm4";
    const double rr = 2.0, S = 8.0, seam = 4.0;
    auto base = ball_lift_base(rr, S, -0.9, 0.9);
    auto lift = lift_map(base, 0.0, ball_lift_rotation(), 2 * M_PI / seam, 0.0,
                              {.lifted_hi = seam, .seed = seed});

    r.check_bound("H path defect", lift.path_defect, 1e-7);
    r.check_bound("sqrt(det q) spread (rel)", lift.gamma_spread_rel, 1e-9);
    r.check_close("gamma = r^2/3", lift.gamma, rr * rr / 3.0, 1e-9);

    auto ball = ball_map(rr, seam, S);
    std::mt19937_64 rng(seed + 5);
    double worst = 0;
    for (int it = 0; it < 100; ++it) {
        Eigen::VectorXd p = ball.domain.sample_interior(rng);
        Eigen::Vector3d q(p(2), p(1), p(0));
        worst = std::max(worst, (ball(p) - lift.lifted(q)).norm());
    }
    r.check_bound("lift reproduces the ball map", worst, 1e-12);

    auto rep = check_map_conditions(lift.lifted, 300, seed);
    r.check_bound("lifted off-diagonal (rel)", rep.max_offdiag_rel, 1e-6);
    r.check_bound("lifted det deviation (rel)", rep.max_det_dev_rel, 1e-5);
    return r;
}

}  // namespace cli_detail

inline int run_cli(std::vector<std::string> args) {
    using namespace cli_detail;
    CLI::App app{"aperiodic ball/disk/plane packings from density-stable lattices"};
    app.require_subcommand(1);

    CommonOpts opts;

    long vogel_s = 1;
    std::string vogel_basis_tag = "ii";
    double vogel_M = 500;
    auto* vogel = app.add_subcommand("vogel", "disk packing (Fermat spirals)");
    vogel->add_option("--s", vogel_s, "domain width; admissible values glue the seam")
        ->required();
    vogel->add_option("--basis", vogel_basis_tag, "lattice basis")
        ->check(CLI::IsMember({"i", "ii", "iii", "B2"}));
    vogel->add_option("--M", vogel_M, "birth-time extent");
    add_common(vogel, opts);

    long seam_index = 9;
    double log_M = 10;
    std::string log_basis_tag = "ii";
    auto* logspiral = app.add_subcommand("logspiral", "plane packing with logarithmic spirals");
    logspiral->add_option("--seam-index", seam_index, "convergent index for the seam width");
    logspiral->add_option("--M", log_M, "birth-time extent");
    logspiral->add_option("--basis", log_basis_tag, "lattice basis")
        ->check(CLI::IsMember({"ii", "B2"}));
    add_common(logspiral, opts);

    double ball_r = 20, ball_R = 20;
    long ball_s = 1;
    auto* ball = app.add_subcommand("ball", "3D ball packing");
    ball->add_option("--r", ball_r, "meridian radius");
    ball->add_option("--R", ball_R, "birth-time extent (image radius R^{1/3} r)");
    ball->add_option("--s", ball_s, "angular domain width (integer)");
    add_common(ball, opts);

    std::string burgers_profile = "linear";
    double burgers_M = 25;
    auto* burgers = app.add_subcommand("burgers", "packing from a Burgers characteristic fan");
    burgers->add_option("--profile", burgers_profile, "'linear' or a JSON file with t/h arrays");
    burgers->add_option("--M", burgers_M, "birth-time extent");
    add_common(burgers, opts);

    double doyle_wre = 0.15, doyle_wim = 0.9, doyle_extent = 2.5;
    auto* doyle = app.add_subcommand("doyle", "conformal exponential of a hexagonal lattice");
    doyle->add_option("--wre", doyle_wre, "Re(w)");
    doyle->add_option("--wim", doyle_wim, "Im(w)");
    doyle->add_option("--extent", doyle_extent, "half-width of the source box");
    add_common(doyle, opts);

    long markoff_bound = 100;
    auto* spectra = app.add_subcommand("spectra", "Markoff numbers and spectrum values");
    spectra->add_option("--markoff-bound", markoff_bound, "largest Markoff number to list");
    add_common(spectra, opts);

    std::string render_map_file, render_basis_file;
    auto* render = app.add_subcommand("render", "generate from JSON map and basis configs");
    render->add_option("--map", render_map_file, "map config JSON file")->required();
    render->add_option("--basis", render_basis_file, "basis JSON file")->required();
    add_common(render, opts);

    std::string suite = "lattices";
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("--suite", suite, "maps, lattices, pde, or thm4")
        ->check(CLI::IsMember({"maps", "lattices", "pde", "thm4"}));
    add_common(verify, opts);

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*vogel) {
            if (vogel_s < 1) throw std::invalid_argument("vogel: --s must be a positive integer");
            auto map = vogel_map(4 * M_PI / double(vogel_s), vogel_M);
            auto B = disk_basis(vogel_basis_tag);
            SeamChoice seam{disk_scheme(vogel_basis_tag), -1, double(vogel_s)};
            auto ps = generate_packing(map, B, opts.scale, seam);
            return emit(ps, map, B, opts);
        }
        if (*logspiral) {
            auto seam = seam_parameter(SeamScheme::logspiral, seam_index);
            auto map = logspiral_map(logspiral_beta_from_seam(seam.s), log_M);
            auto B = log_basis_tag == "B2" ? optimal_basis(2).basis
                                           : vogel_basis(VogelBasisKind::ii);
            auto ps = generate_packing(map, B, opts.scale, seam);
            return emit(ps, map, B, opts);
        }
        if (*ball) {
            if (ball_s < 1) throw std::invalid_argument("ball: --s must be a positive integer");
            auto map = ball_map(ball_r, double(ball_s), ball_R);
            auto B = optimal_basis(3).basis;
            SeamChoice seam{SeamScheme::basis_i, -1, double(ball_s)};
            auto ps = generate_packing(map, B, opts.scale, seam);
            return emit(ps, map, B, opts);
        }
        if (*burgers) {
            auto prof = burgers_profile == "linear" ? BurgersProfile::linear()
                                                    : profile_from_file(burgers_profile);
            auto map = burgers_map(prof, burgers_M);
            auto B = optimal_basis(2).basis;
            auto ps = generate_packing(map, B, opts.scale);
            return emit(ps, map, B, opts);
        }
        if (*doyle) {
            auto map = doyle_map({doyle_wre, doyle_wim}, doyle_extent);
            Eigen::MatrixXd hex(2, 2);
            hex << 1, 0.5, 0, std::sqrt(3.0) / 2;
            BasisMatrix B(hex, "hexagonal");
            auto ps = generate_packing(map, B, opts.scale);
            return emit(ps, map, B, opts);
        }
        if (*render) {
            std::ifstream mf(render_map_file);
            if (!mf) throw std::invalid_argument("render: cannot open " + render_map_file);
            auto map = map_from_json(nlohmann::json::parse(mf));
            std::ifstream bf(render_basis_file);
            if (!bf) throw std::invalid_argument("render: cannot open " + render_basis_file);
            auto B = basis_from_json(nlohmann::json::parse(bf));
            auto ps = generate_packing(map, B, opts.scale);
            return emit(ps, map, B, opts);
        }
        if (*spectra) {
            auto nums = markoff_numbers(markoff_bound);
            for (std::size_t i = 0; i < nums.size(); ++i)
                std::cout << (i ? " " : "") << nums[i].get_str();
            std::cout << "\n";
            if (!opts.out.empty()) {
                nlohmann::json j = nlohmann::json::array();
                for (const auto& m : nums) {
                    auto g = gamma_m(m);
                    auto L = lagrange_number(g);
                    j.push_back({{"m", m.get_si()},
                                 {"gamma", g.to_double()},
                                 {"lagrange", L.to_double()}});
                }
                std::ofstream out(opts.out, std::ios::binary);
                out << j.dump(2) << "\n";
            }
            return 0;
        }
        if (*verify) {
            VerificationReport rep;
            unsigned long seed = static_cast<unsigned long>(opts.seed);
            if (suite == "lattices") rep = verify_lattices(seed);
            else if (suite == "maps") rep = verify_maps(seed);
            else if (suite == "pde") rep = verify_pde(seed);
            else rep = verify_thm4(seed);
            auto j = report_to_json(rep);
            if (opts.out.empty()) {
                std::cout << j.dump(2) << "\n";
            } else {
                std::ofstream out(opts.out, std::ios::binary);
                out << j.dump(2) << "\n";
                std::cout << (rep.pass() ? "PASS " : "FAIL ") << suite << " -> " << opts.out
                          << "\n";
            }
            return rep.pass() ? 0 : 2;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

inline int run_cli(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(std::move(args));
}

}  // namespace parastichy
