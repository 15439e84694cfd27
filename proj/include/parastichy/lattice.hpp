#pragma once

// Lattices and their packing densities: shortest vectors, Selling-reduced
// superbases of the two-dimensional family L_{phi1,phi2,eps}, products of
// linear forms, diagonal-rescaling density bounds, and the totally real
// number-field bases behind the rank-2..5 density-stable lattices.

#include <parastichy/exact.hpp>
#include <parastichy/markoff.hpp>
#include <parastichy/parallel.hpp>

#include <Eigen/Dense>
#include <mpfr.h>
#include <nlohmann/json.hpp>

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace parastichy {

namespace detail {

// cos(2 pi k / p) evaluated at 256 bits and rounded once to double.
inline double cos_2pi(long k, long p) {
    mpfr_t pi, x;
    mpfr_init2(pi, 256);
    mpfr_init2(x, 256);
    mpfr_const_pi(pi, MPFR_RNDN);
    mpfr_mul_si(x, pi, 2 * k, MPFR_RNDN);
    mpfr_div_si(x, x, p, MPFR_RNDN);
    mpfr_cos(x, x, MPFR_RNDN);
    double r = mpfr_get_d(x, MPFR_RNDN);
    mpfr_clear(pi);
    mpfr_clear(x);
    return r;
}

inline double sqrt_hp(double v) {
    mpfr_t x;
    mpfr_init2(x, 256);
    mpfr_set_d(x, v, MPFR_RNDN);
    mpfr_sqrt(x, x, MPFR_RNDN);
    double r = mpfr_get_d(x, MPFR_RNDN);
    mpfr_clear(x);
    return r;
}

}  // namespace detail

/// Full-rank basis matrix; the columns are the lattice basis, so row i of B
/// is the i-th linear form x -> (Bx)_i.
struct BasisMatrix {
    Eigen::MatrixXd mat;
    std::string provenance = "custom";

    BasisMatrix(Eigen::MatrixXd m, std::string prov = "custom")
        : mat(std::move(m)), provenance(std::move(prov)) {
        if (mat.rows() != mat.cols() || mat.rows() < 1 || mat.rows() > 5)
            throw std::invalid_argument("BasisMatrix: square matrix of rank 1..5 required");
        if (std::abs(mat.determinant()) <= 1e-12)
            throw std::invalid_argument("BasisMatrix: rank deficient (|det| <= 1e-12)");
    }

    int n() const { return static_cast<int>(mat.rows()); }
    double det() const { return mat.determinant(); }
};

inline void to_json(nlohmann::json& j, const BasisMatrix& b) {
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < b.n(); ++i) {
        std::vector<double> row;
        for (int k = 0; k < b.n(); ++k) row.push_back(b.mat(i, k));
        rows.push_back(std::move(row));
    }
    j = nlohmann::json{{"n", b.n()}, {"rows", rows}, {"provenance", b.provenance}};
}

inline BasisMatrix basis_from_json(const nlohmann::json& j) {
    int n = j.at("n").get<int>();
    auto rows = j.at("rows").get<std::vector<std::vector<double>>>();
    if (static_cast<int>(rows.size()) != n)
        throw std::invalid_argument("basis_from_json: row count mismatch");
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != n)
            throw std::invalid_argument("basis_from_json: column count mismatch");
        for (int k = 0; k < n; ++k) m(i, k) = rows[i][k];
    }
    return BasisMatrix(m, j.value("provenance", std::string("custom")));
}

/// B_1-style pair basis: diag(eps^-1/2, eps^1/2) * [[1, -phi1], [1, -phi2]].
inline BasisMatrix pair_basis(const QuadraticIrrational& phi1, const QuadraticIrrational& phi2,
                              double eps = 1.0, std::string prov = "custom") {
    if (eps <= 0) throw std::invalid_argument("pair_basis: eps must be positive");
    double p1 = phi1.to_double(), p2 = phi2.to_double();
    double r = 1.0 / std::sqrt(eps), s = std::sqrt(eps);
    Eigen::MatrixXd m(2, 2);
    m << r, -r * p1, s, -s * p2;
    return BasisMatrix(m, std::move(prov));
}

/// Golden-family basis for a Markoff number m: rows are the two embeddings
/// of (1, -gamma_m).
inline BasisMatrix golden_basis(const Int& m) {
    auto g = gamma_m(m);
    return pair_basis(g, g.conjugate(), 1.0, "golden(" + m.get_str() + ")");
}

enum class VogelBasisKind { i, ii, iii };

/// The three disk-packing bases built from phi = 1/(1+gamma_1).
inline BasisMatrix vogel_basis(VogelBasisKind kind) {
    QuadraticIrrational phi(3, -1, 2, 5);      // (3 - sqrt5)/2
    QuadraticIrrational phibar(3, 1, 2, 5);    // (3 + sqrt5)/2
    double p = phi.to_double(), pb = phibar.to_double();
    Eigen::MatrixXd m(2, 2);
    switch (kind) {
        case VogelBasisKind::i:
            m << 1, -p, 0, -1;
            return BasisMatrix(m, "vogel(i)");
        case VogelBasisKind::ii:
            m << 1, -p, 1, -pb;
            return BasisMatrix(m, "vogel(ii)");
        case VogelBasisKind::iii:
            m << 0, -1, 1, -pb;
            return BasisMatrix(m, "vogel(iii)");
    }
    throw std::logic_error("vogel_basis: unreachable");
}

// ---------------------------------------------------------------------------
// Shortest vectors and packing density
// ---------------------------------------------------------------------------

struct ShortestVector {
    double norm2 = 0;
    Eigen::VectorXi coeffs;
};

enum class MinNormMethod { enumerate, oracle };

/// Shortest nonzero vector of the lattice with Gram matrix G, by bounded
/// depth-first enumeration with initial radius = the shortest basis vector.
inline ShortestVector min_norm_gram(const Eigen::MatrixXd& G) {
    const int n = static_cast<int>(G.rows());
    Eigen::LLT<Eigen::MatrixXd> llt(G);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("min_norm: Gram matrix not positive definite");
    Eigen::MatrixXd R = llt.matrixU();

    double best = G.diagonal().minCoeff() * (1.0 + 1e-12);
    Eigen::VectorXi x = Eigen::VectorXi::Zero(n);
    Eigen::VectorXi arg = Eigen::VectorXi::Zero(n);
    bool found = false;

    std::function<void(int, double)> descend = [&](int i, double partial) {
        if (i < 0) {
            if (x.isZero()) return;
            if (!found || partial < best) {
                best = partial;
                arg = x;
                found = true;
            }
            return;
        }
        double s = 0;
        for (int j = i + 1; j < n; ++j) s += R(i, j) * x(j);
        double center = -s / R(i, i);
        double room = best * (1.0 + 1e-12) - partial;
        if (room < 0) return;
        double radius = std::sqrt(room) / R(i, i);
        long lo = static_cast<long>(std::ceil(center - radius - 1e-9));
        long hi = static_cast<long>(std::floor(center + radius + 1e-9));
        for (long xi = lo; xi <= hi; ++xi) {
            x(i) = static_cast<int>(xi);
            double q = R(i, i) * xi + s;
            descend(i - 1, partial + q * q);
        }
        x(i) = 0;
    };
    descend(n - 1, 0.0);
    if (!found) throw std::runtime_error("min_norm: enumeration found no vector");
    for (int i = 0; i < n; ++i) {
        if (arg(i) == 0) continue;
        if (arg(i) < 0) arg = -arg;
        break;
    }
    return {best, arg};
}

/// Reference oracle: brute force over the coefficient box |x_i| <= box.
inline ShortestVector min_norm_oracle_gram(const Eigen::MatrixXd& G, long box) {
    const int n = static_cast<int>(G.rows());
    Eigen::VectorXi x = Eigen::VectorXi::Zero(n);
    Eigen::VectorXd xd(n);
    double best = std::numeric_limits<double>::infinity();
    Eigen::VectorXi arg = Eigen::VectorXi::Zero(n);
    std::function<void(int, bool)> rec = [&](int i, bool all_zero) {
        if (i == n) {
            if (all_zero) return;
            for (int k = 0; k < n; ++k) xd(k) = x(k);
            double v = xd.dot(G * xd);
            if (v < best) {
                best = v;
                arg = x;
            }
            return;
        }
        for (long xi = all_zero ? 0 : -box; xi <= box; ++xi) {
            x(i) = static_cast<int>(xi);
            rec(i + 1, all_zero && xi == 0);
        }
    };
    rec(0, true);
    return {best, arg};
}

inline ShortestVector min_norm(const BasisMatrix& B, MinNormMethod method = MinNormMethod::enumerate,
                               long oracle_box = 25) {
    Eigen::MatrixXd G = B.mat.transpose() * B.mat;
    return method == MinNormMethod::enumerate ? min_norm_gram(G)
                                              : min_norm_oracle_gram(G, oracle_box);
}

inline double unit_ball_volume(int n) {
    return std::pow(M_PI, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

/// Delta(L) = vol(B(1)) (min L)^{n/2} / (2^n |det B|).
inline double packing_density(const BasisMatrix& B) {
    int n = B.n();
    double minL = min_norm(B).norm2;
    return unit_ball_volume(n) * std::pow(minL, n / 2.0) /
           (std::pow(2.0, n) * std::abs(B.det()));
}

inline double packing_density_gram(const Eigen::MatrixXd& G) {
    int n = static_cast<int>(G.rows());
    double minL = min_norm_gram(G).norm2;
    return unit_ball_volume(n) * std::pow(minL, n / 2.0) /
           (std::pow(2.0, n) * std::sqrt(G.determinant()));
}

// ---------------------------------------------------------------------------
// Selling-reduced superbasis of L_{phi1, phi2, eps}
// ---------------------------------------------------------------------------

struct SuperbasisResult {
    Eigen::Vector2d u1, u2, u3;
    long N = 0;  // sign-change index: n >= N  <=>  b_n . b_{n-1} >= 0
    long d = 0;
    Eigen::Vector2d shortest;
};

namespace detail {

// Lazy evaluator of the basis chain b_n = a_{n-1} b_{n-1} + b_{n-2}.
class SellingChain {
public:
    SellingChain(const QuadraticIrrational& phi1, const QuadraticIrrational& phi2, double eps,
                 long window)
        : seq_(bi_sequence(phi1, phi2)), window_(window) {
        double re = 1.0 / std::sqrt(eps), se = std::sqrt(eps);
        memo_[0] = Eigen::Vector2d(re, se);
        memo_[-1] = Eigen::Vector2d(-re * phi1.to_double(), -se * phi2.to_double());
    }

    long quotient(long n) const {
        Int a = seq_.at(n);
        if (!a.fits_slong_p()) throw std::runtime_error("selling chain: partial quotient overflow");
        return a.get_si();
    }

    const Eigen::Vector2d& b(long n) {
        auto it = memo_.find(n);
        if (it != memo_.end()) return it->second;
        if (std::labs(n) > window_)
            throw std::runtime_error("selling_superbasis: window exhausted before sign change");
        Eigen::Vector2d v;
        if (n > 0)
            v = double(quotient(n - 1)) * b(n - 1) + b(n - 2);
        else
            v = b(n + 2) - double(quotient(n + 1)) * b(n + 1);
        return memo_.emplace(n, v).first->second;
    }

private:
    BiSequence seq_;
    long window_;
    std::map<long, Eigen::Vector2d> memo_;
};

}  // namespace detail

/// Basis vectors b_lo..b_hi of the chain, for inspecting the monotone
/// sequence b_n . b_{n-1}.
inline std::vector<Eigen::Vector2d> selling_basis_vectors(const QuadraticIrrational& phi1,
                                                          const QuadraticIrrational& phi2,
                                                          double eps, long lo, long hi) {
    if (eps <= 0) throw std::invalid_argument("selling_basis_vectors: eps must be positive");
    detail::SellingChain chain(phi1, phi2, eps, std::max(std::labs(lo), std::labs(hi)) + 2);
    std::vector<Eigen::Vector2d> out;
    for (long n = lo; n <= hi; ++n) out.push_back(chain.b(n));
    return out;
}

/// Selling-reduced superbasis of L_{phi1,phi2,eps}: locates the sign change
/// of b_n . b_{n-1}, then the smallest 1 <= d <= a_{N-1} with
/// (d b_{N-1} + b_{N-2}) . b_{N-1} >= 0. The shortest lattice vector is one
/// of b_{N-2}, b_{N-1}, b_N.
inline SuperbasisResult selling_superbasis(const QuadraticIrrational& phi1,
                                           const QuadraticIrrational& phi2, double eps,
                                           long window = 300) {
    if (eps <= 0) throw std::invalid_argument("selling_superbasis: eps must be positive");
    detail::SellingChain chain(phi1, phi2, eps, window);
    auto dot = [&](long n) { return chain.b(n).dot(chain.b(n - 1)); };

    long N = 0;
    if (dot(0) >= 0) {
        while (dot(N - 1) >= 0) --N;
    } else {
        while (dot(N) < 0) ++N;
    }

    const Eigen::Vector2d bN = chain.b(N), bN1 = chain.b(N - 1), bN2 = chain.b(N - 2);
    long aN1 = chain.quotient(N - 1);
    long d = static_cast<long>(std::ceil(-bN2.dot(bN1) / bN1.squaredNorm() - 1e-12));
    d = std::max<long>(1, d);
    if (d > aN1) d = aN1;

    SuperbasisResult res;
    res.N = N;
    res.d = d;
    res.u1 = bN1;
    res.u2 = double(d - 1) * bN1 + bN2;
    res.u3 = -res.u1 - res.u2;
    res.shortest = bN2;
    if (bN1.squaredNorm() < res.shortest.squaredNorm()) res.shortest = bN1;
    if (bN.squaredNorm() < res.shortest.squaredNorm()) res.shortest = bN;
    return res;
}

// ---------------------------------------------------------------------------
// Products of linear forms
// ---------------------------------------------------------------------------

struct LinearFormResult {
    double value = 0;
    Eigen::VectorXi x;
};

/// min over 0 != x in Z^n, |x_i| <= box, of |prod_i (row_i . x)| for a basis
/// normalized to |det| = 1. Upper-bound estimate of lambda(B).
inline LinearFormResult linear_form_product(const BasisMatrix& B, long box) {
    if (box < 1) throw std::invalid_argument("linear_form_product: box must be >= 1");
    if (std::abs(std::abs(B.det()) - 1.0) > 1e-9)
        throw std::invalid_argument("linear_form_product: determinant must be +-1 (normalize first)");

    const int n = B.n();
    const Eigen::MatrixXd& m = B.mat;

    struct Best {
        double value = std::numeric_limits<double>::infinity();
        std::vector<long> x;
    };

    auto search_slice = [&](long x0_lo, long x0_hi, long stride, bool from_zero) {
        Best best;
        std::vector<long> x(n, 0);
        std::vector<std::vector<double>> partial(n + 1, std::vector<double>(n, 0.0));
        std::function<void(int, bool)> rec = [&](int level, bool all_zero) {
            if (level == n) {
                if (all_zero) return;
                double prod = 1;
                for (int i = 0; i < n; ++i) prod *= partial[n][i];
                prod = std::abs(prod);
                if (prod < best.value ||
                    (prod == best.value && !best.x.empty() && x < best.x)) {
                    best.value = prod;
                    best.x = x;
                }
                return;
            }
            long lo, hi, step = 1;
            if (level == 0) {
                lo = x0_lo;
                hi = x0_hi;
                step = stride;
            } else {
                lo = all_zero ? 0 : -box;
                hi = box;
            }
            for (long xi = lo; xi <= hi; xi += step) {
                for (int i = 0; i < n; ++i)
                    partial[level + 1][i] = partial[level][i] + m(i, level) * double(xi);
                x[level] = xi;
                rec(level + 1, all_zero && xi == 0);
            }
        };
        // first nonzero coordinate positive (sign symmetry of the product)
        if (from_zero) rec(0, true);
        else rec(0, false);
        return best;
    };

    int workers = std::min<long>(max_threads(), box + 1);
    Best merged;
    if (workers <= 1) {
        merged = search_slice(0, box, 1, true);
    } else {
        std::vector<Best> results(workers);
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] { results[w] = search_slice(w, box, workers, w == 0); });
        }
        for (auto& t : pool) t.join();
        for (const auto& r : results) {
            if (r.value < merged.value ||
                (r.value == merged.value && !r.x.empty() && (merged.x.empty() || r.x < merged.x)))
                merged = r;
        }
    }

    LinearFormResult res;
    res.value = merged.value;
    res.x = Eigen::VectorXi(n);
    for (int i = 0; i < n; ++i) res.x(i) = static_cast<int>(merged.x[i]);
    return res;
}

// ---------------------------------------------------------------------------
// Density-stability bounds Delta'
// ---------------------------------------------------------------------------

/// Delta' from a known product-of-linear-forms value: lambda' = n lambda^{2/n},
/// Delta' = (pi lambda'/4)^{n/2} / Gamma(n/2 + 1).
inline double delta_prime(const BasisMatrix& B, double lambda) {
    if (lambda <= 0) throw std::domain_error("delta_prime: lambda must be positive");
    int n = B.n();
    double lambda_prime = n * std::pow(lambda, 2.0 / n);
    return std::pow(M_PI * lambda_prime / 4.0, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

struct LogGrid {
    int points_per_axis = 41;
    double log_lo = -4.0;
    double log_hi = 4.0;
    int refine_passes = 1;
};

/// Sampled infimum of Delta(L(D B)) over determinant-one diagonal D with
/// log-spaced entries, plus local refinement around the argmin. Reported as
/// a (non-certified) upper bound on Delta'(L(B)).
inline double delta_prime_numeric(const BasisMatrix& B, const LogGrid& grid = {}) {
    if (grid.points_per_axis < 2) throw std::invalid_argument("delta_prime_numeric: empty grid");
    const int n = B.n();
    const int axes = n - 1;
    const int P = grid.points_per_axis;

    std::vector<double> lo(axes, grid.log_lo), hi(axes, grid.log_hi);
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> best_t(axes, 0.0);

    if (axes == 0) return packing_density(B);

    for (int pass = 0; pass <= grid.refine_passes; ++pass) {
        std::vector<int> idx(axes, 0);
        bool done = false;
        while (!done) {
            std::vector<double> t(axes);
            double sum = 0;
            for (int a = 0; a < axes; ++a) {
                t[a] = lo[a] + (hi[a] - lo[a]) * idx[a] / (P - 1);
                sum += t[a];
            }
            Eigen::VectorXd diag(n);
            for (int a = 0; a < axes; ++a) diag(a) = std::exp(t[a]);
            diag(n - 1) = std::exp(-sum);
            Eigen::MatrixXd DB = diag.asDiagonal() * B.mat;
            double dens = packing_density_gram(DB.transpose() * DB);
            if (dens < best) {
                best = dens;
                best_t = t;
            }
            int a = 0;
            while (a < axes && ++idx[a] == P) idx[a++] = 0;
            done = (a == axes);
        }
        for (int a = 0; a < axes; ++a) {
            double span = (hi[a] - lo[a]) / 4.0;
            lo[a] = best_t[a] - span;
            hi[a] = best_t[a] + span;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Optimal bases from totally real fields (ranks 2..5)
// ---------------------------------------------------------------------------

/// Integral basis data of the field behind an optimal basis: generator
/// minimal polynomial (ascending coefficients), real embeddings of the basis
/// elements, and the field discriminant.
struct NumberFieldBasis {
    std::string field;
    std::vector<long> min_poly;
    Eigen::MatrixXd embeddings;  // (i, j) = sigma_i(b_j)
    Int discriminant;
};

struct OptimalBasis {
    NumberFieldBasis nf;
    BasisMatrix basis;
};

namespace detail {

// Row-style Hermite normal form of the lattice spanned by integer rows;
// returns a full-rank upper-triangular 4x4 basis.
inline std::array<std::array<long, 4>, 4> hnf4(std::vector<std::array<long, 4>> rows) {
    int r = 0;
    for (int c = 0; c < 4 && r < 4; ++c) {
        for (;;) {
            int pivot = -1;
            long pmin = 0;
            for (int i = r; i < static_cast<int>(rows.size()); ++i) {
                long v = std::labs(rows[i][c]);
                if (v != 0 && (pivot < 0 || v < pmin)) {
                    pivot = i;
                    pmin = v;
                }
            }
            if (pivot < 0) break;
            std::swap(rows[r], rows[pivot]);
            bool clean = true;
            for (int i = r + 1; i < static_cast<int>(rows.size()); ++i) {
                if (rows[i][c] == 0) continue;
                long q = rows[i][c] / rows[r][c];
                for (int k = 0; k < 4; ++k) rows[i][k] -= q * rows[r][k];
                if (rows[i][c] != 0) clean = false;
            }
            if (clean) break;
        }
        if (r < static_cast<int>(rows.size()) && rows[r][c] != 0) {
            if (rows[r][c] < 0)
                for (int k = 0; k < 4; ++k) rows[r][k] = -rows[r][k];
            for (int i = 0; i < r; ++i) {
                long q = rows[i][c] / rows[r][c];
                if (rows[i][c] % rows[r][c] < 0) q -= 1;
                for (int k = 0; k < 4; ++k) rows[i][k] -= q * rows[r][k];
            }
            ++r;
        }
    }
    if (r != 4) throw std::runtime_error("hnf4: generators do not span rank 4");
    std::array<std::array<long, 4>, 4> out{};
    for (int i = 0; i < 4; ++i) out[i] = rows[i];
    return out;
}

// Integral basis of Q(sqrt(7+2 sqrt 5)) by searching eighth-integer
// combinations of powers of theta for algebraic integers, then taking the
// HNF of everything found. Verified downstream by trace-form determinant.
inline std::pair<Eigen::MatrixXd, std::array<std::array<long, 4>, 4>> quartic_integral_basis() {
    const double s5 = sqrt_hp(5.0);
    const std::array<double, 4> theta = {sqrt_hp(7 + 2 * s5), -sqrt_hp(7 + 2 * s5),
                                         sqrt_hp(7 - 2 * s5), -sqrt_hp(7 - 2 * s5)};

    auto is_alg_integer = [&](const std::array<long, 4>& v) {
        std::array<double, 4> e{};
        for (int i = 0; i < 4; ++i) {
            double t = theta[i];
            e[i] = (v[0] + v[1] * t + v[2] * t * t + v[3] * t * t * t) / 8.0;
        }
        // elementary symmetric functions must be integers
        double s1 = e[0] + e[1] + e[2] + e[3];
        double s2 = e[0] * e[1] + e[0] * e[2] + e[0] * e[3] + e[1] * e[2] + e[1] * e[3] +
                    e[2] * e[3];
        double s3 = e[0] * e[1] * e[2] + e[0] * e[1] * e[3] + e[0] * e[2] * e[3] +
                    e[1] * e[2] * e[3];
        double s4 = e[0] * e[1] * e[2] * e[3];
        auto near_int = [](double x) { return std::abs(x - std::round(x)) < 1e-6; };
        return near_int(s1) && near_int(s2) && near_int(s3) && near_int(s4);
    };

    std::vector<std::array<long, 4>> gens;
    for (int i = 0; i < 4; ++i) {
        std::array<long, 4> unit{};
        unit[i] = 8;  // theta^i itself
        gens.push_back(unit);
    }
    for (long v0 = 0; v0 < 8; ++v0)
        for (long v1 = 0; v1 < 8; ++v1)
            for (long v2 = 0; v2 < 8; ++v2)
                for (long v3 = 0; v3 < 8; ++v3) {
                    std::array<long, 4> v{v0, v1, v2, v3};
                    if ((v0 | v1 | v2 | v3) == 0) continue;
                    if (is_alg_integer(v)) gens.push_back(v);
                }

    auto H = hnf4(std::move(gens));
    Eigen::MatrixXd emb(4, 4);
    for (int j = 0; j < 4; ++j) {
        for (int i = 0; i < 4; ++i) {
            double t = theta[i];
            emb(i, j) = (H[j][0] + H[j][1] * t + H[j][2] * t * t + H[j][3] * t * t * t) / 8.0;
        }
    }
    return {emb, H};
}

}  // namespace detail

/// The rank-n density-stable basis: rows are
/// the real embeddings of an integral basis of K_n. n in {2, 3, 4, 5}.
inline OptimalBasis optimal_basis(int n) {
    NumberFieldBasis nf;
    Eigen::MatrixXd emb;
    switch (n) {
        case 2: {
            nf.field = "Q(sqrt(5))";
            nf.min_poly = {-1, -1, 1};  // x^2 - x - 1 for (1+sqrt5)/2
            nf.discriminant = 5;
            double g = (1.0 + detail::sqrt_hp(5.0)) / 2.0;
            double gbar = (1.0 - detail::sqrt_hp(5.0)) / 2.0;
            emb.resize(2, 2);
            emb << 1, g, 1, gbar;
            break;
        }
        case 3: {
            nf.field = "Q(2cos(2pi/7))";
            nf.min_poly = {-1, -2, 1, 1};  // x^3 + x^2 - 2x - 1
            nf.discriminant = 49;
            emb.resize(3, 3);
            for (int i = 0; i < 3; ++i) {
                double alpha = 2.0 * detail::cos_2pi(i + 1, 7);
                for (int j = 0; j < 3; ++j) emb(i, j) = std::pow(alpha, j);
            }
            break;
        }
        case 4: {
            nf.field = "Q(sqrt(7+2sqrt(5)))";
            nf.min_poly = {29, 0, -14, 0, 1};  // x^4 - 14 x^2 + 29
            nf.discriminant = 725;
            emb = detail::quartic_integral_basis().first;
            break;
        }
        case 5: {
            nf.field = "Q(2cos(2pi/11))";
            nf.min_poly = {1, 3, -3, -4, 1, 1};  // x^5 + x^4 - 4x^3 - 3x^2 + 3x + 1
            nf.discriminant = 14641;
            emb.resize(5, 5);
            for (int i = 0; i < 5; ++i) {
                double alpha = 2.0 * detail::cos_2pi(i + 1, 11);
                for (int j = 0; j < 5; ++j) emb(i, j) = std::pow(alpha, j);
            }
            break;
        }
        default:
            throw std::invalid_argument("optimal_basis: n must be in 2..5");
    }
    nf.embeddings = emb;
    double det2 = emb.determinant() * emb.determinant();
    double dk = nf.discriminant.get_d();
    if (std::abs(det2 - dk) > 1e-6 * dk)
        throw std::runtime_error("optimal_basis: embedding determinant fails det^2 = d_K");
    return {nf, BasisMatrix(emb, "B" + std::to_string(n))};
}

/// Known exact products of linear forms for the normalized optimal bases.
inline double known_lambda(int n) {
    switch (n) {
        case 2: return 1.0 / std::sqrt(5.0);
        case 3: return 1.0 / 7.0;
        case 4: return 1.0 / (5.0 * std::sqrt(29.0));
        case 5: return 1.0 / 121.0;
        default: throw std::invalid_argument("known_lambda: n must be in 2..5");
    }
}

/// d_K^(-1/2n) B_n, the |det| = 1 normalization used for linear forms.
inline BasisMatrix normalized_optimal_basis(int n) {
    auto ob = optimal_basis(n);
    double scale = std::pow(ob.nf.discriminant.get_d(), -0.5 / n);
    return BasisMatrix(scale * ob.basis.mat, ob.basis.provenance + "-normalized");
}

}  // namespace parastichy
