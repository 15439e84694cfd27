#pragma once

// Markoff numbers, the quadratic irrationals gamma_m, Lagrange numbers, and
// box-enumeration estimates of Markoff values of indefinite binary forms.

#include <parastichy/exact.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace parastichy {

/// Solution of m1^2 + m2^2 + m3^2 = 3 m1 m2 m3, kept sorted ascending.
struct MarkoffTriple {
    Int m1, m2, m3;

    MarkoffTriple(Int a, Int b, Int c) : m1(std::move(a)), m2(std::move(b)), m3(std::move(c)) {
        if (m1 > m2) std::swap(m1, m2);
        if (m2 > m3) std::swap(m2, m3);
        if (m1 > m2) std::swap(m1, m2);
    }

    bool valid() const { return m1 * m1 + m2 * m2 + m3 * m3 == 3 * m1 * m2 * m3; }
    bool operator<(const MarkoffTriple& o) const {
        return std::tie(m1, m2, m3) < std::tie(o.m1, o.m2, o.m3);
    }
};

/// All triples whose largest element is <= bound, found by Vieta flips
/// (m3 -> 3 m1 m2 - m3) from (1,1,1). Branches are pruned as soon as the
/// flipped element exceeds the bound, which guarantees termination.
inline std::vector<MarkoffTriple> markoff_triples(const Int& bound) {
    if (bound < 1) throw std::invalid_argument("markoff_triples: bound must be >= 1");
    std::set<MarkoffTriple> seen;
    std::vector<MarkoffTriple> stack;
    stack.emplace_back(1, 1, 1);
    while (!stack.empty()) {
        MarkoffTriple t = stack.back();
        stack.pop_back();
        if (t.m3 > bound || !seen.insert(t).second) continue;
        stack.emplace_back(3 * t.m1 * t.m2 - t.m3, t.m1, t.m2);
        stack.emplace_back(3 * t.m1 * t.m3 - t.m2, t.m1, t.m3);
        stack.emplace_back(3 * t.m2 * t.m3 - t.m1, t.m2, t.m3);
    }
    return {seen.begin(), seen.end()};
}

/// Sorted, deduplicated Markoff numbers <= bound.
inline std::vector<Int> markoff_numbers(const Int& bound) {
    std::set<Int> nums;
    for (const auto& t : markoff_triples(bound)) {
        nums.insert(t.m1);
        nums.insert(t.m2);
        nums.insert(t.m3);
    }
    return {nums.begin(), nums.end()};
}

/// gamma_m = (m + 2u + sqrt(9 m^2 - 4)) / (2m) with 0 <= u <= m/2 and
/// u^2 = -1 (mod m).
///
/// For m with at least two distinct odd prime factors (first at m = 610)
/// that congruence has several solutions in [0, m/2]; only one of them
/// yields the Markoff irrational, recognizable by its expansion consisting
/// of 1s and 2s. The refined choice is required to be unique.
inline QuadraticIrrational gamma_m(const Int& m) {
    if (m < 1) throw std::invalid_argument("gamma_m: m must be positive");
    std::vector<Int> us;
    for (Int u = 0; 2 * u <= m; ++u) {
        if ((u * u + 1) % m == 0) us.push_back(u);
    }
    if (us.empty())
        throw std::domain_error("gamma_m: no u with u^2 = -1 (mod m); " + m.get_str() +
                                " is not a Markoff number");
    auto build = [&](const Int& u) {
        return QuadraticIrrational(m + 2 * u, 1, 2 * m, 9 * m * m - 4);
    };
    if (us.size() > 1) {
        std::vector<Int> markoff_like;
        for (const auto& u : us) {
            auto cf = cf_expand(build(u));
            bool small = cf.purely_periodic();
            for (const auto& a : cf.period) small = small && a >= 1 && a <= 2;
            if (small) markoff_like.push_back(u);
        }
        us = std::move(markoff_like);
        if (us.size() != 1)
            throw std::domain_error("gamma_m: candidate u with the Markoff property is not "
                                    "unique for " + m.get_str());
    }
    return build(us.front());
}

/// Exact Lagrange number of an irrational quadratic: the maximum over the
/// cyclic positions n of the periodic tail of
///   [a_{n+1}, a_{n+2}, ...] + [0, a_n, a_{n-1}, ...].
/// Only the tail contributes to the limsup, so the head is ignored.
inline QuadraticIrrational lagrange_number(const QuadraticIrrational& alpha) {
    if (alpha.is_rational())
        throw std::domain_error("lagrange_number: zero for rationals, formula inapplicable");
    CFExpansion cf = cf_expand(alpha);
    const auto& per = cf.period;
    const std::size_t k = per.size();

    QuadraticIrrational best;
    bool have = false;
    for (std::size_t j = 0; j < k; ++j) {
        CFExpansion fwd;  // tail starting at position j
        for (std::size_t i = 0; i < k; ++i) fwd.period.push_back(per[(j + i) % k]);
        CFExpansion bwd;  // reversed tail ending just before position j
        for (std::size_t i = 0; i < k; ++i) bwd.period.push_back(per[(j + k - 1 - i) % k]);
        QuadraticIrrational val = cf_eval(fwd) + cf_eval(bwd).inverse();
        if (!have || val > best) {
            best = val;
            have = true;
        }
    }
    return best;
}

/// Indefinite binary quadratic form a x^2 + b xy + c y^2 with coefficients
/// in a real quadratic field; d(f) = b^2 - 4ac must be positive.
struct IndefiniteForm {
    QuadraticIrrational a, b, c;

    IndefiniteForm(QuadraticIrrational a_, QuadraticIrrational b_, QuadraticIrrational c_)
        : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)) {
        if (discriminant().sign() <= 0)
            throw std::invalid_argument("IndefiniteForm: discriminant must be positive");
    }

    static IndefiniteForm from_roots(const QuadraticIrrational& phi1,
                                     const QuadraticIrrational& phi2) {
        // (x - phi1 y)(x - phi2 y)
        auto one = QuadraticIrrational::from_int(1);
        return IndefiniteForm(one, -(phi1 + phi2), phi1 * phi2);
    }

    QuadraticIrrational discriminant() const {
        auto four = QuadraticIrrational::from_int(4);
        return b * b - four * a * c;
    }

    QuadraticIrrational eval(const Int& x, const Int& y) const {
        return a * x * x + b * x * y + c * y * y;
    }
};

struct MarkoffValueResult {
    QuadraticIrrational value;    // sqrt(d(f)) / min|f| over the box
    QuadraticIrrational min_abs;  // the attained minimum |f(x, y)|
    long x = 0, y = 0;            // attaining pair
    long box = 0;
};

/// Markoff value estimate for f(x,y) = (x - phi1 y)(x - phi2 y) by exact
/// enumeration over 0 != (x,y), |x|,|y| <= box. The enumerated minimum is an
/// upper bound on m(f), hence the returned quotient is a lower-confidence
/// estimate of M(f) = sqrt(d(f))/m(f); the box is reported alongside.
/// A double-precision prefilter selects candidates, which are then compared
/// exactly; the slack far exceeds the rounding error of the filter.
inline MarkoffValueResult markoff_value(const QuadraticIrrational& phi1,
                                        const QuadraticIrrational& phi2, long box) {
    if (box < 1) throw std::invalid_argument("markoff_value: box must be >= 1");
    if (phi1 == phi2) throw std::invalid_argument("markoff_value: phi1 == phi2 is degenerate");

    const double p1 = phi1.to_double(), p2 = phi2.to_double();
    double min_d = std::numeric_limits<double>::infinity();
    for (long y = 0; y <= box; ++y) {
        for (long x = (y == 0) ? 1 : -box; x <= box; ++x) {
            double t = (x - p1 * y) * (x - p2 * y);
            min_d = std::min(min_d, std::abs(t));
        }
    }
    const double slack = 1e-6 * (1.0 + std::abs(min_d)) +
                         1e-9 * (1.0 + std::abs(p1) + std::abs(p2)) * double(box) * double(box);

    IndefiniteForm f = IndefiniteForm::from_roots(phi1, phi2);
    MarkoffValueResult res;
    res.box = box;
    bool have = false;
    for (long y = 0; y <= box; ++y) {
        for (long x = (y == 0) ? 1 : -box; x <= box; ++x) {
            double t = std::abs((x - p1 * y) * (x - p2 * y));
            if (t > min_d + slack) continue;
            QuadraticIrrational v = f.eval(x, y).abs();
            if (!have || v < res.min_abs) {
                res.min_abs = v;
                res.x = x;
                res.y = y;
                have = true;
            }
        }
    }
    res.value = (phi1 - phi2).abs() / res.min_abs;  // sqrt(d(f)) = |phi1 - phi2|
    return res;
}

}  // namespace parastichy
