#pragma once

// Exact arithmetic over real quadratic fields Q(sqrt(d)) and eventually
// periodic continued fractions, including the doubly infinite partial
// quotient sequence attached to a pair phi1 > 0 > phi2.

#include <gmpxx.h>

#include <cstdlib>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace parastichy {

using Int = mpz_class;
using Rational = mpq_class;

namespace detail {

// Splits n = s^2 * r with r squarefree; returns (s, r). n > 0.
inline std::pair<Int, Int> extract_square_part(Int n) {
    Int s = 1;
    Int p = 2;
    while (p * p <= n) {
        Int p2 = p * p;
        while (mpz_divisible_p(n.get_mpz_t(), p2.get_mpz_t())) {
            n /= p2;
            s *= p;
        }
        p += (p == 2) ? 1 : 2;
    }
    return {s, n};
}

inline Int isqrt(const Int& n) {
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline Int floor_div(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

}  // namespace detail

/// Exact value (a + b*sqrt(d)) / c with gcd(a,b,c) = 1, c > 0, d squarefree.
/// b = 0 encodes a rational (d normalizes to 1 in that case).
class QuadraticIrrational {
public:
    QuadraticIrrational() : a_(0), b_(0), c_(1), d_(1) {}

    QuadraticIrrational(Int a, Int b, Int c, Int d)
        : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
        if (c_ == 0) throw std::invalid_argument("QuadraticIrrational: c = 0");
        if (b_ != 0 && d_ <= 0)
            throw std::invalid_argument("QuadraticIrrational: d must be positive");
        normalize();
    }

    static QuadraticIrrational from_rational(const Rational& r) {
        return QuadraticIrrational(Int(r.get_num()), 0, Int(r.get_den()), 1);
    }
    static QuadraticIrrational from_int(const Int& n) { return {n, 0, 1, 1}; }

    const Int& a() const { return a_; }
    const Int& b() const { return b_; }
    const Int& c() const { return c_; }
    const Int& d() const { return d_; }

    bool is_rational() const { return b_ == 0; }

    Rational to_rational() const {
        if (!is_rational()) throw std::domain_error("value is irrational");
        Rational r(a_, c_);
        r.canonicalize();
        return r;
    }

    QuadraticIrrational conjugate() const {
        QuadraticIrrational r(*this);
        r.b_ = -r.b_;
        return r;
    }

    int sign() const {
        // sign of a + b*sqrt(d)  (c > 0)
        int sa = mpz_sgn(a_.get_mpz_t()), sb = mpz_sgn(b_.get_mpz_t());
        if (sb == 0) return sa;
        if (sa == 0) return sb;
        if (sa == sb) return sa;
        Int lhs = a_ * a_, rhs = b_ * b_ * d_;
        int cmp = mpz_cmp(lhs.get_mpz_t(), rhs.get_mpz_t());
        // |a| vs |b|sqrt(d); equality impossible for b != 0, d non-square
        return cmp > 0 ? sa : sb;
    }

    Int floor() const {
        if (b_ == 0) return detail::floor_div(a_, c_);
        Int t = b_ * b_ * d_;
        Int s = detail::isqrt(t);
        Int num;
        if (b_ > 0) {
            num = a_ + s;  // a + b*sqrt(d) in [a+s, a+s+1)
        } else {
            Int corr = (s * s == t) ? Int(0) : Int(1);
            num = a_ - s - corr;
        }
        return detail::floor_div(num, c_);
    }

    QuadraticIrrational operator-() const {
        QuadraticIrrational r(*this);
        r.a_ = -r.a_;
        r.b_ = -r.b_;
        return r;
    }

    QuadraticIrrational operator+(const QuadraticIrrational& o) const {
        Int d = merged_d(o);
        return QuadraticIrrational(a_ * o.c_ + o.a_ * c_, b_ * o.c_ + o.b_ * c_, c_ * o.c_, d);
    }
    QuadraticIrrational operator-(const QuadraticIrrational& o) const { return *this + (-o); }

    QuadraticIrrational operator*(const QuadraticIrrational& o) const {
        Int d = merged_d(o);
        return QuadraticIrrational(a_ * o.a_ + b_ * o.b_ * d, a_ * o.b_ + o.a_ * b_, c_ * o.c_, d);
    }

    QuadraticIrrational inverse() const {
        if (a_ == 0 && b_ == 0) throw std::domain_error("division by zero");
        // c/(a + b sqrt(d)) = c(a - b sqrt(d))/(a^2 - b^2 d)
        Int den = a_ * a_ - b_ * b_ * d_;
        if (den > 0) return QuadraticIrrational(c_ * a_, -c_ * b_, den, d_);
        return QuadraticIrrational(-c_ * a_, c_ * b_, -den, d_);
    }
    QuadraticIrrational operator/(const QuadraticIrrational& o) const { return *this * o.inverse(); }

    QuadraticIrrational operator+(const Int& n) const {
        return QuadraticIrrational(a_ + n * c_, b_, c_, d_);
    }
    QuadraticIrrational operator*(const Int& n) const {
        return QuadraticIrrational(a_ * n, b_ * n, c_, d_);
    }

    QuadraticIrrational abs() const { return sign() < 0 ? -*this : *this; }

    bool operator==(const QuadraticIrrational& o) const {
        if (b_ == 0 && o.b_ == 0) return a_ * o.c_ == o.a_ * c_;
        return a_ == o.a_ && b_ == o.b_ && c_ == o.c_ && d_ == o.d_;
    }
    bool operator!=(const QuadraticIrrational& o) const { return !(*this == o); }
    bool operator<(const QuadraticIrrational& o) const { return (*this - o).sign() < 0; }
    bool operator>(const QuadraticIrrational& o) const { return (*this - o).sign() > 0; }
    bool operator<=(const QuadraticIrrational& o) const { return (*this - o).sign() <= 0; }
    bool operator>=(const QuadraticIrrational& o) const { return (*this - o).sign() >= 0; }

    double to_double() const {
        // Work at enough precision to survive cancellation between a and b*sqrt(d).
        mp_bitcnt_t prec = 64;
        prec += mpz_sizeinbase(a_.get_mpz_t(), 2);
        prec += mpz_sizeinbase(b_.get_mpz_t(), 2);
        prec += mpz_sizeinbase(c_.get_mpz_t(), 2);
        mpf_class fa(a_, prec), fb(b_, prec), fc(c_, prec), fd(d_, prec);
        mpf_class r = (fa + fb * sqrt(fd)) / fc;
        return r.get_d();
    }

private:
    Int merged_d(const QuadraticIrrational& o) const {
        if (b_ == 0) return o.d_;
        if (o.b_ == 0) return d_;
        if (d_ != o.d_)
            throw std::invalid_argument("mixed quadratic fields: d = " + d_.get_str() + " vs " +
                                        o.d_.get_str());
        return d_;
    }

    void normalize() {
        if (c_ < 0) {
            a_ = -a_;
            b_ = -b_;
            c_ = -c_;
        }
        if (b_ != 0 && d_ > 1) {
            auto [s, r] = detail::extract_square_part(d_);
            b_ *= s;
            d_ = r;
        }
        if (d_ == 1) {
            a_ += b_;
            b_ = 0;
        }
        if (b_ == 0) d_ = 1;
        Int g = gcd(gcd(a_, b_), c_);
        if (g > 1) {
            a_ /= g;
            b_ /= g;
            c_ /= g;
        }
    }

    Int a_, b_, c_, d_;
};

/// Eventually periodic continued fraction [head; overline(period)].
/// Empty period encodes a rational (finite expansion).
struct CFExpansion {
    std::vector<Int> head;
    std::vector<Int> period;

    bool purely_periodic() const { return head.empty() && !period.empty(); }
    bool is_finite() const { return period.empty(); }

    /// Partial quotient a_n (period repeats forever).
    Int quotient(std::size_t n) const {
        if (n < head.size()) return head[n];
        if (period.empty()) throw std::out_of_range("finite expansion exhausted");
        return period[(n - head.size()) % period.size()];
    }

    bool valid() const {
        for (std::size_t i = 1; i < head.size(); ++i)
            if (head[i] < 1) return false;
        for (const auto& a : period)
            if (a < 1) return false;
        return true;
    }

    std::string str() const {
        std::string s = "[";
        for (std::size_t i = 0; i < head.size(); ++i)
            s += (i ? "," : "") + head[i].get_str();
        if (!period.empty()) {
            s += head.empty() ? "(" : ";(";
            for (std::size_t i = 0; i < period.size(); ++i)
                s += (i ? "," : "") + period[i].get_str();
            s += ")";
        }
        return s + "]";
    }
};

/// Exact continued fraction expansion. Period detected by repetition of the
/// reduced-surd (P, Q) state; no floating point involved.
inline CFExpansion cf_expand(const QuadraticIrrational& x) {
    CFExpansion cf;
    if (x.is_rational()) {
        Rational r = x.to_rational();
        Int p = r.get_num(), q = r.get_den();
        while (q != 0) {
            Int a = detail::floor_div(p, q);
            cf.head.push_back(a);
            Int rem = p - a * q;
            p = q;
            q = rem;
        }
        return cf;
    }

    // x = (P + sqrt(D)) / Q with Q | (D - P^2)
    Int P, Q, D;
    if (x.b() > 0) {
        P = x.a();
        Q = x.c();
        D = x.b() * x.b() * x.d();
    } else {
        P = -x.a();
        Q = -x.c();
        D = x.b() * x.b() * x.d();
    }
    if ((D - P * P) % Q != 0) {
        Int q_abs = ::abs(Q);
        P *= q_abs;
        D *= q_abs * q_abs;
        Q *= q_abs;
    }

    // The CF step reaches a reduced state after finitely many iterations and
    // then cycles through reduced states, so remembering the first reduced
    // (P, Q) is enough to detect the period exactly.
    const Int s = detail::isqrt(D);
    auto reduced = [&](const Int& p, const Int& q) {
        return q > 0 && p >= 1 && p <= s && q - p <= s && p + q > s;
    };

    std::vector<Int> quotients;
    Int P0, Q0;
    bool anchored = false;
    std::size_t anchor = 0;
    for (;;) {
        if (!anchored && reduced(P, Q)) {
            anchored = true;
            anchor = quotients.size();
            P0 = P;
            Q0 = Q;
        } else if (anchored && P == P0 && Q == Q0) {
            cf.head.assign(quotients.begin(), quotients.begin() + anchor);
            cf.period.assign(quotients.begin() + anchor, quotients.end());
            break;
        }
        Int a = (Q > 0) ? detail::floor_div(P + s, Q) : detail::floor_div(-P - s - 1, -Q);
        quotients.push_back(a);
        Int Pn = a * Q - P;
        Int Qn = (D - Pn * Pn) / Q;
        P = Pn;
        Q = Qn;
        if (quotients.size() > 100000000)
            throw std::runtime_error("cf_expand: period not found");
    }

    // Canonical form: fold head entries that merely rotate the period,
    // so purely periodic values get an empty head.
    while (!cf.head.empty() && cf.head.back() == cf.period.back()) {
        cf.head.pop_back();
        cf.period.insert(cf.period.begin(), cf.period.back());
        cf.period.pop_back();
    }
    return cf;
}

/// Convergents p_n/q_n for n = -2, -1, 0, ..., upto (index i holds n = i-2).
/// Seeds: (p_-1, q_-1) = (1, 0), (p_-2, q_-2) = (0, 1).
inline std::vector<std::pair<Int, Int>> convergents(const CFExpansion& cf, long upto) {
    if (upto < -2) throw std::invalid_argument("convergents: upto < -2");
    std::vector<std::pair<Int, Int>> pq;
    pq.reserve(static_cast<std::size_t>(upto + 3));
    pq.emplace_back(0, 1);  // n = -2
    if (upto >= -1) pq.emplace_back(1, 0);
    for (long n = 0; n <= upto; ++n) {
        Int a = cf.quotient(static_cast<std::size_t>(n));
        const auto& [p1, q1] = pq[pq.size() - 1];
        const auto& [p2, q2] = pq[pq.size() - 2];
        pq.emplace_back(a * p1 + p2, a * q1 + q2);
    }
    return pq;
}

/// Value of a continued fraction as an exact quadratic irrational.
inline QuadraticIrrational cf_eval(const CFExpansion& cf) {
    if (cf.is_finite()) {
        if (cf.head.empty()) throw std::invalid_argument("cf_eval: empty expansion");
        Rational v(cf.head.back());
        for (std::size_t i = cf.head.size() - 1; i-- > 0;) {
            if (v == 0) throw std::domain_error("cf_eval: division by zero in finite expansion");
            v = Rational(cf.head[i]) + 1 / v;
        }
        return QuadraticIrrational::from_rational(v);
    }

    for (const auto& a : cf.period)
        if (a < 1) throw std::invalid_argument("cf_eval: nonpositive period entry");

    // Fixed point of the period's Moebius map: y = (p y + q)/(r y + s).
    Int p = 1, q = 0, r = 0, s = 1;
    for (const auto& a : cf.period) {
        Int np = p * a + q, nq = p;
        Int nr = r * a + s, ns = r;
        p = np;
        q = nq;
        r = nr;
        s = ns;
    }
    // r y^2 + (s - p) y - q = 0. Reduce to the primitive equation first:
    // its discriminant is the small one of the underlying field order, while
    // the raw matrix entries (and their discriminant) grow with the period.
    Int A = r, B = s - p, C = -q;
    Int g = gcd(gcd(A, B), C);
    A /= g;
    B /= g;
    C /= g;
    Int disc = B * B - 4 * A * C;
    QuadraticIrrational y(-B, 1, 2 * A, disc);  // positive root (> 1)

    for (std::size_t i = cf.head.size(); i-- > 0;) {
        y = y.inverse() + cf.head[i];
    }
    return y;
}

/// Doubly infinite partial quotient sequence of a pair phi1 > 0 > phi2:
/// nonnegative indices from the expansion of phi1, negative indices from
/// the expansion of -1/phi2 (a_{-1} is its leading quotient).
class BiSequence {
public:
    BiSequence(CFExpansion pos, CFExpansion neg) : pos_(std::move(pos)), neg_(std::move(neg)) {}

    Int at(long n) const {
        if (n >= 0) return pos_.quotient(static_cast<std::size_t>(n));
        return neg_.quotient(static_cast<std::size_t>(-n - 1));
    }

    const CFExpansion& positive_part() const { return pos_; }
    const CFExpansion& negative_part() const { return neg_; }

    /// True when both tails are periodic and the two periods are cyclic
    /// reverses of each other, i.e. the whole sequence is periodic.
    bool periodic() const {
        if (!pos_.purely_periodic() || !neg_.purely_periodic()) return false;
        if (pos_.period.size() != neg_.period.size()) return false;
        const auto& p = pos_.period;
        std::vector<Int> rev(p.rbegin(), p.rend());
        std::size_t k = rev.size();
        for (std::size_t shift = 0; shift < k; ++shift) {
            bool match = true;
            for (std::size_t i = 0; i < k && match; ++i)
                match = rev[(i + shift) % k] == neg_.period[i];
            if (match) return true;
        }
        return false;
    }

private:
    CFExpansion pos_;
    CFExpansion neg_;
};

inline BiSequence bi_sequence(const QuadraticIrrational& phi1, const QuadraticIrrational& phi2) {
    if (phi1.is_rational() || phi2.is_rational())
        throw std::invalid_argument("bi_sequence: inputs must be irrational");
    if (phi1.sign() <= 0 || phi2.sign() >= 0)
        throw std::invalid_argument("bi_sequence: requires phi1 > 0 > phi2");
    QuadraticIrrational neg_val = (-phi2).inverse();
    return BiSequence(cf_expand(phi1), cf_expand(neg_val));
}

}  // namespace parastichy
