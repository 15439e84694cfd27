#include <catch2/catch_amalgamated.hpp>

#include <parastichy/exact.hpp>

#include <random>

using namespace parastichy;

namespace {

QuadraticIrrational qi(long a, long b, long c, long d) {
    return QuadraticIrrational(Int(a), Int(b), Int(c), Int(d));
}

const QuadraticIrrational kGolden = qi(1, 1, 2, 5);         // (1+sqrt5)/2
const QuadraticIrrational kSilver = qi(1, 1, 1, 2);         // 1+sqrt2
const QuadraticIrrational kGamma5 = qi(9, 1, 10, 221);      // (9+sqrt221)/10

std::vector<Int> ints(std::initializer_list<long> xs) {
    std::vector<Int> v;
    for (long x : xs) v.emplace_back(x);
    return v;
}

}  // namespace

TEST_CASE("quadratic irrational normalization") {
    auto x = qi(2, 2, 4, 32);  // (2 + 2*sqrt(32))/4 = (1 + 4*sqrt2)/2
    CHECK(x.a() == 1);
    CHECK(x.b() == 4);
    CHECK(x.c() == 2);
    CHECK(x.d() == 2);

    auto sq = qi(0, 1, 1, 9);  // sqrt(9) = 3, collapses to a rational
    CHECK(sq.is_rational());
    CHECK(sq.to_rational() == Rational(3));

    CHECK_THROWS_AS(qi(1, 1, 0, 5), std::invalid_argument);
    CHECK_THROWS_AS(qi(1, 1, 1, -5), std::invalid_argument);

    auto neg = qi(1, 1, -2, 5);  // negative denominator flips signs
    CHECK(neg.c() == 2);
    CHECK(neg.a() == -1);
    CHECK(neg.b() == -1);
}

TEST_CASE("conjugate and exact comparisons") {
    auto g = kGolden;
    auto gbar = g.conjugate();
    CHECK(gbar.sign() < 0);
    CHECK((g + gbar).to_rational() == Rational(1));
    CHECK((g * gbar).to_rational() == Rational(-1));
    CHECK(g > gbar);
    CHECK(g.floor() == 1);
    CHECK(gbar.floor() == -1);
    CHECK((-g).floor() == -2);
    CHECK(qi(-3, 1, 2, 5).floor() == -1);  // (-3+sqrt5)/2 ~ -0.382
}

TEST_CASE("cf_expand matches the classical quadratic values") {
    auto cf1 = cf_expand(kGolden);
    CHECK(cf1.head.empty());
    CHECK(cf1.period == ints({1}));

    auto cf2 = cf_expand(kSilver);
    CHECK(cf2.head.empty());
    CHECK(cf2.period == ints({2}));

    auto cf5 = cf_expand(kGamma5);
    CHECK(cf5.head.empty());
    CHECK(cf5.period == ints({2, 2, 1, 1}));
}

TEST_CASE("cf_expand of rationals is the finite Euclidean expansion") {
    auto half = cf_expand(QuadraticIrrational::from_rational(Rational(1, 2)));
    CHECK(half.head == ints({0, 2}));
    CHECK(half.period.empty());

    auto neg = cf_expand(QuadraticIrrational::from_rational(Rational(-7, 2)));
    CHECK(neg.head == ints({-4, 2}));
    CHECK(neg.valid());

    auto n = cf_expand(QuadraticIrrational::from_int(42));
    CHECK(n.head == ints({42}));
}

TEST_CASE("convergents: seeds, Fibonacci, and the -1/phibar chain") {
    auto golden = cf_expand(kGolden);
    auto pq = convergents(golden, 4);
    REQUIRE(pq.size() == 7);
    CHECK(pq[0] == std::make_pair(Int(0), Int(1)));  // n = -2
    CHECK(pq[1] == std::make_pair(Int(1), Int(0)));  // n = -1
    CHECK(pq[2] == std::make_pair(Int(1), Int(1)));
    CHECK(pq[3] == std::make_pair(Int(2), Int(1)));
    CHECK(pq[4] == std::make_pair(Int(3), Int(2)));
    CHECK(pq[5] == std::make_pair(Int(5), Int(3)));
    CHECK(pq[6] == std::make_pair(Int(8), Int(5)));

    // -1/phibar for phi = (3-sqrt5)/2; ninth convergent is -21/55.
    auto phibar = qi(3, 1, 2, 5);
    auto val = (-phibar).inverse();
    auto cf = cf_expand(val);
    auto chain = convergents(cf, 9);
    CHECK(chain[9 + 2].first == -21);
    CHECK(chain[9 + 2].second == 55);

    CHECK_THROWS_AS(convergents(golden, -3), std::invalid_argument);
}

TEST_CASE("cf_eval inverts cf_expand on the named values") {
    CFExpansion one_bar{{}, ints({1})};
    CHECK(cf_eval(one_bar) == kGolden);

    CFExpansion two_bar{{}, ints({2})};
    CHECK(cf_eval(two_bar) == kSilver);

    CFExpansion half{ints({0, 2}), {}};
    CHECK(cf_eval(half).to_rational() == Rational(1, 2));

    CFExpansion bad{{}, ints({0})};
    CHECK_THROWS_AS(cf_eval(bad), std::invalid_argument);
}

TEST_CASE("round trip cf_eval(cf_expand(x)) == x on 200 random values") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> coeff(-50, 50), den(1, 50);
    const long squarefree[] = {2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 21, 22, 23,
                               26, 29, 31, 33, 34, 35, 37, 38, 39, 41, 43, 46, 47, 51,
                               53, 55, 57, 58, 59, 61, 62, 65, 67, 69, 71, 73, 74, 77,
                               78, 79, 82, 83, 85, 86, 87, 89, 91, 93, 94, 95, 97};
    std::uniform_int_distribution<std::size_t> di(0, std::size(squarefree) - 1);

    int checked = 0;
    while (checked < 200) {
        long b = coeff(rng);
        if (b == 0) continue;
        auto x = qi(coeff(rng), b, den(rng), squarefree[di(rng)]);
        auto cf = cf_expand(x);
        REQUIRE(cf.valid());
        CHECK(cf_eval(cf) == x);
        ++checked;
    }
}

TEST_CASE("convergent quality |x - p/q| < 1/q^2") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> coeff(-30, 30), den(1, 30);
    const long ds[] = {2, 3, 5, 7, 13, 61, 97};
    std::uniform_int_distribution<std::size_t> di(0, std::size(ds) - 1);
    for (int iter = 0; iter < 40; ++iter) {
        long b = coeff(rng);
        if (b == 0) continue;
        auto x = qi(coeff(rng), b, den(rng), ds[di(rng)]);
        auto pq = convergents(cf_expand(x), 12);
        for (std::size_t i = 2; i < pq.size(); ++i) {
            const auto& [p, q] = pq[i];
            REQUIRE(gcd(p, q) == 1);
            auto err = (x - QuadraticIrrational::from_rational(Rational(p, q))).abs();
            auto bound = QuadraticIrrational::from_rational(Rational(1, q * q));
            CHECK(err < bound);
        }
    }
}

TEST_CASE("purely periodic implies reduced: x > 1 and -1 < conj(x) < 0") {
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<long> entry(1, 6);
    std::uniform_int_distribution<int> len(1, 5);
    auto one = QuadraticIrrational::from_int(1);
    auto zero = QuadraticIrrational::from_int(0);
    for (int iter = 0; iter < 60; ++iter) {
        CFExpansion cf;
        int k = len(rng);
        for (int i = 0; i < k; ++i) cf.period.emplace_back(entry(rng));
        auto x = cf_eval(cf);
        CHECK(x > one);
        CHECK(x.conjugate() > -one);
        CHECK(x.conjugate() < zero);
        // and re-expansion is purely periodic again
        CHECK(cf_expand(x).purely_periodic());
    }
}

TEST_CASE("bi_sequence of the Markoff pairs") {
    auto g1 = kGolden;
    auto s1 = bi_sequence(g1, g1.conjugate());
    for (long n = -6; n <= 6; ++n) CHECK(s1.at(n) == 1);
    CHECK(s1.periodic());

    auto g2 = kSilver;
    auto s2 = bi_sequence(g2, g2.conjugate());
    for (long n = -6; n <= 6; ++n) CHECK(s2.at(n) == 2);

    auto g5 = kGamma5;
    auto s5 = bi_sequence(g5, g5.conjugate());
    CHECK(s5.positive_part().period.size() == 4);
    CHECK(s5.negative_part().period.size() == 4);
    CHECK(s5.periodic());
    // entries away from 0, -1 stay positive
    for (long n = -9; n <= 9; ++n) {
        if (n != 0 && n != -1) CHECK(s5.at(n) >= 1);
    }

    CHECK_THROWS_AS(bi_sequence(g1, g2), std::invalid_argument);  // both positive
    CHECK_THROWS_AS(bi_sequence(QuadraticIrrational::from_int(2), -g1),
                    std::invalid_argument);  // rational
}
