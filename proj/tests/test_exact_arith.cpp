#include <doctest.h>

#include <random>

#include "cubesum/error.hpp"
#include "cubesum/exact_arith.hpp"

using namespace cubesum;

namespace {

// alpha^((q-1)/3) in F_q = Z[w]/pi, with w sent to the root r of a + b r = 0.
Root euler_cubic_symbol(const Eis& alpha, const Eis& pi) {
    Int q = eis_norm(pi);
    Int binv;
    mpz_invert(binv.get_mpz_t(), Int(pi.b % q + q).get_mpz_t(), q.get_mpz_t());
    Int r = ((-pi.a * binv) % q + q) % q;
    Int x = ((alpha.a + alpha.b * r) % q + q) % q;
    Int e = (q - 1) / 3, v;
    mpz_powm(v.get_mpz_t(), x.get_mpz_t(), e.get_mpz_t(), q.get_mpz_t());
    if (v == 1) return Root::one();
    if (v == r) return Root::omega();
    if (v == (r * r) % q) return Root::omega2();
    FAIL("not a cube root of unity");
    return Root::one();
}

}  // namespace

TEST_CASE("Eisenstein norms") {
    CHECK(eis_norm(Eis(1, 2)) == 3);
    CHECK(eis_norm(Eis::omega()) == 1);
    CHECK(eis_norm(Eis(2, 3)) == 7);
    Eis w = Eis::omega();
    CHECK(w * w + w + Eis(1) == Eis(0));
    CHECK(Eis::sqrt_m3() * Eis::sqrt_m3() == Eis(-3));
}

TEST_CASE("Eisenstein factorization") {
    auto f3 = eis_factor(3);
    REQUIRE(f3.factors.size() == 1);
    CHECK(f3.factors[0].multiplicity == 2);
    CHECK(eis_norm(f3.factors[0].prime) == 3);
    CHECK(eis_expand(f3) == Eis(3));

    auto f5 = eis_factor(5);
    REQUIRE(f5.factors.size() == 1);
    CHECK(f5.factors[0].multiplicity == 1);
    CHECK(eis_norm(f5.factors[0].prime) == 25);

    auto f7 = eis_factor(7);
    REQUIRE(f7.factors.size() == 2);
    CHECK(eis_norm(f7.factors[0].prime) == 7);
    CHECK(eis_norm(f7.factors[1].prime) == 7);
    CHECK(eis_divides(f7.factors[0].prime, eis_conj(f7.factors[1].prime)));
    CHECK(eis_expand(f7) == Eis(7));

    for (long n : {2L, 6L, 12L, 75L, 363L, 2 * 3 * 3 * 11 * 13L, 9L * 29 * 29})
        CHECK(eis_expand(eis_factor(n)) == Eis(n));
}

TEST_CASE("factoring bound") {
    CHECK_THROWS_AS(factor_int(Int(1000003) * 1000033, Int(1000000)), Error);
    auto f = factor_int(Int(4) * 1000003, Int(1000));
    REQUIRE(f.size() == 2);
    CHECK(f[1].first == 1000003);
}

TEST_CASE("cubic residue symbol against Euler's criterion") {
    std::mt19937_64 rng(7);
    for (long q = 7; q < 400; q += 6) {
        if (!is_prime(q)) continue;
        Eis pi = cornacchia_prime(q);
        CHECK(cubic_residue_symbol(Eis(1), pi) == Root::one());
        for (int k = 0; k < 6; ++k) {
            Eis a(static_cast<long>(rng() % 1000) - 500, static_cast<long>(rng() % 1000) - 500);
            if (eis_divides(pi, a)) continue;
            Root s = cubic_residue_symbol(a, pi);
            CHECK(s == euler_cubic_symbol(a, pi));
            CHECK(s.pow(3) == Root::one());
        }
    }
    Eis pi7 = cornacchia_prime(7);
    CHECK(cubic_residue_symbol(Eis::omega(), pi7) == euler_cubic_symbol(Eis::omega(), pi7));
    CHECK_THROWS_AS(cubic_residue_symbol(Eis(2), Eis::sqrt_m3()), Error);
    CHECK_THROWS_AS(cubic_residue_symbol(pi7 * Eis(5), pi7), Error);
}

TEST_CASE("primary associates") {
    for (long q : {7L, 13L, 19L, 31L, 37L, 43L}) {
        int u = -1;
        Eis p = primary_associate(cornacchia_prime(q), &u);
        CHECK(u >= 0);
        CHECK(((p.a % 3) + 3) % 3 == 2);
        CHECK(p.b % 3 == 0);
    }
}

TEST_CASE("matrices") {
    Mat2 M{Rat(11, 9), 0, 2, 1};
    CHECK(M * inverse(M) == Mat2::identity());
    Mat2 R{-1, -1, 1, 0};
    Mat2 rho1{1, Rat(-11, 9), Rat(27, 11), -2};
    CHECK(conj(R, inverse(M)) == rho1);
    CHECK_THROWS_AS(inverse(Mat2{1, 2, 2, 4}), Error);
    Mat2 X{Rat(3, 7), 5, -2, Rat(1, 3)};
    CHECK((X * M).det() == X.det() * M.det());
    CHECK(conj(X, M).trace() == X.trace());
    CHECK(inverse(X * M) == inverse(M) * inverse(X));
}

TEST_CASE("valuations") {
    CHECK(valuation(Int(162), Int(3)).exponent == 4);
    CHECK(valuation(Rat(2, 27), Int(3)).exponent == -3);
    CHECK(valuation(Int(0), Int(3)).infinite);
    Rat x(18, 5), y(4, 45);
    CHECK(valuation(Rat(x * y), Int(3)).exponent == valuation(x, Int(3)).exponent + valuation(y, Int(3)).exponent);
    CHECK(valuation(Rat(x + y), Int(3)).exponent >= std::min(valuation(x, Int(3)).exponent, valuation(y, Int(3)).exponent));
}

TEST_CASE("rational roots") {
    // (x - 3/2)(x + 7)(3x - 1)(x^2 + 1)
    Poly f = {1};
    for (Poly g : {Poly{Rat(-3, 2), 1}, Poly{7, 1}, Poly{-1, 3}, Poly{1, 0, 1}}) f = poly_mul(f, g);
    auto roots = rational_roots(f);
    std::sort(roots.begin(), roots.end());
    REQUIRE(roots.size() == 3);
    CHECK(roots[0] == -7);
    CHECK(roots[1] == Rat(1, 3));
    CHECK(roots[2] == Rat(3, 2));
    CHECK(rational_roots(Poly{0, 0, 1}) == std::vector<Rat>{0});
    CHECK(rational_roots(Poly{-2, 0, 1}).empty());
    Poly g = poly_gcd(poly_mul(Poly{-1, 1}, Poly{2, 1}), poly_mul(Poly{-1, 1}, Poly{5, 1}));
    CHECK(poly_deg(g) == 1);
    CHECK(poly_eval(g, 1) == 0);
}
