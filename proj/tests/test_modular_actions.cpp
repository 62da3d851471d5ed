#include <doctest.h>

#include "cubesum/error.hpp"
#include "cubesum/modular_actions.hpp"

using namespace cubesum;

namespace {
const long kPrimes[] = {5, 11, 23, 29, 41, 47};
}

TEST_CASE("named matrices") {
    const NamedMatrices& m = named_matrices();
    CHECK(m.W == Mat2{0, 1, -243, 0});
    CHECK(m.A == Mat2{28, Rat(1, 3), 81, 1});
    CHECK(m.B == Mat2{1, 0, 81, 1});
    CHECK(m.C == Mat2{1, Rat(1, 9), -27, -2});
}

TEST_CASE("embeddings are cube roots of unity") {
    for (long p : kPrimes)
        for (int i = 1; i <= 3; ++i) {
            Embedding e = build_embedding(i, p);
            Mat2 r = e.rho_omega;
            CHECK(r * r + r + Mat2::identity() == Mat2{0, 0, 0, 0});
            CHECK(r.det() == 1);
            CHECK(r.trace() == -1);
            CHECK(r == e.M * named_matrices().R * inverse(e.M));
        }
}

TEST_CASE("embedding displays") {
    for (long p : kPrimes) {
        CHECK(build_embedding(1, p).rho_omega == Mat2{1, Rat(-p, 9), Rat(27, p), -2});
        CHECK(build_embedding(3, p).rho_omega == Mat2{Rat(-1, 2), Rat(-p, 36), Rat(27, p), Rat(-1, 2)});
        // det = 1 with a = 4, b = -p/9, d = -5 forces c = 189/p; the printed 187/p has det 2/9 instead of 1
        Mat2 rho2 = build_embedding(2, p).rho_omega;
        CHECK(rho2 == Mat2{4, Rat(-p, 9), Rat(189, p), -5});
        CHECK(displayed_rho_omega(2, p).det() != 1);
    }
}

TEST_CASE("order conductors") {
    CHECK(order_conductor(build_embedding(1, 11)) == 99);
    CHECK(order_conductor(build_embedding(3, 11)) == 396);
    CHECK(order_conductor(build_embedding(2, 5)) == 45);
    for (long p : kPrimes)
        for (int i = 1; i <= 3; ++i) {
            Embedding e = build_embedding(i, p);
            CHECK(order_conductor(e) == order_conductor_by_divisors(e));
        }
}

TEST_CASE("membership in V") {
    CHECK(check_in_V(Mat2::identity()).verdict);
    VMembershipReport b = check_in_V(named_matrices().B);
    CHECK_FALSE(b.verdict);
    CHECK(b.lower_left_val3 == 4);
    const NamedMatrices& m = named_matrices();
    Mat2 unit = Mat2::identity() + Rat(3) * build_embedding(1, 11).rho_omega;
    Mat2 x = m.A * m.A * m.B * m.B * unit;
    CHECK(x.a == Rat(783, 11) + 9508);
    CHECK(check_in_V(x).verdict);
}

TEST_CASE("unit action identities") {
    for (long p : {5L, 11L}) {
        for (const IdentityCheck& c : verify_unit_action_identities(p)) {
            INFO(c.name << " " << c.detail);
            if (c.name.find("rho2(w)") != std::string::npos) continue;  // fails as printed; see the acceptance suite
            CHECK(c.ok);
        }
        CHECK_FALSE(omega_words_in_V(build_embedding(2, p)).empty());
    }
    CHECK(symbolic_a2b2_rho1_unit() == displayed_a2b2_rho1_unit());
}

TEST_CASE("prime class") {
    CHECK(prime_class(11) == 2);
    CHECK(prime_class(5) == 5);
    CHECK_THROWS_AS(prime_class(7), Error);
    CHECK_THROWS_AS(build_embedding(1, 7), Error);
    CHECK_THROWS_AS(prime_class(20), Error);
}
