#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "cubesum/curves.hpp"
#include "cubesum/error.hpp"

using namespace cubesum;

namespace {

KPoint kp(long x, long ys) { return {QK(x), QK(0, ys), false}; }

// Omega = 2 int_{x0}^inf dx / sqrt(x^3 + B); with x = x0 + t^2 the integrand is 4 / sqrt(x^2 + x0 x + x0^2).
Real quadrature_period(long B) {
    PrecisionGuard g(110);
    Real x0 = cbrt(Real(-B));
    boost::math::quadrature::exp_sinh<Real> integrator;
    auto f = [&](const Real& t) {
        Real x = x0 + t * t;
        return Real(2 / sqrt(x * x + x0 * x + x0 * x0));
    };
    return integrator.integrate(f, Real("1e-30"));
}

}  // namespace

TEST_CASE("family models") {
    CHECK(CurveModel::E(5).same_equation(CurveModel::short_model(0, -432 * 25)));
    CHECK(CurveModel::Eprime(5).same_equation(CurveModel::short_model(0, 400)));
    CHECK(CurveModel::E9().same_equation(CurveModel::short_model(0, -48)));
    CHECK_THROWS_AS(CurveModel::E(16), Error);
    CHECK_THROWS_AS(CurveModel::short_model(0, 0), Error);
    for (long n : {5L, 11L, 15L, 363L}) CHECK(CurveModel::E(n).disc() < 0);
}

TEST_CASE("group law") {
    CurveModel E1 = CurveModel::E(1);
    RPoint P{12, 36, false};
    CHECK(add(E1, P, RPoint::infinity()) == P);
    CHECK(scalar_mul(E1, 3, P).inf);
    CHECK_FALSE(scalar_mul(E1, 2, P).inf);
    CHECK_THROWS_AS(add(E1, P, RPoint{1, 1, false}), Error);

    CurveModel E9 = CurveModel::E9();
    KPoint T = kp(0, 4);
    REQUIRE(on_curve(E9, T));
    CHECK(on_curve(E9, add(E9, T, T)));
    CHECK(scalar_mul(E9, 3, T).inf);
}

TEST_CASE("torsion") {
    CHECK(torsion_subgroup(CurveModel::E(5)).order() == 1);
    TorsionData t1 = torsion_subgroup(CurveModel::E(1));
    CHECK(t1.order() == 3);
    CHECK(std::find(t1.points.begin(), t1.points.end(), RPoint{12, 36, false}) != t1.points.end());
    CHECK(std::find(t1.points.begin(), t1.points.end(), RPoint{12, -36, false}) != t1.points.end());
    TorsionData t2 = torsion_subgroup(CurveModel::E(2));
    CHECK(std::find(t2.points.begin(), t2.points.end(), RPoint{12, 0, false}) != t2.points.end());
    for (long n : {6L, 11L, 15L, 33L, 75L, 363L}) CHECK(torsion_subgroup(CurveModel::E(n)).order() == 1);
}

TEST_CASE("3-isogeny") {
    ThreeIsogeny iso = three_isogeny(CurveModel::E(5));
    CHECK(iso.phi.codomain.same_equation(CurveModel::short_model(0, 400)));
    CurveModel E6 = CurveModel::E(6);
    ThreeIsogeny i6 = three_isogeny(E6);
    RPoint G{28, 80, false};
    for (long k = 1; k <= 20; ++k) {
        RPoint P = scalar_mul(E6, k % 2 ? k : -k, G);
        RPoint Q = i6.phi(P);
        REQUIRE(on_curve(i6.phi.codomain, Q));
        CHECK(i6.dual(Q) == scalar_mul(E6, 3, P));
    }
    Poly psi3 = division_polynomials(E6.A(), E6.B(), 3)[3];
    CHECK(poly_deg(poly_divmod(psi3, iso.kernel_polynomial).second) < 0);
}

TEST_CASE("Tate's algorithm") {
    auto c = [](const CurveModel& E, long l) { return tate_local_data(E, l); };
    CHECK(c(CurveModel::E(11), 3).tamagawa == 2);
    for (long l : {2L, 3L, 11L}) CHECK(c(CurveModel::E(363), l).tamagawa == 1);
    LocalData g = c(CurveModel::E(5), 7);
    CHECK(g.conductor_exponent == 0);
    CHECK(g.tamagawa == 1);
    CHECK(c(CurveModel::E(29), 3).tamagawa == 2);
    for (auto& l : local_data(CurveModel::E(29)))
        if (l.prime != 3) CHECK(l.tamagawa == 1);
    CHECK(c(CurveModel::E(25), 3).tamagawa == 2);
}

TEST_CASE("conductors") {
    // frozen from an independent computer-algebra run
    const std::pair<long, long> table[] = {{1, 27},      {5, 675},     {25, 225},    {15, 6075}, {75, 6075},
                                           {11, 1089},   {121, 3267},  {33, 29403},  {363, 29403},
                                           {29, 7569},   {841, 22707}, {87, 204363}, {2523, 204363},
                                           {6, 972}};
    for (auto [n, N] : table) {
        CurveModel E = CurveModel::E(n);
        CHECK(conductor(E) == N);
        Int prod = 1;
        for (auto& l : local_data(E))
            for (int k = 0; k < l.conductor_exponent; ++k) prod *= l.prime;
        CHECK(prod == N);
    }
    Int N9 = conductor(CurveModel::E9());
    CHECK(N9 == 243);
}

TEST_CASE("minimal models") {
    MinimalModel s = minimal_short_model(CurveModel::E(9));
    CHECK(s.model.same_equation(CurveModel::short_model(0, -48)));
    CHECK(s.transform.u == 3);
    MinimalModel m = minimal_model(CurveModel::E9());
    CHECK(m.model.same_equation(CurveModel::from_a(0, 0, 1, 0, -1)));
    MinimalModel id = minimal_model(CurveModel::from_a(0, 0, 1, 0, -1));
    CHECK(id.transform.is_identity());
}

TEST_CASE("real periods") {
    const std::pair<long, const char*> table[] = {
        {1, "1.766638750285449957313689499648438702572"},   {5, "1.033136608569773135688332494987736948025"},
        {25, "0.6041819538910198368771677029683094216027"}, {15, "0.7163369154962307690605614614414981707525"},
        {75, "0.4189163694895339323306827940019332449430"}, {11, "0.7943590672312219355167493690448794361394"},
        {121, "0.3571790370784633984169711383657340388925"}, {33, "0.5507778151474215508648993201241820529018"},
        {363, "0.2476541123200559861310004836232458755877"}, {6, "0.9722187714201128597944609123476510851052"}};
    for (auto [n, omega] : table) {
        RealWithError w = real_period(CurveModel::E(n), 128);
        PrecisionGuard g(128);
        CHECK(abs(w.value - Real(omega)) < Real("1e-30"));
        CHECK(w.error < pow2(-100));
    }
    Real q = quadrature_period(-432);
    RealWithError naive = model_period(CurveModel::E(1), 128);
    PrecisionGuard g(128);
    CHECK(abs(naive.value - q) < Real("1e-20"));
    MinimalModel mm = minimal_model(CurveModel::E(1));
    RealWithError w = real_period(CurveModel::E(1), 128);
    CHECK(abs(w.value - to_real(mm.transform.u) * naive.value) < Real("1e-30"));
}
