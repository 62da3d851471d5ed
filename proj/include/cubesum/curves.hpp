#pragma once

#include <string>
#include <vector>

#include "cubesum/exact_arith.hpp"
#include "cubesum/numeric.hpp"

namespace cubesum {

enum class Family { En, EnPrime, E9, Generic };

// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6
struct CurveModel {
    Rat a1 = 0, a2 = 0, a3 = 0, a4 = 0, a6 = 0;
    Family family = Family::Generic;
    Int n = 0;

    static CurveModel E(const Int& n);        // y^2 = x^3 - 432 n^2
    static CurveModel Eprime(const Int& n);   // y^2 = x^3 + (4n)^2
    static CurveModel E9();                   // y^2 = x^3 - 48
    static CurveModel short_model(const Rat& A, const Rat& B);
    static CurveModel from_a(const Rat& a1, const Rat& a2, const Rat& a3, const Rat& a4, const Rat& a6);

    bool is_short() const { return a1 == 0 && a2 == 0 && a3 == 0; }
    Rat A() const;  // short coefficients; only for short models
    Rat B() const;
    Rat b2() const { return a1 * a1 + 4 * a2; }
    Rat b4() const { return 2 * a4 + a1 * a3; }
    Rat b6() const { return a3 * a3 + 4 * a6; }
    Rat b8() const { return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4; }
    Rat c4() const;
    Rat c6() const;
    Rat disc() const;
    bool is_integral() const;
    bool same_equation(const CurveModel& o) const;
    std::string str() const;
    std::string label() const;
};

bool is_cube_free(const Int& n);

// x = u^2 x' + r, y = u^3 y' + s u^2 x' + t
struct Transform {
    Rat u = 1, r = 0, s = 0, t = 0;

    bool is_identity() const { return u == 1 && r == 0 && s == 0 && t == 0; }
    std::string str() const;
};

CurveModel apply(const CurveModel& E, const Transform& T);
Transform compose(const Transform& first, const Transform& second);
Transform inverse(const Transform& T);
Transform short_form_transform(const CurveModel& E);  // lands on y^2 = x^3 - 27 c4 x - 54 c6

// a + b sqrt(-3)
struct QK {
    Rat a = 0, b = 0;

    QK() = default;
    QK(long v) : a(v) {}
    QK(const Rat& v) : a(v) {}
    QK(const Rat& a_, const Rat& b_) : a(a_), b(b_) {}
    static QK sqrt_m3() { return {0, 1}; }
    std::string str() const;
};

QK operator+(const QK& x, const QK& y);
QK operator-(const QK& x, const QK& y);
QK operator-(const QK& x);
QK operator*(const QK& x, const QK& y);
QK operator/(const QK& x, const QK& y);
bool operator==(const QK& x, const QK& y);
inline bool operator!=(const QK& x, const QK& y) { return !(x == y); }

template <class F>
struct Point {
    F x{}, y{};
    bool inf = false;

    static Point infinity() {
        Point p;
        p.inf = true;
        return p;
    }
    bool operator==(const Point& o) const { return inf == o.inf && (inf || (x == o.x && y == o.y)); }
    bool operator!=(const Point& o) const { return !(*this == o); }
};

using RPoint = Point<Rat>;
using KPoint = Point<QK>;

template <class F>
bool on_curve(const CurveModel& E, const Point<F>& P) {
    if (P.inf) return true;
    const F& x = P.x;
    const F& y = P.y;
    return y * y + F(E.a1) * x * y + F(E.a3) * y == x * x * x + F(E.a2) * x * x + F(E.a4) * x + F(E.a6);
}

template <class F>
Point<F> negate(const CurveModel& E, const Point<F>& P) {
    if (P.inf) return P;
    return {P.x, F(0) - P.y - F(E.a1) * P.x - F(E.a3), false};
}

namespace detail {

template <class F>
Point<F> add_unchecked(const CurveModel& E, const Point<F>& P, const Point<F>& Q) {
    if (P.inf) return Q;
    if (Q.inf) return P;
    F a1(E.a1), a2(E.a2), a3(E.a3), a4(E.a4), a6(E.a6);
    F lambda, nu;
    if (P.x == Q.x) {
        F den = P.y + Q.y + a1 * Q.x + a3;
        if (den == F(0)) return Point<F>::infinity();
        F d = F(2) * P.y + a1 * P.x + a3;
        lambda = (F(3) * P.x * P.x + F(2) * a2 * P.x + a4 - a1 * P.y) / d;
        nu = (F(0) - P.x * P.x * P.x + a4 * P.x + F(2) * a6 - a3 * P.y) / d;
    } else {
        F dx = Q.x - P.x;
        lambda = (Q.y - P.y) / dx;
        nu = (P.y * Q.x - Q.y * P.x) / dx;
    }
    F x3 = lambda * lambda + a1 * lambda - a2 - P.x - Q.x;
    F y3 = F(0) - (lambda + a1) * x3 - nu - a3;
    return {x3, y3, false};
}

}  // namespace detail

template <class F>
Point<F> add(const CurveModel& E, const Point<F>& P, const Point<F>& Q) {
    if (!on_curve(E, P) || !on_curve(E, Q)) throw Error(ErrorKind::PointNotOnCurve, "add: point not on " + E.str());
    return detail::add_unchecked(E, P, Q);
}

template <class F>
Point<F> scalar_mul(const CurveModel& E, long m, const Point<F>& P) {
    if (!on_curve(E, P)) throw Error(ErrorKind::PointNotOnCurve, "scalar_mul: point not on " + E.str());
    Point<F> base = m < 0 ? negate(E, P) : P;
    unsigned long k = m < 0 ? static_cast<unsigned long>(-m) : static_cast<unsigned long>(m);
    Point<F> acc = Point<F>::infinity();
    while (k) {
        if (k & 1) acc = detail::add_unchecked(E, acc, base);
        base = detail::add_unchecked(E, base, base);
        k >>= 1;
    }
    return acc;
}

RPoint map_point(const Transform& T, const RPoint& P);  // from E to apply(E, T)
std::string point_str(const RPoint& P);
std::string point_str(const KPoint& P);

// Division polynomials f_k of a short model: psi_k for odd k, psi_k / (2y) for even k.
std::vector<Poly> division_polynomials(const Rat& A, const Rat& B, int kmax);

struct TorsionData {
    std::vector<RPoint> points;  // includes infinity
    std::vector<int> structure;  // invariant factors, empty when trivial
    std::vector<RPoint> generators;
    int order() const { return static_cast<int>(points.size()); }
    std::string str() const;
};

long count_points_mod(const CurveModel& E, long l);  // #E(F_l) at a good prime l, including infinity
TorsionData torsion_subgroup(const CurveModel& E);
int point_order(const CurveModel& E, const RPoint& P, int bound = 16);  // 0 when larger than bound

struct Isogeny {
    CurveModel domain, codomain;
    RPoint operator()(const RPoint& P) const;
    bool dual = false;
    Int n;
};

struct ThreeIsogeny {
    Isogeny phi, dual;
    Poly kernel_polynomial;  // monic in x, on the domain
};

ThreeIsogeny three_isogeny(const CurveModel& En);

struct LocalData {
    Int prime;
    std::string kodaira;
    int conductor_exponent = 0;
    int tamagawa = 1;
    long disc_valuation = 0;  // on the minimal model
    bool split = false;       // multiplicative reduction only
    std::string str() const;
};

struct MinimalModel {
    CurveModel model;
    Transform transform;  // input -> model
};

Transform integralize(const CurveModel& E);
// Tate's algorithm at l; the model need not be integral or minimal.
LocalData tate_local_data(const CurveModel& E, const Int& l);
// Transform making E integral and minimal at l, other primes untouched.
Transform minimize_at(const CurveModel& E, const Int& l);
MinimalModel minimal_model(const CurveModel& E);
// Smallest integral model of the form y^2 = x^3 + A x + B, by u^4 | A, u^6 | B.
MinimalModel minimal_short_model(const CurveModel& E);

std::vector<Int> bad_primes(const CurveModel& E);
Int conductor(const CurveModel& E);
std::vector<LocalData> local_data(const CurveModel& E);
int tamagawa_product(const CurveModel& E);

struct RealWithError {
    Real value;
    Real error;
};

// Real period of the model as given.
RealWithError model_period(const CurveModel& E, unsigned bits);
// Omega of the global minimal model.
RealWithError real_period(const CurveModel& E, unsigned bits);

}  // namespace cubesum
