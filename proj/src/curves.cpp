#include "cubesum/curves.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace cubesum {

namespace {

Int modp(const Int& x, const Int& m) {
    Int r = x % m;
    if (r < 0) r += m;
    return r;
}

Rat rat_pow(const Rat& x, int k) {
    Rat r = 1;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

Int int_pow(const Int& x, unsigned long k) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), x.get_mpz_t(), k);
    return r;
}

Int lcm(const Int& a, const Int& b) {
    Int r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

Int den_lcm(std::initializer_list<Rat> xs) {
    Int d = 1;
    for (const auto& x : xs) d = lcm(d, x.get_den());
    return d;
}

std::string rat_coef(const Rat& c, const std::string& mon, bool first) {
    if (c == 0) return "";
    std::string s;
    Rat a = abs(c);
    if (first) {
        s = c < 0 ? "-" : "";
    } else {
        s = c < 0 ? " - " : " + ";
    }
    if (mon.empty()) return s + a.get_str();
    if (a != 1) s += a.get_str() + "*";
    return s + mon;
}

}  // namespace

bool is_cube_free(const Int& n) {
    if (n <= 0) return false;
    for (const auto& [q, e] : factor_int(n)) {
        (void)q;
        if (e >= 3) return false;
    }
    return true;
}

CurveModel CurveModel::E(const Int& n) {
    if (!is_cube_free(n)) throw Error(ErrorKind::InvalidFamily, "E_n needs a cube-free positive n, got " + n.get_str());
    CurveModel c = short_model(0, Rat(-432 * n * n));
    c.family = Family::En;
    c.n = n;
    return c;
}

CurveModel CurveModel::Eprime(const Int& n) {
    if (!is_cube_free(n)) throw Error(ErrorKind::InvalidFamily, "E'_n needs a cube-free positive n, got " + n.get_str());
    CurveModel c = short_model(0, Rat(16 * n * n));
    c.family = Family::EnPrime;
    c.n = n;
    return c;
}

CurveModel CurveModel::E9() {
    CurveModel c = short_model(0, -48);
    c.family = Family::E9;
    c.n = 9;
    return c;
}

CurveModel CurveModel::short_model(const Rat& A, const Rat& B) { return from_a(0, 0, 0, A, B); }

CurveModel CurveModel::from_a(const Rat& a1, const Rat& a2, const Rat& a3, const Rat& a4, const Rat& a6) {
    CurveModel c;
    c.a1 = a1;
    c.a2 = a2;
    c.a3 = a3;
    c.a4 = a4;
    c.a6 = a6;
    if (c.disc() == 0) throw Error(ErrorKind::Singular, "singular Weierstrass equation " + c.str());
    return c;
}

Rat CurveModel::A() const {
    if (!is_short()) throw Error(ErrorKind::InvalidFamily, "not a short model: " + str());
    return a4;
}

Rat CurveModel::B() const {
    if (!is_short()) throw Error(ErrorKind::InvalidFamily, "not a short model: " + str());
    return a6;
}

Rat CurveModel::c4() const { return b2() * b2() - 24 * b4(); }
Rat CurveModel::c6() const { return -b2() * b2() * b2() + 36 * b2() * b4() - 216 * b6(); }

Rat CurveModel::disc() const {
    Rat B2 = b2(), B4 = b4(), B6 = b6(), B8 = b8();
    return -B2 * B2 * B8 - 8 * B4 * B4 * B4 - 27 * B6 * B6 + 9 * B2 * B4 * B6;
}

bool CurveModel::is_integral() const {
    for (const Rat* x : {&a1, &a2, &a3, &a4, &a6})
        if (x->get_den() != 1) return false;
    return true;
}

bool CurveModel::same_equation(const CurveModel& o) const {
    return a1 == o.a1 && a2 == o.a2 && a3 == o.a3 && a4 == o.a4 && a6 == o.a6;
}

std::string CurveModel::str() const {
    std::string lhs = "y^2" + rat_coef(a1, "x*y", false) + rat_coef(a3, "y", false);
    std::string rhs = "x^3" + rat_coef(a2, "x^2", false) + rat_coef(a4, "x", false) + rat_coef(a6, "", false);
    return lhs + " = " + rhs;
}

std::string CurveModel::label() const {
    switch (family) {
        case Family::En: return "E_" + n.get_str();
        case Family::EnPrime: return "E'_" + n.get_str();
        case Family::E9: return "E_9";
        case Family::Generic: break;
    }
    return "[" + a1.get_str() + "," + a2.get_str() + "," + a3.get_str() + "," + a4.get_str() + "," + a6.get_str() + "]";
}

std::string Transform::str() const {
    return "[u=" + u.get_str() + ", r=" + r.get_str() + ", s=" + s.get_str() + ", t=" + t.get_str() + "]";
}

CurveModel apply(const CurveModel& E, const Transform& T) {
    const Rat &u = T.u, &r = T.r, &s = T.s, &t = T.t;
    CurveModel c = E;
    c.a1 = (E.a1 + 2 * s) / u;
    c.a2 = (E.a2 - s * E.a1 + 3 * r - s * s) / rat_pow(u, 2);
    c.a3 = (E.a3 + r * E.a1 + 2 * t) / rat_pow(u, 3);
    c.a4 = (E.a4 - s * E.a3 + 2 * r * E.a2 - (t + r * s) * E.a1 + 3 * r * r - 2 * s * t) / rat_pow(u, 4);
    c.a6 = (E.a6 + r * E.a4 + r * r * E.a2 + r * r * r - t * E.a3 - t * t - r * t * E.a1) / rat_pow(u, 6);
    if (!T.is_identity()) c.family = Family::Generic;
    return c;
}

Transform compose(const Transform& f, const Transform& g) {
    Transform h;
    h.u = f.u * g.u;
    h.r = f.r + f.u * f.u * g.r;
    h.s = f.s + f.u * g.s;
    h.t = f.t + f.u * f.u * f.u * g.t + f.s * f.u * f.u * g.r;
    return h;
}

Transform inverse(const Transform& T) {
    Transform i;
    i.u = 1 / T.u;
    i.r = -T.r / (T.u * T.u);
    i.s = -T.s / T.u;
    i.t = (T.r * T.s - T.t) / rat_pow(T.u, 3);
    return i;
}

Transform short_form_transform(const CurveModel& E) {
    Transform t1{1, 0, -E.a1 / 2, -E.a3 / 2};
    CurveModel e1 = apply(E, t1);
    Transform t2{1, -e1.a2 / 3, 0, 0};
    Transform t3{Rat(1, 6), 0, 0, 0};
    return compose(compose(t1, t2), t3);
}

RPoint map_point(const Transform& T, const RPoint& P) {
    if (P.inf) return P;
    Rat x = (P.x - T.r) / (T.u * T.u);
    Rat y = (P.y - T.s * (P.x - T.r) - T.t) / rat_pow(T.u, 3);
    return {x, y, false};
}

std::string point_str(const RPoint& P) {
    if (P.inf) return "O";
    return "(" + P.x.get_str() + ", " + P.y.get_str() + ")";
}

std::string point_str(const KPoint& P) {
    if (P.inf) return "O";
    return "(" + P.x.str() + ", " + P.y.str() + ")";
}

std::string QK::str() const {
    if (b == 0) return a.get_str();
    std::string s = a == 0 ? "" : a.get_str() + (b < 0 ? " - " : " + ");
    Rat ab = a == 0 ? b : abs(b);
    if (ab == -1) return s + "-sqrt(-3)";
    if (ab != 1) s += ab.get_str() + "*";
    return s + "sqrt(-3)";
}

QK operator+(const QK& x, const QK& y) { return {x.a + y.a, x.b + y.b}; }
QK operator-(const QK& x, const QK& y) { return {x.a - y.a, x.b - y.b}; }
QK operator-(const QK& x) { return {-x.a, -x.b}; }
QK operator*(const QK& x, const QK& y) { return {x.a * y.a - 3 * x.b * y.b, x.a * y.b + x.b * y.a}; }

QK operator/(const QK& x, const QK& y) {
    Rat n = y.a * y.a + 3 * y.b * y.b;
    if (n == 0) throw Error(ErrorKind::ZeroArgument, "division by zero in Q(sqrt(-3))");
    QK c{y.a / n, -y.b / n};
    return x * c;
}

bool operator==(const QK& x, const QK& y) { return x.a == y.a && x.b == y.b; }

std::vector<Poly> division_polynomials(const Rat& A, const Rat& B, int kmax) {
    std::vector<Poly> f(std::max(kmax + 1, 5));
    Poly F = {4 * B, 4 * A, 0, 4};
    Poly F2 = poly_mul(F, F);
    f[0] = {};
    f[1] = {1};
    f[2] = {1};
    f[3] = {-A * A, 12 * B, 6 * A, 0, 3};
    f[4] = poly_scale({-8 * B * B - A * A * A, -4 * A * B, -5 * A * A, 20 * B, 5 * A, 0, 1}, 2);
    auto cube = [](const Poly& p) { return poly_mul(p, poly_mul(p, p)); };
    for (int k = 5; k <= kmax; ++k) {
        int m = k / 2;
        if (k % 2) {
            Poly t1 = poly_mul(f[m + 2], cube(f[m]));
            Poly t2 = poly_mul(f[m - 1], cube(f[m + 1]));
            if (m % 2 == 0) t1 = poly_mul(F2, t1);
            else t2 = poly_mul(F2, t2);
            f[k] = poly_sub(t1, t2);
        } else {
            Poly t1 = poly_mul(f[m + 2], poly_mul(f[m - 1], f[m - 1]));
            Poly t2 = poly_mul(f[m - 2], poly_mul(f[m + 1], f[m + 1]));
            f[k] = poly_mul(f[m], poly_sub(t1, t2));
        }
    }
    f.resize(kmax + 1);
    return f;
}

std::string TorsionData::str() const {
    if (structure.empty()) return "trivial";
    std::string s;
    for (size_t i = 0; i < structure.size(); ++i) s += (i ? " x Z/" : "Z/") + std::to_string(structure[i]);
    return s;
}

long count_points_mod(const CurveModel& E, long l) {
    Int L = l;
    auto red = [&](const Rat& x) {
        if (x.get_den() % L == 0) throw Error(ErrorKind::NotCoprime, "model not integral at " + L.get_str());
        Int inv;
        Int d = x.get_den();
        mpz_invert(inv.get_mpz_t(), d.get_mpz_t(), L.get_mpz_t());
        return modp(x.get_num() * inv, L).get_si();
    };
    long a1 = red(E.a1), a2 = red(E.a2), a3 = red(E.a3), a4 = red(E.a4), a6 = red(E.a6);
    long count = 1;
    if (l == 2) {
        for (long x = 0; x < 2; ++x)
            for (long y = 0; y < 2; ++y)
                if ((y * y + a1 * x * y + a3 * y - x * x * x - a2 * x * x - a4 * x - a6) % 2 == 0) ++count;
        return count;
    }
    // squares mod l
    std::vector<signed char> chi(l, -1);
    chi[0] = 0;
    for (long y = 1; y < l; ++y) chi[(y * y) % l] = 1;
    for (long x = 0; x < l; ++x) {
        long lin = (a1 * x + a3) % l;
        long rhs = (((x * x) % l * x) % l + (a2 * x % l) * x % l + a4 * x % l + a6) % l;
        long d = (lin * lin + 4 * rhs) % l;
        count += 1 + chi[d];
    }
    return count;
}

int point_order(const CurveModel& E, const RPoint& P, int bound) {
    RPoint Q = P;
    for (int k = 1; k <= bound; ++k) {
        if (Q.inf) return k;
        Q = detail::add_unchecked(E, Q, P);
    }
    return 0;
}

TorsionData torsion_subgroup(const CurveModel& E) {
    Transform T = short_form_transform(E);
    CurveModel S = apply(E, T);
    Transform back = inverse(T);
    Rat A = S.a4, B = S.a6;

    Rat D = S.disc();
    Int bad = D.get_num() * D.get_den() * A.get_den() * B.get_den() * 6;
    long g = 0;
    int used = 0;
    for (long l = 5; used < 12 && l < 1000; l += 2) {
        if (!is_prime(Int(l)) || bad % l == 0) continue;
        g = std::gcd(g, count_points_mod(S, l));
        ++used;
    }

    std::vector<RPoint> found = {RPoint::infinity()};
    auto consider = [&](const Rat& x) {
        Rat y2 = x * x * x + A * x + B;
        if (y2 < 0) return;
        Int yn, yd;
        if (!is_square(y2.get_num(), &yn) || !is_square(y2.get_den(), &yd)) return;
        Rat y(yn, yd);
        y.canonicalize();
        for (const Rat& yy : {y, Rat(-y)}) {
            RPoint P{x, yy, false};
            if (std::find(found.begin(), found.end(), P) == found.end() && point_order(S, P, static_cast<int>(g)))
                found.push_back(P);
        }
    };
    if (g > 1) {
        auto f = division_polynomials(A, B, static_cast<int>(g));
        Poly cubic = {B, A, 0, 1};
        for (long k = 2; k <= g; ++k) {
            if (g % k) continue;
            Poly poly = k % 2 ? f[k] : poly_mul(cubic, f[k]);
            for (const Rat& x : rational_roots(poly)) consider(x);
        }
    }
    // close under addition
    for (bool grew = true; grew;) {
        grew = false;
        for (size_t i = 0; i < found.size(); ++i)
            for (size_t j = i; j < found.size(); ++j) {
                RPoint R = detail::add_unchecked(S, found[i], found[j]);
                if (std::find(found.begin(), found.end(), R) == found.end()) {
                    found.push_back(R);
                    grew = true;
                }
            }
    }

    TorsionData td;
    int N = static_cast<int>(found.size());
    int two_torsion = 0;
    for (const auto& P : found)
        if (!P.inf && P.y == 0) ++two_torsion;
    std::vector<RPoint> gens;
    if (N > 1) {
        if (two_torsion == 3) {
            td.structure = {2, N / 2};
            RPoint big;
            for (const auto& P : found)
                if (point_order(S, P, N) == N / 2) big = P;
            std::vector<RPoint> cyc = {RPoint::infinity()};
            for (RPoint Q = big; !Q.inf; Q = detail::add_unchecked(S, Q, big)) cyc.push_back(Q);
            RPoint other;
            for (const auto& P : found)
                if (!P.inf && P.y == 0 && std::find(cyc.begin(), cyc.end(), P) == cyc.end()) {
                    other = P;
                    break;
                }
            gens = {other, big};
        } else {
            td.structure = {N};
            for (const auto& P : found)
                if (point_order(S, P, N) == N) {
                    gens = {P};
                    break;
                }
        }
    }
    for (const auto& P : found) td.points.push_back(map_point(back, P));
    for (const auto& P : gens) td.generators.push_back(map_point(back, P));
    return td;
}

RPoint Isogeny::operator()(const RPoint& P) const {
    if (P.inf) return P;
    if (P.x == 0) return RPoint::infinity();
    const Rat& x = P.x;
    const Rat& y = P.y;
    Rat b = domain.a6;
    Rat x3 = x * x * x;
    if (!dual) return {(x3 + 4 * b) / (9 * x * x), y * (x3 - 8 * b) / (27 * x3), false};
    return {(x3 + 4 * b) / (x * x), y * (x3 - 8 * b) / x3, false};
}

ThreeIsogeny three_isogeny(const CurveModel& En) {
    if (En.family != Family::En) throw Error(ErrorKind::InvalidFamily, "three_isogeny needs an E_n model");
    ThreeIsogeny r;
    CurveModel Ep = CurveModel::Eprime(En.n);
    r.phi = Isogeny{En, Ep, false, En.n};
    r.dual = Isogeny{Ep, En, true, En.n};
    r.kernel_polynomial = {0, 1};
    return r;
}

std::string LocalData::str() const {
    return "l=" + prime.get_str() + " " + kodaira + " f=" + std::to_string(conductor_exponent) +
           " c=" + std::to_string(tamagawa);
}

namespace {

struct IntModel {
    Int a1, a2, a3, a4, a6;

    Int b2() const { return a1 * a1 + 4 * a2; }
    Int b4() const { return 2 * a4 + a1 * a3; }
    Int b6() const { return a3 * a3 + 4 * a6; }
    Int b8() const { return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4; }
    Int c4() const { return b2() * b2() - 24 * b4(); }
    Int c6() const { return -b2() * b2() * b2() + 36 * b2() * b4() - 216 * b6(); }
    Int disc() const {
        Int B2 = b2(), B4 = b4(), B6 = b6(), B8 = b8();
        return -B2 * B2 * B8 - 8 * B4 * B4 * B4 - 27 * B6 * B6 + 9 * B2 * B4 * B6;
    }

    // u = 1 change of coordinates with integral r, s, t
    void shift(const Int& r, const Int& s, const Int& t) {
        Int n1 = a1 + 2 * s;
        Int n2 = a2 - s * a1 + 3 * r - s * s;
        Int n3 = a3 + r * a1 + 2 * t;
        Int n4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t;
        Int n6 = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1;
        a1 = n1;
        a2 = n2;
        a3 = n3;
        a4 = n4;
        a6 = n6;
    }
};

IntModel to_int(const CurveModel& E) {
    if (!E.is_integral()) throw Error(ErrorKind::NotCoprime, "model not integral: " + E.str());
    return {E.a1.get_num(), E.a2.get_num(), E.a3.get_num(), E.a4.get_num(), E.a6.get_num()};
}

bool divides(const Int& d, const Int& x) { return x % d == 0; }

Int eval_mod(const std::vector<Int>& c, const Int& x, const Int& p) {
    Int r = 0;
    for (size_t i = c.size(); i-- > 0;) r = modp(r * x + c[i], p);
    return r;
}

// distinct roots mod p of sum c_i T^i (p small)
std::vector<Int> roots_mod(const std::vector<Int>& c, const Int& p) {
    std::vector<Int> r;
    for (Int x = 0; x < p; ++x)
        if (eval_mod(c, x, p) == 0) r.push_back(x);
    return r;
}

bool quadratic_has_root(const Int& b, const Int& c, const Int& p) {
    // T^2 + b T + c
    if (p == 2) return !roots_mod({c, b, 1}, p).empty();
    Int d = modp(b * b - 4 * c, p);
    if (d == 0) return true;
    return mpz_legendre(d.get_mpz_t(), p.get_mpz_t()) == 1;
}

Int inv_mod(const Int& a, const Int& p) {
    Int r;
    Int am = modp(a, p);
    if (mpz_invert(r.get_mpz_t(), am.get_mpz_t(), p.get_mpz_t()) == 0)
        throw Error(ErrorKind::NotCoprime, "no inverse of " + a.get_str() + " mod " + p.get_str());
    return r;
}

struct TateResult {
    LocalData data;
    Transform T;  // from the integral input to the p-minimal model
};

TateResult tate(IntModel E, const Int& p) {
    TateResult res;
    res.data.prime = p;
    Transform& total = res.T;
    auto do_shift = [&](const Int& r, const Int& s, const Int& t) {
        E.shift(r, s, t);
        total = compose(total, Transform{1, Rat(r), Rat(s), Rat(t)});
    };
    const Int p2 = p * p, p3 = p2 * p, p4 = p3 * p, p6 = p3 * p3;
    LocalData& ld = res.data;

    for (;;) {
        Int D = E.disc();
        long v = val(D, p.get_ui());
        ld.disc_valuation = v;
        if (v == 0) {
            ld.kodaira = "I0";
            ld.conductor_exponent = 0;
            ld.tamagawa = 1;
            return res;
        }
        // move the singular point of the reduction to (0, 0)
        Int r, t;
        if (p <= 3) {
            bool ok = false;
            for (Int x = 0; x < p && !ok; ++x)
                for (Int y = 0; y < p && !ok; ++y) {
                    Int F = y * y + E.a1 * x * y + E.a3 * y - x * x * x - E.a2 * x * x - E.a4 * x - E.a6;
                    Int Fx = E.a1 * y - 3 * x * x - 2 * E.a2 * x - E.a4;
                    Int Fy = 2 * y + E.a1 * x + E.a3;
                    if (divides(p, F) && divides(p, Fx) && divides(p, Fy)) {
                        r = x;
                        t = y;
                        ok = true;
                    }
                }
            if (!ok) throw Error(ErrorKind::Singular, "no singular point mod " + p.get_str());
        } else {
            Int c4 = E.c4(), b2 = E.b2();
            if (divides(p, c4)) r = modp(-b2 * inv_mod(12, p), p);
            else r = modp(-(E.c6() + b2 * c4) * inv_mod(12 * c4, p), p);
            t = modp(-(E.a1 * r + E.a3) * inv_mod(2, p), p);
        }
        do_shift(r, 0, t);

        if (!divides(p, E.c4())) {
            ld.split = quadratic_has_root(E.a1, -E.a2, p);
            ld.kodaira = "I" + std::to_string(v);
            ld.conductor_exponent = 1;
            ld.tamagawa = ld.split ? static_cast<int>(v) : (v % 2 ? 1 : 2);
            return res;
        }
        if (!divides(p2, E.a6)) {
            ld.kodaira = "II";
            ld.conductor_exponent = static_cast<int>(v);
            ld.tamagawa = 1;
            return res;
        }
        if (!divides(p3, E.b8())) {
            ld.kodaira = "III";
            ld.conductor_exponent = static_cast<int>(v - 1);
            ld.tamagawa = 2;
            return res;
        }
        if (!divides(p3, E.b6())) {
            ld.kodaira = "IV";
            ld.conductor_exponent = static_cast<int>(v - 2);
            ld.tamagawa = quadratic_has_root(E.a3 / p, -E.a6 / p2, p) ? 3 : 1;
            return res;
        }
        // now p | a1, a2; p^2 | a3, a4; p^3 | a6
        Int s;
        if (p == 2) {
            s = modp(E.a2, 2);
            t = 2 * modp(E.a6 / 4, 2);
        } else {
            s = modp(-E.a1 * inv_mod(2, p), p);
            t = modp(-E.a3 * inv_mod(2, p2), p2);
        }
        do_shift(0, s, t);

        Int b = E.a2 / p, c = E.a4 / p2, d = E.a6 / p3;
        Int w = 27 * d * d - b * b * c * c + 4 * b * b * b * d - 18 * b * c * d + 4 * c * c * c;
        Int x = 3 * c - b * b;
        if (!divides(p, w)) {
            ld.kodaira = "I0*";
            ld.conductor_exponent = static_cast<int>(v - 4);
            ld.tamagawa = 1 + static_cast<int>(roots_mod({d, c, b, 1}, p).size());
            return res;
        }
        if (!divides(p, x)) {
            // double root of the cubic
            Int r0;
            bool found = false;
            for (const Int& z : roots_mod({d, c, b, 1}, p))
                if (divides(p, 3 * z * z + 2 * b * z + c)) {
                    r0 = z;
                    found = true;
                }
            if (!found) throw Error(ErrorKind::Singular, "no double root in Tate's algorithm");
            do_shift(p * r0, 0, 0);
            int ix = 3, iy = 3;
            Int mx = p2, my = p2;
            int cp = 0;
            for (;;) {
                Int xa2 = E.a2 / p, xa3 = E.a3 / my, xa4 = E.a4 / (p * mx), xa6 = E.a6 / (mx * my);
                if (!divides(p, xa3 * xa3 + 4 * xa6)) {
                    cp = quadratic_has_root(xa3, -xa6, p) ? 4 : 2;
                    break;
                }
                Int tt = roots_mod({modp(-xa6, p), xa3, 1}, p).front();
                do_shift(0, 0, tt * my);
                my *= p;
                ++iy;
                xa2 = E.a2 / p;
                xa3 = E.a3 / my;
                xa4 = E.a4 / (p * mx);
                xa6 = E.a6 / (mx * my);
                if (!divides(p, xa4 * xa4 - 4 * xa2 * xa6)) {
                    std::vector<Int> rts = roots_mod({xa6, xa4, xa2}, p);
                    cp = rts.empty() ? 2 : 4;
                    break;
                }
                Int rr = roots_mod({xa6, xa4, xa2}, p).front();
                do_shift(rr * mx, 0, 0);
                mx *= p;
                ++ix;
            }
            int m = ix + iy - 5;
            ld.kodaira = "I" + std::to_string(m) + "*";
            ld.conductor_exponent = static_cast<int>(v - m - 4);
            ld.tamagawa = cp;
            return res;
        }
        // triple root
        Int r0;
        if (p == 2) r0 = modp(b, 2);
        else if (p == 3) r0 = modp(-d, 3);
        else r0 = modp(-b * inv_mod(3, p), p);
        do_shift(p * r0, 0, 0);
        Int x3 = E.a3 / p2, x6 = E.a6 / p4;
        if (!divides(p, x3 * x3 + 4 * x6)) {
            ld.kodaira = "IV*";
            ld.conductor_exponent = static_cast<int>(v - 6);
            ld.tamagawa = quadratic_has_root(x3, -x6, p) ? 3 : 1;
            return res;
        }
        Int tt = roots_mod({modp(-x6, p), x3, 1}, p).front();
        do_shift(0, 0, tt * p2);
        if (!divides(p4, E.a4)) {
            ld.kodaira = "III*";
            ld.conductor_exponent = static_cast<int>(v - 7);
            ld.tamagawa = 2;
            return res;
        }
        if (!divides(p6, E.a6)) {
            ld.kodaira = "II*";
            ld.conductor_exponent = static_cast<int>(v - 8);
            ld.tamagawa = 1;
            return res;
        }
        // not minimal at p
        E = IntModel{E.a1 / p, E.a2 / p2, E.a3 / p3, E.a4 / p4, E.a6 / p6};
        total = compose(total, Transform{Rat(p), 0, 0, 0});
    }
}

}  // namespace

Transform integralize(const CurveModel& E) {
    Int d = den_lcm({E.a1, E.a2, E.a3, E.a4, E.a6});
    if (d == 1) return {};
    return Transform{Rat(1, d), 0, 0, 0};
}

LocalData tate_local_data(const CurveModel& E, const Int& l) {
    CurveModel I = apply(E, integralize(E));
    return tate(to_int(I), l).data;
}

Transform minimize_at(const CurveModel& E, const Int& l) { return tate(to_int(E), l).T; }

std::vector<Int> bad_primes(const CurveModel& E) {
    CurveModel I = apply(E, integralize(E));
    std::vector<Int> out;
    for (const auto& [q, e] : factor_int(abs(I.disc().get_num()))) {
        (void)e;
        out.push_back(q);
    }
    return out;
}

MinimalModel minimal_model(const CurveModel& E) {
    Transform T = integralize(E);
    CurveModel M = apply(E, T);
    for (const Int& q : bad_primes(M)) {
        Transform Tq = minimize_at(M, q);
        M = apply(M, Tq);
        T = compose(T, Tq);
    }
    // reduced form: a1, a3 in {0, 1}, a2 in {-1, 0, 1}
    Int a1 = M.a1.get_num();
    Int a1r = modp(a1, 2);
    Int s = (a1r - a1) / 2;
    Int a2t = M.a2.get_num() - s * a1 - s * s;
    Int a2r = modp(a2t + 1, 3) - 1;
    Int r = (a2r - a2t) / 3;
    Int a3t = M.a3.get_num() + r * a1;
    Int t = (modp(a3t, 2) - a3t) / 2;
    Transform N{1, Rat(r), Rat(s), Rat(t)};
    M = apply(M, N);
    T = compose(T, N);
    if (T.is_identity()) M.family = E.family;
    M.n = E.n;
    return {M, T};
}

MinimalModel minimal_short_model(const CurveModel& E) {
    Transform T = short_form_transform(E);
    CurveModel S = apply(E, T);
    Transform I = integralize(S);
    S = apply(S, I);
    T = compose(T, I);
    Int A = S.a4.get_num(), B = S.a6.get_num();
    Int u = 1;
    for (const Int& q : bad_primes(S)) {
        for (;;) {
            Int q4 = int_pow(q, 4), q6 = int_pow(q, 6);
            if (!divides(q4, A) || !divides(q6, B)) break;
            A /= q4;
            B /= q6;
            u *= q;
        }
    }
    Transform U{Rat(u), 0, 0, 0};
    S = apply(S, U);
    T = compose(T, U);
    if (T.is_identity()) S.family = E.family;
    S.n = E.n;
    return {S, T};
}

std::vector<LocalData> local_data(const CurveModel& E) {
    std::vector<LocalData> out;
    CurveModel M = minimal_model(E).model;
    for (const Int& q : bad_primes(M)) out.push_back(tate(to_int(M), q).data);
    return out;
}

Int conductor(const CurveModel& E) {
    Int N = 1;
    for (const auto& ld : local_data(E)) N *= int_pow(ld.prime, static_cast<unsigned long>(ld.conductor_exponent));
    return N;
}

int tamagawa_product(const CurveModel& E) {
    int c = 1;
    for (const auto& ld : local_data(E)) c *= ld.tamagawa;
    return c;
}

namespace {

Real agm(Real a, Real b, unsigned bits) {
    Real eps = pow2(-static_cast<long>(bits));
    for (int i = 0; i < 10000; ++i) {
        Real an = (a + b) / 2;
        Real bn = sqrt(a * b);
        a = an;
        b = bn;
        if (abs(a - b) <= eps * abs(a)) break;
    }
    return (a + b) / 2;
}

}  // namespace

RealWithError model_period(const CurveModel& E, unsigned bits) {
    if (bits > 65536) throw Error(ErrorKind::PrecisionBudgetExceeded, "real period beyond 65536 bits");
    if (E.disc() > 0) throw Error(ErrorKind::Inconclusive, "real period implemented for negative discriminant only");
    unsigned work = bits + 40;
    PrecisionGuard guard(work);
    Real b2 = to_real(E.b2()), b4 = to_real(E.b4()), b6 = to_real(E.b6());
    auto g = [&](const Real& x) { return ((4 * x + b2) * x + 2 * b4) * x + b6; };
    auto dg = [&](const Real& x) { return (12 * x + 2 * b2) * x + 2 * b4; };
    Real R = 1 + abs(b2) / 4 + abs(b4) / 2 + abs(b6) / 4;
    Real lo = -R, hi = R;
    for (int i = 0; i < 80; ++i) {
        Real mid = (lo + hi) / 2;
        if (g(mid) < 0) lo = mid;
        else hi = mid;
    }
    Real e1 = (lo + hi) / 2;
    Real tol = pow2(-static_cast<long>(work));
    for (int i = 0; i < 200; ++i) {
        Real d = dg(e1);
        if (d == 0) break;
        Real step = g(e1) / d;
        e1 -= step;
        if (abs(step) <= tol * (1 + abs(e1))) break;
    }
    Real a = 3 * e1 + b2 / 4;
    Real b = sqrt(3 * e1 * e1 + b2 * e1 / 2 + b4 / 2);
    Real omega = 2 * real_pi() / agm(2 * sqrt(b), sqrt(2 * b + a), work);
    return {omega, abs(omega) * pow2(-static_cast<long>(bits))};
}

RealWithError real_period(const CurveModel& E, unsigned bits) { return model_period(minimal_model(E).model, bits); }

}  // namespace cubesum
