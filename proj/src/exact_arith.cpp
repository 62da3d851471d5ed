#include "cubesum/exact_arith.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace cubesum {

const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::BoundExceeded: return "BoundExceeded";
        case ErrorKind::NotCoprime: return "NotCoprime";
        case ErrorKind::ResidueCharThree: return "ResidueCharThree";
        case ErrorKind::Singular: return "Singular";
        case ErrorKind::BadPrimeClass: return "BadPrimeClass";
        case ErrorKind::WildPlace: return "WildPlace";
        case ErrorKind::ZeroArgument: return "ZeroArgument";
        case ErrorKind::LiftNotFound: return "LiftNotFound";
        case ErrorKind::PointNotOnCurve: return "PointNotOnCurve";
        case ErrorKind::PrecisionBudgetExceeded: return "PrecisionBudgetExceeded";
        case ErrorKind::NormalizationFailure: return "NormalizationFailure";
        case ErrorKind::SignMismatch: return "SignMismatch";
        case ErrorKind::Inconclusive: return "Inconclusive";
        case ErrorKind::DegenerateCert: return "DegenerateCert";
        case ErrorKind::TorsionImage: return "TorsionImage";
        case ErrorKind::NotFound: return "NotFound";
        case ErrorKind::TorsionPoint: return "TorsionPoint";
        case ErrorKind::NoGenerator: return "NoGenerator";
        case ErrorKind::PrecisionTooLow: return "PrecisionTooLow";
        case ErrorKind::RecognitionFailed: return "RecognitionFailed";
        case ErrorKind::InvalidFamily: return "InvalidFamily";
        case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

Valuation valuation(const Int& n, const Int& p) {
    Valuation v;
    v.prime = p;
    if (n == 0) {
        v.infinite = true;
        return v;
    }
    Int m = abs(n);
    while (m % p == 0) {
        m /= p;
        ++v.exponent;
    }
    return v;
}

Valuation valuation(const Rat& x, const Int& p) {
    Valuation v;
    v.prime = p;
    if (x == 0) {
        v.infinite = true;
        return v;
    }
    v.exponent = valuation(x.get_num(), p).exponent - valuation(x.get_den(), p).exponent;
    return v;
}

long val(const Int& n, unsigned long p) {
    if (n == 0) return LONG_MAX;
    Valuation v = valuation(n, Int(p));
    return v.exponent;
}

bool is_prime(const Int& n) {
    if (n < 2) return false;
    return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0;
}

std::vector<std::pair<Int, int>> factor_int(Int n, const Int& bound) {
    if (n == 0) throw Error(ErrorKind::ZeroArgument, "factor_int(0)");
    n = abs(n);
    Int orig = n;
    std::vector<std::pair<Int, int>> out;
    auto strip = [&](const Int& d) {
        int e = 0;
        while (n % d == 0) {
            n /= d;
            ++e;
        }
        if (e) out.emplace_back(d, e);
    };
    strip(2);
    Int d = 3;
    for (; d * d <= n && d * d <= bound; d += 2) strip(d);
    if (n > 1) {
        if (d * d <= n && !is_prime(n)) throw Error(ErrorKind::BoundExceeded, "cannot factor " + orig.get_str());
        out.emplace_back(n, 1);
    }
    return out;
}

Int isqrt(const Int& n) {
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

bool is_square(const Int& n, Int* root) {
    if (n < 0) return false;
    if (mpz_perfect_square_p(n.get_mpz_t()) == 0) return false;
    if (root) *root = isqrt(n);
    return true;
}

Int sqrt_mod_prime(const Int& a0, const Int& p) {
    Int a = a0 % p;
    if (a < 0) a += p;
    if (a == 0) return 0;
    if (p == 2) return a;
    auto powm = [&](const Int& b, const Int& e) {
        Int r;
        mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
        return r;
    };
    if (powm(a, (p - 1) / 2) != 1) throw Error(ErrorKind::NotFound, "no square root mod " + p.get_str());
    Int q = p - 1;
    long s = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++s;
    }
    Int z = 2;
    while (powm(z, (p - 1) / 2) != p - 1) ++z;
    Int c = powm(z, q), x = powm(a, (q + 1) / 2), t = powm(a, q);
    long m = s;
    while (t != 1) {
        long i = 0;
        Int t2 = t;
        while (t2 != 1) {
            t2 = t2 * t2 % p;
            ++i;
        }
        Int b = c;
        for (long j = 0; j < m - i - 1; ++j) b = b * b % p;
        x = x * b % p;
        c = b * b % p;
        t = t * c % p;
        m = i;
    }
    return x;
}

Int rat_num(const Rat& x) { return x.get_num(); }
Int rat_den(const Rat& x) { return x.get_den(); }

std::string to_string(const Rat& x) { return x.get_str(); }

std::string Eis::str() const {
    std::ostringstream os;
    if (b == 0) {
        os << a;
    } else if (a == 0) {
        os << (b == 1 ? "" : b == -1 ? "-" : b.get_str()) << "w";
    } else {
        os << a << (b > 0 ? "+" : "-");
        Int ab = abs(b);
        if (ab != 1) os << ab;
        os << "w";
    }
    return os.str();
}

Eis operator+(const Eis& x, const Eis& y) { return {x.a + y.a, x.b + y.b}; }
Eis operator-(const Eis& x, const Eis& y) { return {x.a - y.a, x.b - y.b}; }
Eis operator-(const Eis& x) { return {-x.a, -x.b}; }

// (a + b w)(c + d w) = ac + (ad + bc) w + bd w^2, with w^2 = -1 - w.
Eis operator*(const Eis& x, const Eis& y) {
    Int bd = x.b * y.b;
    return {x.a * y.a - bd, x.a * y.b + x.b * y.a - bd};
}

bool operator==(const Eis& x, const Eis& y) { return x.a == y.a && x.b == y.b; }

Int eis_norm(const Eis& z) { return z.a * z.a - z.a * z.b + z.b * z.b; }
Int eis_trace(const Eis& z) { return 2 * z.a - z.b; }
Eis eis_conj(const Eis& z) { return {z.a - z.b, -z.b}; }

Eis eis_pow(Eis z, unsigned long e) {
    Eis r(1);
    while (e) {
        if (e & 1) r = r * z;
        z = z * z;
        e >>= 1;
    }
    return r;
}

static Int round_div(const Int& x, const Int& n) {
    // nearest integer to x/n for n > 0
    Int t = 2 * x + n;
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), t.get_mpz_t(), Int(2 * n).get_mpz_t());
    return q;
}

bool eis_divides(const Eis& d, const Eis& z) {
    if (d.is_zero()) return z.is_zero();
    Int n = eis_norm(d);
    Eis t = z * eis_conj(d);
    return t.a % n == 0 && t.b % n == 0;
}

Eis eis_div_exact(const Eis& z, const Eis& d) {
    if (d.is_zero()) throw Error(ErrorKind::ZeroArgument, "division by zero");
    Int n = eis_norm(d);
    Eis t = z * eis_conj(d);
    if (t.a % n != 0 || t.b % n != 0) throw Error(ErrorKind::NotCoprime, d.str() + " does not divide " + z.str());
    return {t.a / n, t.b / n};
}

Eis eis_mod(const Eis& z, const Eis& m) {
    Int n = eis_norm(m);
    Eis t = z * eis_conj(m);
    Eis q{round_div(t.a, n), round_div(t.b, n)};
    return z - m * q;
}

Eis eis_powmod(Eis z, Int e, const Eis& m) {
    Eis r = eis_mod(Eis(1), m);
    z = eis_mod(z, m);
    while (e > 0) {
        if (e % 2 == 1) r = eis_mod(r * z, m);
        z = eis_mod(z * z, m);
        e /= 2;
    }
    return r;
}

int Root::order() const {
    int o = 1;
    while ((e * o) % 12 != 0) ++o;
    return o;
}

std::string Root::str() const {
    switch (e) {
        case 0: return "1";
        case 6: return "-1";
        case 3: return "i";
        case 9: return "-i";
        case 4: return "w";
        case 8: return "w^2";
        case 10: return "-w";
        case 2: return "-w^2";
        default: return "zeta12^" + std::to_string(e);
    }
}

Eis unit_eis(int k6) {
    switch (((k6 % 6) + 6) % 6) {
        case 0: return {1, 0};
        case 1: return {1, 1};
        case 2: return {0, 1};
        case 3: return {-1, 0};
        case 4: return {-1, -1};
        default: return {0, -1};
    }
}

Root unit_root(const Eis& z) {
    for (int k = 0; k < 6; ++k)
        if (unit_eis(k) == z) return Root(2 * k);
    throw Error(ErrorKind::NormalizationFailure, z.str() + " is not a unit");
}

Eis cornacchia_prime(const Int& q) {
    if (q == 3) return Eis::sqrt_m3();
    if (q % 3 != 1 || !is_prime(q)) throw Error(ErrorKind::BadPrimeClass, q.get_str() + " is not a split prime");
    Int r = sqrt_mod_prime(q - 3, q);
    Int a = q, b = r;
    if (2 * b < q) b = q - b;
    while (b * b > q) {
        Int t = a % b;
        a = b;
        b = t;
    }
    Int rest = q - b * b, y;
    if (rest % 3 != 0 || !is_square(rest / 3, &y)) throw Error(ErrorKind::NotFound, "Cornacchia failed for " + q.get_str());
    // b + y sqrt(-3) = (b + y) + 2y w
    return {b + y, 2 * y};
}

static Int mod3(const Int& x) {
    Int r = x % 3;
    if (r < 0) r += 3;
    return r;
}

Eis primary_associate(const Eis& pi, int* unit_out) {
    for (int k = 0; k < 6; ++k) {
        Eis c = unit_eis(k) * pi;
        if (mod3(c.a) == 2 && mod3(c.b) == 0) {
            if (unit_out) *unit_out = k;
            return c;
        }
    }
    if (unit_out) *unit_out = 0;
    return pi;
}

EisFactorization eis_factor(const Int& n, const Int& bound) {
    if (n == 0) throw Error(ErrorKind::ZeroArgument, "eis_factor(0)");
    EisFactorization f;
    if (n < 0) f.unit = 3;
    for (auto& [q, e] : factor_int(n, bound)) {
        if (q == 3) {
            // 3 = -(1+2w)^2
            f.factors.push_back({Eis::sqrt_m3(), 2 * e});
            f.unit = (f.unit + 3 * e) % 6;
        } else if (q % 3 == 2) {
            f.factors.push_back({Eis(q, 0), e});
        } else {
            Eis pi = primary_associate(cornacchia_prime(q));
            f.factors.push_back({pi, e});
            f.factors.push_back({eis_conj(pi), e});
        }
    }
    if (eis_expand(f) != Eis(n, 0)) throw Error(ErrorKind::NormalizationFailure, "factorization of " + n.get_str());
    return f;
}

EisFactorization eis_factor_element(const Eis& z, const Int& bound) {
    if (z.is_zero()) throw Error(ErrorKind::ZeroArgument, "eis_factor_element(0)");
    EisFactorization f;
    Eis rest = z;
    auto strip = [&](const Eis& pi) {
        int e = 0;
        while (eis_divides(pi, rest)) {
            rest = eis_div_exact(rest, pi);
            ++e;
        }
        if (e) f.factors.push_back({pi, e});
    };
    for (auto& [q, e] : factor_int(eis_norm(z), bound)) {
        (void)e;
        if (q == 3) {
            strip(Eis::sqrt_m3());
        } else if (q % 3 == 2) {
            strip(Eis(q, 0));
        } else {
            Eis pi = primary_associate(cornacchia_prime(q));
            strip(pi);
            strip(eis_conj(pi));
        }
    }
    f.unit = unit_root(rest).e / 2;
    if (eis_expand(f) != z) throw Error(ErrorKind::NormalizationFailure, "factorization of " + z.str());
    return f;
}

Eis eis_expand(const EisFactorization& f) {
    Eis r = unit_eis(f.unit);
    for (auto& fac : f.factors) r = r * eis_pow(fac.prime, static_cast<unsigned long>(fac.multiplicity));
    return r;
}

Place Place::split(const Eis& pi) {
    Int n = eis_norm(pi);
    if (!is_prime(n)) throw Error(ErrorKind::BadPrimeClass, pi.str() + " does not have prime norm");
    return {pi, n, n};
}

Place Place::inert(const Int& p) {
    if (p % 3 != 2 || !is_prime(p)) throw Error(ErrorKind::BadPrimeClass, p.get_str() + " is not inert");
    return {Eis(p, 0), p, p * p};
}

Place Place::ramified() { return {Eis::sqrt_m3(), 3, 3}; }

Place Place::over(const Eis& pi) {
    Int n = eis_norm(pi);
    if (is_prime(n)) return split(pi);
    Int r;
    if (is_square(n, &r) && is_prime(r) && r % 3 == 2) return inert(r);
    throw Error(ErrorKind::BadPrimeClass, pi.str() + " is not a prime of Z[w]");
}

std::string Place::str() const { return "(" + pi.str() + ")"; }

long eis_val(const Eis& z, const Place& v) {
    if (z.is_zero()) return LONG_MAX;
    long e = 0;
    Eis t = z;
    while (eis_divides(v.pi, t)) {
        t = eis_div_exact(t, v.pi);
        ++e;
    }
    return e;
}

Root power_residue(const Eis& alpha, const Place& v, int m) {
    if (alpha.is_zero()) throw Error(ErrorKind::ZeroArgument, "residue symbol of 0");
    if (m != 1 && m != 2 && m != 3 && m != 6) throw Error(ErrorKind::WildPlace, "unsupported degree");
    if ((v.q - 1) % m != 0) throw Error(ErrorKind::WildPlace, "degree " + std::to_string(m) + " at " + v.str());
    if (eis_divides(v.pi, alpha)) throw Error(ErrorKind::NotCoprime, alpha.str() + " at " + v.str());
    Eis r = eis_powmod(alpha, (v.q - 1) / m, v.pi);
    int step = 6 / m;
    for (int k = 0; k < 6; k += step) {
        if (eis_divides(v.pi, r - unit_eis(k))) return Root(2 * k);
    }
    throw Error(ErrorKind::NormalizationFailure, "residue symbol is not a root of unity");
}

Root cubic_residue_symbol(const Eis& alpha, const Eis& pi) {
    Place v = Place::over(pi);
    if (v.p == 3) throw Error(ErrorKind::ResidueCharThree, pi.str());
    return power_residue(alpha, v, 3);
}

std::string Mat2::str() const {
    return "(" + a.get_str() + "," + b.get_str() + ";" + c.get_str() + "," + d.get_str() + ")";
}

Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

Mat2 operator+(const Mat2& x, const Mat2& y) { return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d}; }

Mat2 operator*(const Rat& s, const Mat2& x) { return {s * x.a, s * x.b, s * x.c, s * x.d}; }

bool operator==(const Mat2& x, const Mat2& y) { return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d; }

Mat2 inverse(const Mat2& m) {
    Rat dt = m.det();
    if (dt == 0) throw Error(ErrorKind::Singular, m.str());
    return {m.d / dt, -m.b / dt, -m.c / dt, m.a / dt};
}

Mat2 conj(const Mat2& m, const Mat2& g) { return inverse(g) * m * g; }

Mat2 mat_pow(const Mat2& m, int k) {
    Mat2 base = k < 0 ? inverse(m) : m;
    Mat2 r = Mat2::identity();
    for (int i = 0; i < (k < 0 ? -k : k); ++i) r = r * base;
    return r;
}

}  // namespace cubesum

namespace cubesum {

Poly poly_trim(Poly f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
    return f;
}

int poly_deg(const Poly& f) { return static_cast<int>(poly_trim(f).size()) - 1; }

Poly poly_add(const Poly& f, const Poly& g) {
    Poly r(std::max(f.size(), g.size()), Rat(0));
    for (size_t i = 0; i < f.size(); ++i) r[i] += f[i];
    for (size_t i = 0; i < g.size(); ++i) r[i] += g[i];
    return poly_trim(r);
}

Poly poly_sub(const Poly& f, const Poly& g) { return poly_add(f, poly_scale(g, -1)); }

Poly poly_mul(const Poly& f, const Poly& g) {
    if (f.empty() || g.empty()) return {};
    Poly r(f.size() + g.size() - 1, Rat(0));
    for (size_t i = 0; i < f.size(); ++i)
        if (f[i] != 0)
            for (size_t j = 0; j < g.size(); ++j) r[i + j] += f[i] * g[j];
    return poly_trim(r);
}

Poly poly_scale(const Poly& f, const Rat& c) {
    Poly r = f;
    for (auto& x : r) x *= c;
    return poly_trim(r);
}

Poly poly_deriv(const Poly& f) {
    Poly r;
    for (size_t i = 1; i < f.size(); ++i) r.push_back(f[i] * static_cast<long>(i));
    return poly_trim(r);
}

std::pair<Poly, Poly> poly_divmod(const Poly& f0, const Poly& g0) {
    Poly f = poly_trim(f0), g = poly_trim(g0);
    if (g.empty()) throw Error(ErrorKind::ZeroArgument, "polynomial division by zero");
    if (f.size() < g.size()) return {{}, f};
    Poly q(f.size() - g.size() + 1, Rat(0));
    while (f.size() >= g.size() && !f.empty()) {
        size_t k = f.size() - g.size();
        Rat c = f.back() / g.back();
        q[k] = c;
        for (size_t i = 0; i < g.size(); ++i) f[i + k] -= c * g[i];
        f = poly_trim(f);
    }
    return {poly_trim(q), f};
}

Poly poly_gcd(Poly f, Poly g) {
    f = poly_trim(f);
    g = poly_trim(g);
    while (!g.empty()) {
        Poly r = poly_divmod(f, g).second;
        f = g;
        g = r;
    }
    if (!f.empty()) f = poly_scale(f, 1 / f.back());
    return f;
}

Rat poly_eval(const Poly& f, const Rat& x) {
    Rat r = 0;
    for (size_t i = f.size(); i-- > 0;) r = r * x + f[i];
    return r;
}

std::string poly_str(const Poly& f) {
    std::string s;
    for (size_t i = f.size(); i-- > 0;) {
        if (f[i] == 0) continue;
        if (!s.empty()) s += " + ";
        s += f[i].get_str();
        if (i) s += "*x^" + std::to_string(i);
    }
    return s.empty() ? "0" : s;
}

namespace {

using ModPoly = std::vector<long>;

ModPoly mod_trim(ModPoly f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
    return f;
}

long inv_mod(long a, long m) {
    long t = 0, nt = 1, r = m, nr = ((a % m) + m) % m;
    while (nr) {
        long q = r / nr;
        std::tie(t, nt) = std::make_pair(nt, t - q * nt);
        std::tie(r, nr) = std::make_pair(nr, r - q * nr);
    }
    return ((t % m) + m) % m;
}

ModPoly mod_rem(ModPoly f, const ModPoly& g, long l) {
    long inv = inv_mod(g.back(), l);
    while (f.size() >= g.size() && !f.empty()) {
        size_t k = f.size() - g.size();
        long c = f.back() * inv % l;
        for (size_t i = 0; i < g.size(); ++i) f[i + k] = ((f[i + k] - c * g[i]) % l + l) % l;
        f = mod_trim(f);
    }
    return f;
}

int mod_gcd_deg(ModPoly f, ModPoly g, long l) {
    f = mod_trim(f);
    g = mod_trim(g);
    while (!g.empty()) {
        ModPoly r = mod_rem(f, g, l);
        f = g;
        g = r;
    }
    return static_cast<int>(f.size()) - 1;
}

Int eval_int(const std::vector<Int>& f, const Int& x, const Int& m) {
    Int r = 0;
    for (size_t i = f.size(); i-- > 0;) r = (r * x + f[i]) % m;
    return r;
}

bool rational_reconstruct(const Int& x, const Int& m, Rat& out) {
    Int bound = isqrt(m / 2);
    Int r0 = m, r1 = ((x % m) + m) % m, s0 = 0, s1 = 1;
    while (r1 > bound) {
        Int q = r0 / r1;
        Int r2 = r0 - q * r1, s2 = s0 - q * s1;
        r0 = r1;
        r1 = r2;
        s0 = s1;
        s1 = s2;
    }
    if (s1 == 0 || abs(s1) > bound) return false;
    out = Rat(r1, s1);
    out.canonicalize();
    return true;
}

}  // namespace

std::vector<Rat> rational_roots(const Poly& f0) {
    Poly f = poly_trim(f0);
    std::vector<Rat> roots;
    if (poly_deg(f) <= 0) return roots;
    f = poly_divmod(f, poly_gcd(f, poly_deriv(f))).first;
    if (f[0] == 0) {
        roots.push_back(0);
        f.erase(f.begin());
        f = poly_trim(f);
    }
    if (poly_deg(f) <= 0) return roots;
    Int den = 1;
    for (auto& c : f) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
    std::vector<Int> F;
    Int content = 0;
    for (auto& c : f) {
        Rat t = c * den;
        F.push_back(t.get_num());
        mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), F.back().get_mpz_t());
    }
    for (auto& c : F) c /= content;
    std::vector<Int> dF;
    for (size_t i = 1; i < F.size(); ++i) dF.push_back(F[i] * static_cast<long>(i));
    Int bound = 2 * abs(F.front()) * abs(F.back()) + 1;

    for (long l = 101;; l += 2) {
        if (!is_prime(Int(l)) || F.back() % l == 0) continue;
        ModPoly fm, dm;
        for (auto& c : F) fm.push_back(Int(((c % l) + l) % l).get_si());
        for (auto& c : dF) dm.push_back(Int(((c % l) + l) % l).get_si());
        if (mod_gcd_deg(fm, dm, l) != 0) continue;
        for (long x0 = 0; x0 < l; ++x0) {
            if (eval_int(F, x0, l) != 0) continue;
            Int x = x0, m = l;
            while (m <= bound * bound) {
                Int m2 = m * m;
                Int fx = eval_int(F, x, m2), dx = eval_int(dF, x, m2), inv;
                mpz_invert(inv.get_mpz_t(), dx.get_mpz_t(), m2.get_mpz_t());
                x = ((x - fx * inv) % m2 + m2) % m2;
                m = m2;
            }
            Rat r;
            if (rational_reconstruct(x, m, r) && poly_eval(f, r) == 0) roots.push_back(r);
        }
        break;
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace cubesum
