#include "cubesum/modular_actions.hpp"

#include <sstream>

namespace cubesum {

const NamedMatrices& named_matrices() {
    static const NamedMatrices m;
    return m;
}

int prime_class(const Int& p) {
    if (p <= 2 || !is_prime(p)) throw Error(ErrorKind::BadPrimeClass, p.get_str() + " is not an odd prime");
    Int r = p % 9;
    if (r == 2) return 2;
    if (r == 5) return 5;
    throw Error(ErrorKind::BadPrimeClass, p.get_str() + " is " + r.get_str() + " mod 9");
}

static Mat2 m_matrix(int i, const Int& p) {
    Rat p9(p, 9);
    p9.canonicalize();
    switch (i) {
        case 1: return {p9, 0, 2, 1};
        case 2: return {p9, 0, 5, 1};
        case 3: return {p9, 0, 2, 4};
        default: throw Error(ErrorKind::BadPrimeClass, "embedding index " + std::to_string(i));
    }
}

Embedding build_embedding(int i, const Int& p) {
    prime_class(p);
    Embedding e;
    e.index = i;
    e.p = p;
    e.M = m_matrix(i, p);
    e.rho_omega = e.M * named_matrices().R * inverse(e.M);
    return e;
}

Mat2 displayed_rho_omega(int i, const Int& p) {
    Rat pr(p);
    switch (i) {
        case 1: return {1, -pr / 9, 27 / pr, -2};
        case 2: return {4, -pr / 9, 187 / pr, -5};
        case 3: return {Rat(-1, 2), -pr / 36, 27 / pr, Rat(-1, 2)};
        default: throw Error(ErrorKind::BadPrimeClass, "embedding index " + std::to_string(i));
    }
}

Mat2 rho_of(const Embedding& e, const Eis& z) { return Rat(z.a) * Mat2::identity() + Rat(z.b) * e.rho_omega; }

static Rat rat_lcm(const Rat& x, const Rat& y) {
    Int n, d;
    mpz_lcm(n.get_mpz_t(), x.get_num().get_mpz_t(), y.get_num().get_mpz_t());
    mpz_gcd(d.get_mpz_t(), x.get_den().get_mpz_t(), y.get_den().get_mpz_t());
    Rat r(n, d);
    r.canonicalize();
    return r;
}

Int order_conductor(const Embedding& e) {
    // y b in Z, y c in 3^5 Z, y (a - d) in Z; each condition is y in (m/|r|) Z.
    const Mat2& r = e.rho_omega;
    std::vector<Rat> gens;
    auto cond = [&](const Rat& coeff, const Rat& modulus) {
        if (coeff != 0) gens.push_back(modulus / abs(coeff));
    };
    cond(r.b, 1);
    cond(r.c, 243);
    cond(r.a - r.d, 1);
    Rat f = 1;
    for (auto& g : gens) f = rat_lcm(f, g);
    if (f.get_den() != 1) throw Error(ErrorKind::NormalizationFailure, "non-integral conductor " + f.get_str());
    return f.get_num();
}

Int order_conductor_by_divisors(const Embedding& e) {
    const Mat2& r = e.rho_omega;
    Int bound = 36 * e.p;
    auto ok = [&](const Int& y) {
        Rat b = y * r.b, c = y * r.c, t = y * (r.a - r.d);
        return b.get_den() == 1 && c.get_den() == 1 && c.get_num() % 243 == 0 && t.get_den() == 1;
    };
    for (Int d = 1; d <= bound; ++d)
        if (bound % d == 0 && ok(d)) return d;
    throw Error(ErrorKind::NotFound, "no divisor of 36p works");
}

VMembershipReport check_in_V(const Mat2& m) {
    VMembershipReport rep;
    rep.matrix = m;
    Int three = 3;
    rep.is_3integral = valuation(m.a, three) >= 0 && valuation(m.b, three) >= 0 && valuation(m.c, three) >= 0 &&
                       valuation(m.d, three) >= 0;
    Valuation vc = valuation(m.c, three);
    rep.lower_left_val3 = vc.infinite ? LONG_MAX : vc.exponent;
    rep.diag_congruent_mod3 = valuation(Rat(m.a - m.d), three) >= 1;
    Valuation vd = valuation(m.det(), three);
    rep.det_is_3unit = !vd.infinite && vd.exponent == 0;
    rep.verdict = rep.is_3integral && rep.lower_left_val3 >= 5 && rep.diag_congruent_mod3 && rep.det_is_3unit;
    return rep;
}

static std::string describe(const VMembershipReport& r) {
    std::ostringstream os;
    os << r.matrix.str() << " 3-integral=" << r.is_3integral << " v3(c)="
       << (r.lower_left_val3 == LONG_MAX ? std::string("inf") : std::to_string(r.lower_left_val3))
       << " a=d mod 3=" << r.diag_congruent_mod3 << " det unit=" << r.det_is_3unit;
    return os.str();
}

static Mat2 word(int i, int j, int k) {
    const auto& nm = named_matrices();
    return mat_pow(nm.A, i) * mat_pow(nm.B, j) * mat_pow(nm.C, k);
}

static Mat2 displayed_a2b2(const Int& p) {
    Rat pr(p);
    return {783 / pr + 9508, -2377 * pr / 3 - Rat(145, 3), 2268 / pr + 27540, -2295 * pr - 140};
}

std::vector<IdentityCheck> verify_unit_action_identities(const Int& p) {
    int cls = prime_class(p);
    Embedding r1 = build_embedding(1, p), r2 = build_embedding(2, p), r3 = build_embedding(3, p);
    Eis unit{1, 3};
    std::vector<IdentityCheck> out;
    auto member = [&](const std::string& name, const Mat2& m) {
        auto rep = check_in_V(m);
        out.push_back({name, rep.verdict, describe(rep)});
    };

    Mat2 a = word(2, 2, 0) * rho_of(r1, unit);
    out.push_back({"(a) A^2B^2 rho1(1+3w) equals the displayed matrix", a == displayed_a2b2(p), a.str()});
    out.push_back({"(a) displayed identity holds in Q(p)", symbolic_a2b2_rho1_unit() == displayed_a2b2_rho1_unit(),
                   "entries as Laurent polynomials in p"});
    member("(a) A^2B^2 rho1(1+3w) in V", a);
    if (cls == 2)
        member("(b) A C^2 rho1(w) in V", word(1, 0, 2) * r1.rho_omega);
    else
        member("(b) A^2 C^2 rho1(w) in V", word(2, 0, 2) * r1.rho_omega);
    member("(c) A^2B^2 rho2(1+3w) in V", word(2, 2, 0) * rho_of(r2, unit));
    member("(c) A^2B^2 rho3(1+3w) in V", word(2, 2, 0) * rho_of(r3, unit));
    for (const Embedding* e : {&r2, &r3}) {
        std::string rho = "rho" + std::to_string(e->index);
        if (cls == 2)
            member("(d) A B^2 C^2 " + rho + "(w) in V", word(1, 2, 2) * e->rho_omega);
        else
            member("(d) A^2 B^2 C^2 " + rho + "(w) in V", word(2, 2, 2) * e->rho_omega);
    }
    return out;
}

std::vector<std::array<int, 3>> omega_words_in_V(const Embedding& e) {
    std::vector<std::array<int, 3>> out;
    for (int i = 0; i <= 2; ++i)
        for (int j = 0; j <= 2; ++j)
            for (int k = 0; k <= 2; ++k)
                if (check_in_V(word(i, j, k) * e.rho_omega).verdict) out.push_back({i, j, k});
    return out;
}

Laurent Laurent::constant(const Rat& r) {
    Laurent l;
    if (r != 0) l.c[0] = r;
    return l;
}

Laurent Laurent::p_pow(int k, const Rat& coeff) {
    Laurent l;
    if (coeff != 0) l.c[k] = coeff;
    return l;
}

Laurent Laurent::operator+(const Laurent& o) const {
    Laurent r = *this;
    for (auto& [k, v] : o.c) {
        r.c[k] += v;
        if (r.c[k] == 0) r.c.erase(k);
    }
    return r;
}

Laurent Laurent::operator*(const Laurent& o) const {
    Laurent r;
    for (auto& [i, x] : c)
        for (auto& [j, y] : o.c) r.c[i + j] += x * y;
    for (auto it = r.c.begin(); it != r.c.end();) it = it->second == 0 ? r.c.erase(it) : std::next(it);
    return r;
}

bool Laurent::operator==(const Laurent& o) const { return c == o.c; }

Rat Laurent::eval(const Rat& p) const {
    Rat s = 0;
    for (auto& [k, v] : c) {
        Rat t = v;
        for (int i = 0; i < (k < 0 ? -k : k); ++i) t = k < 0 ? Rat(t / p) : Rat(t * p);
        s += t;
    }
    return s;
}

std::string Laurent::str() const {
    if (c.empty()) return "0";
    std::string s;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        if (!s.empty()) s += " + ";
        s += it->second.get_str();
        if (it->first != 0) s += "*p^" + std::to_string(it->first);
    }
    return s;
}

LMat LMat::operator*(const LMat& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}

LMat lmat_const(const Mat2& m) {
    return {Laurent::constant(m.a), Laurent::constant(m.b), Laurent::constant(m.c), Laurent::constant(m.d)};
}

LMat symbolic_a2b2_rho1_unit() {
    LMat m1{Laurent::p_pow(1, Rat(1, 9)), Laurent::constant(0), Laurent::constant(2), Laurent::constant(1)};
    LMat m1inv{Laurent::p_pow(-1, 9), Laurent::constant(0), Laurent::p_pow(-1, -18), Laurent::constant(1)};
    LMat rho = m1 * lmat_const(named_matrices().R) * m1inv;
    LMat three = lmat_const(Rat(3) * Mat2::identity());
    LMat unit = lmat_const(Mat2::identity());
    LMat r = three * rho;
    r = {r.a + unit.a, r.b, r.c, r.d + unit.d};
    return lmat_const(word(2, 2, 0)) * r;
}

LMat displayed_a2b2_rho1_unit() {
    return {Laurent::p_pow(-1, 783) + Laurent::constant(9508), Laurent::p_pow(1, Rat(-2377, 3)) + Laurent::constant(Rat(-145, 3)),
            Laurent::p_pow(-1, 2268) + Laurent::constant(27540), Laurent::p_pow(1, -2295) + Laurent::constant(-140)};
}

}  // namespace cubesum
