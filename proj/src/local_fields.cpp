#include "cubesum/local_fields.hpp"

#include <map>

#include "cubesum/modular_actions.hpp"

namespace cubesum {

namespace {

Int modp(const Int& x, const Int& m) {
    Int r = x % m;
    if (r < 0) r += m;
    return r;
}

LocalUnitGroup make_group_3() {
    LocalUnitGroup g;
    g.place = 3;
    g.modulus = 9;
    g.generators = {{Eis(-1, 0), 2}, {Eis(2, 2), 3}, {Eis(0, -2), 3}, {Eis(4, 6), 3}};
    g.order = 54;
    return g;
}

LocalUnitGroup make_group_2() {
    LocalUnitGroup g;
    g.place = 2;
    g.modulus = 4;
    g.generators = {{Eis(0, 1), 3}, {Eis(1, 2), 2}};
    g.order = 6;
    return g;
}

Eis pi_power_inverse_num(int j) {
    // pi^{-1} = -pi/3, so pi^{-j} = (-1)^j pi^j / 3^j
    Eis n = eis_pow(Eis::sqrt_m3(), static_cast<unsigned long>(j));
    return j % 2 ? -n : n;
}

Int pow3(int j) {
    Int r = 1;
    for (int i = 0; i < j; ++i) r *= 3;
    return r;
}

// y in pi^j O
bool in_pi_power(const KElement& y, int j) {
    Eis num = y.num;
    Int den = y.den;
    if (j < 0) {
        num = num * eis_pow(Eis::sqrt_m3(), static_cast<unsigned long>(-j));
    } else {
        return eis_divides(Eis(den) * eis_pow(Eis::sqrt_m3(), static_cast<unsigned long>(j)), num);
    }
    return eis_divides(Eis(den), num);
}

}  // namespace

Eis LocalUnitGroup::reduce(const Eis& u) const { return {modp(u.a, modulus), modp(u.b, modulus)}; }

bool LocalUnitGroup::is_unit(const Eis& u) const { return eis_norm(u) % place != 0; }

bool LocalUnitGroup::same_class(const Eis& x, const Eis& y) const {
    if (place == 3) return reduce(x) == reduce(y);
    return reduce(x) == reduce(y) || reduce(x) == reduce(Eis(3) * y);
}

Eis LocalUnitGroup::element(const std::vector<int>& exps) const {
    Eis r(1);
    for (size_t i = 0; i < generators.size(); ++i) {
        int e = ((exps[i] % generators[i].second) + generators[i].second) % generators[i].second;
        for (int k = 0; k < e; ++k) r = reduce(r * generators[i].first);
    }
    return reduce(r);
}

std::vector<int> LocalUnitGroup::dlog(const Eis& u) const {
    if (!is_unit(u)) throw Error(ErrorKind::NotCoprime, u.str() + " is not a unit at " + std::to_string(place));
    std::vector<int> e(generators.size(), 0);
    while (true) {
        if (same_class(element(e), u)) return e;
        size_t i = 0;
        while (i < e.size() && ++e[i] == generators[i].second) e[i++] = 0;
        if (i == e.size()) break;
    }
    throw Error(ErrorKind::NotFound, "no discrete log for " + u.str());
}

std::vector<Eis> LocalUnitGroup::elements() const {
    std::vector<Eis> out;
    std::vector<int> e(generators.size(), 0);
    while (true) {
        out.push_back(element(e));
        size_t i = 0;
        while (i < e.size() && ++e[i] == generators[i].second) e[i++] = 0;
        if (i == e.size()) break;
    }
    return out;
}

const LocalUnitGroup& unit_group_3() {
    static const LocalUnitGroup g = make_group_3();
    return g;
}

const LocalUnitGroup& unit_group_2() {
    static const LocalUnitGroup g = make_group_2();
    return g;
}

Root CharacterTable::eval_unit(const Eis& u) const {
    auto e = unit_group_3().dlog(u);
    Root r;
    for (size_t i = 0; i < e.size(); ++i) r = r * values[i].pow(e[i]);
    return r;
}

Root CharacterTable::eval(const Eis& x) const {
    if (x.is_zero()) throw Error(ErrorKind::ZeroArgument, "character at 0");
    long k = eis_val(x, Place::ramified());
    Eis u = eis_div_exact(x, eis_pow(Eis::sqrt_m3(), static_cast<unsigned long>(k)));
    return uniformizer_value.pow(k) * eval_unit(u);
}

int CharacterTable::conductor_exponent() const {
    const auto& g = unit_group_3();
    auto elems = g.elements();
    for (int k = 0; k <= 4; ++k) {
        Eis pk = eis_pow(Eis::sqrt_m3(), static_cast<unsigned long>(k));
        bool trivial = true;
        for (auto& u : elems)
            if (eis_divides(pk, u - Eis(1)) && eval_unit(u) != Root::one()) trivial = false;
        if (trivial) return k;
    }
    throw Error(ErrorKind::NormalizationFailure, label + " is not trivial on 1+9O");
}

std::string table_str(const CharacterTable& t) {
    std::string s = t.label + ": ";
    static const char* names[] = {"-1", "1+s", "1-s", "1+3s"};
    for (size_t i = 0; i < t.values.size(); ++i) s += std::string(names[i]) + "->" + t.values[i].str() + " ";
    s += "s->" + t.uniformizer_value.str();
    return s;
}

CharacterTable trivial_character() { return {"1", {Root(), Root(), Root(), Root()}, Root()}; }

Root tame_hilbert(const Eis& a, const Eis& b, const Place& v, int m) {
    if (a.is_zero() || b.is_zero()) throw Error(ErrorKind::ZeroArgument, "Hilbert symbol with 0");
    if (m % v.p == 0) throw Error(ErrorKind::WildPlace, v.str() + " for degree " + std::to_string(m));
    long va = eis_val(a, v), vb = eis_val(b, v);
    Eis a0 = eis_div_exact(a, eis_pow(v.pi, static_cast<unsigned long>(va)));
    Eis b0 = eis_div_exact(b, eis_pow(v.pi, static_cast<unsigned long>(vb)));
    Root r = power_residue(Eis(-1), v, m).pow(va * vb);
    if (va) r = r * power_residue(b0, v, m).pow(va);
    if (vb) r = r * power_residue(a0, v, m).pow(-vb);
    return r;
}

static int wild_prime(int m) {
    if (m == 3) return 3;
    if (m == 2) return 2;
    throw Error(ErrorKind::WildPlace, "degree " + std::to_string(m));
}

static std::vector<Eis> prime_list(const EisFactorization& f) {
    std::vector<Eis> out;
    for (auto& x : f.factors) out.push_back(x.prime);
    return out;
}

Eis wild_lift(const Eis& u, const Int& n, int m, int lift_index) {
    if (lift_index == 0) return u;
    int w = wild_prime(m);
    if (eis_norm(u) % w == 0) throw Error(ErrorKind::LiftNotFound, "lifts are only defined for units");
    Int modulus = w == 3 ? 9 : 8;
    auto nprimes = prime_list(eis_factor(n));
    int seen = 0;
    for (long r = 1; r <= 10000; ++r) {
        for (long x = -r; x <= r; ++x)
            for (long y = -r; y <= r; ++y) {
                if (std::max(std::labs(x), std::labs(y)) != r) continue;
                Eis alpha = u + Eis(modulus) * Eis(x, y);
                if (alpha.is_zero()) continue;
                bool ok = true;
                for (auto& pi : nprimes)
                    if (eis_norm(pi) % w != 0 && eis_divides(pi, alpha)) ok = false;
                if (ok && ++seen == lift_index) return alpha;
            }
    }
    throw Error(ErrorKind::LiftNotFound, "no lift of " + u.str());
}

Root wild_symbol_via_product_formula(const Eis& u, const Int& n, int m, int lift_index) {
    int w = wild_prime(m);
    Eis alpha = wild_lift(u, n, m, lift_index);
    Eis nn(n);
    std::vector<Place> places;
    auto add = [&](const Eis& pi) {
        Place v = Place::over(pi);
        if (v.p == w) return;
        for (auto& o : places)
            if (o == v) return;
        places.push_back(v);
    };
    for (auto& pi : prime_list(eis_factor_element(alpha))) add(pi);
    for (auto& pi : prime_list(eis_factor(n))) add(pi);
    Root prod;
    for (auto& v : places) prod = prod * tame_hilbert(alpha, nn, v, m);
    return prod.inv();
}

CharacterTable theta3_table() {
    return {"Theta_3", {Root::minus_one(), Root::omega2(), Root::omega(), Root::omega()}, Root::i()};
}

CharacterTable chi3_table(const Int& p, bool square) {
    Int n = square ? Int(3 * p * p) : Int(3 * p);
    CharacterTable t;
    t.label = square ? "chi_{3p^2,3}" : "chi_{3p,3}";
    for (auto& [g, ord] : unit_group_3().generators) {
        (void)ord;
        t.values.push_back(wild_symbol_via_product_formula(g, n, 3));
    }
    t.uniformizer_value = wild_symbol_via_product_formula(Eis::sqrt_m3(), n, 3);
    return t;
}

CharacterTable chi3_reference(int p_class, bool square) {
    // (1+s, 1+3s) values; chi is trivial on Q_3^x so chi(-1)=1 and chi(1-s)=chi(1+s)^{-1}
    Root first = ((p_class == 2) != square) ? Root::omega2() : Root::omega();
    CharacterTable t;
    t.label = square ? "chi_{3p^2,3} (published)" : "chi_{3p,3} (published)";
    t.values = {Root::one(), first, first.inv(), Root::omega()};
    t.uniformizer_value = Root::one();
    return t;
}

CharacterTable theta_chibar_reference(int p_class, bool square) {
    bool unramified_units = (p_class == 2) != square;
    CharacterTable t;
    t.label = square ? "Theta_3*conj(chi_{3p^2,3}) (published)" : "Theta_3*conj(chi_{3p,3}) (published)";
    if (unramified_units)
        t.values = {Root::minus_one(), Root::one(), Root::one(), Root::one()};
    else
        t.values = {Root::minus_one(), Root::omega(), Root::omega2(), Root::one()};
    t.uniformizer_value = Root::i();
    return t;
}

KElement theta_chibar_alpha_reference() { return {Eis(Int(-1)) * Eis::sqrt_m3(), 9}; }

CharacterTable delta_theta_table() {
    return {"Delta_theta", {Root::minus_one(), Root::one(), Root::one(), Root::one()}, Root(9)};
}

CharacterTable theta_small_table() {
    CharacterTable t = char_product(theta3_table(), delta_theta_table(), false);
    t.label = "theta_3";
    return t;
}

CharacterTable char_product(const CharacterTable& x, const CharacterTable& y, bool conjugate_y) {
    CharacterTable t;
    t.label = x.label + (conjugate_y ? "*conj(" : "*") + y.label + (conjugate_y ? ")" : "");
    for (size_t i = 0; i < x.values.size(); ++i) t.values.push_back(x.values[i] * (conjugate_y ? y.values[i].inv() : y.values[i]));
    t.uniformizer_value = x.uniformizer_value * (conjugate_y ? y.uniformizer_value.inv() : y.uniformizer_value);
    return t;
}

std::string KElement::str() const {
    if (den == 1) return num.str();
    return "(" + num.str() + ")/" + den.get_str();
}

Root psi_K(const KElement& y) {
    // exp(-2 pi i Tr y), defined here only when 12 Tr y is an integer
    Rat tr(eis_trace(y.num), y.den);
    tr.canonicalize();
    Rat t12 = 12 * tr;
    if (t12.get_den() != 1) throw Error(ErrorKind::NormalizationFailure, "psi value outside mu_12");
    Int e = modp(-t12.get_num(), 12);
    return Root(static_cast<int>(e.get_si()));
}

bool alpha_equivalent(const KElement& x, const KElement& y, int c) {
    KElement d{x.num * Eis(y.den) - y.num * Eis(x.den), x.den * y.den};
    return in_pi_power(d, -((c + 1) / 2) - 1);
}

std::vector<KElement> conductor_alphas(const CharacterTable& chi) {
    int c = chi.conductor_exponent();
    if (c == 0) return {};
    int half = (c + 1) / 2, low = c / 2;
    // representatives of O / pi^low O
    std::vector<Eis> reps;
    Eis pl = eis_pow(Eis::sqrt_m3(), static_cast<unsigned long>(low));
    Int box = pow3((low + 1) / 2);
    for (Int s = 0; s < box; ++s)
        for (Int t = 0; t < box; ++t) {
            Eis r(s, t);
            bool fresh = true;
            for (auto& o : reps)
                if (eis_divides(pl, r - o)) fresh = false;
            if (fresh) reps.push_back(r);
        }
    Eis ph = eis_pow(Eis::sqrt_m3(), static_cast<unsigned long>(half));
    Eis alpha_base = pi_power_inverse_num(c + 1);
    Int alpha_den = pow3(c + 1);
    std::vector<KElement> out;
    for (auto& beta : reps) {
        KElement alpha{alpha_base * beta, alpha_den};
        bool ok = true;
        for (auto& gamma : reps) {
            Eis x = ph * gamma;
            Eis unit = Eis(1) + x;
            Root lhs = chi.eval_unit(unit);
            Root rhs;
            try {
                rhs = psi_K({alpha.num * x, alpha.den});
            } catch (const Error&) {
                ok = false;
                break;
            }
            if (lhs != rhs) {
                ok = false;
                break;
            }
        }
        if (ok) out.push_back(alpha);
    }
    return out;
}

static Int representative_prime(int p_class) {
    if (p_class == 2) return 11;
    if (p_class == 5) return 5;
    throw Error(ErrorKind::BadPrimeClass, "class " + std::to_string(p_class));
}

ThetaChiConductor theta_chi_conductor_for(const Int& p, bool square) {
    CharacterTable theta = theta_small_table();
    CharacterTable chi = chi3_table(p, square);
    CharacterTable prod = char_product(theta, chi, true);
    ThetaChiConductor out;
    out.exponent = prod.conductor_exponent();
    out.twisted_exponent = char_product(theta, chi, false).conductor_exponent();
    auto alphas = conductor_alphas(prod);
    if (!alphas.empty()) out.alpha = alphas.front();
    return out;
}

ThetaChiConductor theta_chi_conductor(int p_class, bool square) {
    return theta_chi_conductor_for(representative_prime(p_class), square);
}

GaussSum gauss_sum_quadratic(int sign, unsigned bits) {
    PrecisionGuard g(bits + 32);
    Real two_pi_3 = 2 * real_pi() / 3;
    Complex acc{0, 0};
    for (int x = 1; x <= 2; ++x) {
        int eta = x == 1 ? 1 : -1;
        acc.re += eta * cos(two_pi_3 * x);
        acc.im += eta * sign * sin(two_pi_3 * x);
    }
    Real s3 = sqrt(Real(3));
    acc.re /= s3;
    acc.im /= s3;
    return {acc, pow2(-static_cast<long>(bits))};
}

Int ring_class_number(const Int& f) {
    if (f < 1) throw Error(ErrorKind::ZeroArgument, "conductor must be positive");
    if (f == 1) return 1;
    Rat h(f, 3);
    h.canonicalize();
    for (auto& [l, e] : factor_int(f)) {
        (void)e;
        int chi = l == 3 ? 0 : (l % 3 == 1 ? 1 : -1);
        h *= Rat(1) - Rat(chi, 1) / Rat(l);
    }
    if (h.get_den() != 1) throw Error(ErrorKind::NormalizationFailure, "class number not integral");
    return h.get_num();
}

std::vector<Assertion> verify_LCF(const Int& p) {
    int cls = prime_class(p);
    std::vector<Assertion> out;
    auto add = [&](const std::string& name, Root got, Root want) {
        out.push_back({name, got == want, got.str()});
    };
    add("(cbrt 3)^(sigma_{1+3w at 3} - 1) = w^2", wild_symbol_via_product_formula(Eis(1, 3), 3, 3), Root::omega2());
    add("(cbrt 3)^(sigma_{w at 3} - 1) = 1", wild_symbol_via_product_formula(Eis::omega(), 3, 3), Root::one());
    add(std::string("(cbrt p)^(sigma_{w at 3} - 1) = ") + (cls == 2 ? "w" : "w^2"),
        wild_symbol_via_product_formula(Eis::omega(), p, 3), cls == 2 ? Root::omega() : Root::omega2());
    add("(sqrt -1)^(sigma_{1+2w at 2} - 1) = -1", wild_symbol_via_product_formula(Eis(1, 2), -1, 2), Root::minus_one());
    add("(cbrt 2)^(sigma_{w at 2} - 1) = w^2", tame_hilbert(Eis::omega(), Eis(2), Place::inert(2), 3), Root::omega2());
    Int h3p = ring_class_number(3 * p), h9p = ring_class_number(9 * p), h36p = ring_class_number(36 * p);
    out.push_back({"[H_9p : H_3p] = 3", h9p == 3 * h3p, Int(h9p / h3p).get_str()});
    out.push_back({"[H_3p : K(cbrt p)] = (p+1)/3", h3p == p + 1, Int(h3p / 3).get_str()});
    out.push_back({"[H_9 : K] = 3", ring_class_number(9) == 3, ring_class_number(9).get_str()});
    out.push_back({"[H_36p : H_9p] = 6", h36p == 6 * h9p, Int(h36p / h9p).get_str()});
    return out;
}

}  // namespace cubesum
