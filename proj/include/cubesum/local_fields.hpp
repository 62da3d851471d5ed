#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cubesum/exact_arith.hpp"
#include "cubesum/numeric.hpp"

namespace cubesum {

// Finite quotient of local units at 3 (mod 1+9O) or at 2 (mod Z_2^x (1+4O)).
struct LocalUnitGroup {
    int place = 3;
    std::vector<std::pair<Eis, int>> generators;
    Int modulus;
    int order = 0;

    Eis reduce(const Eis& u) const;
    bool is_unit(const Eis& u) const;
    bool same_class(const Eis& x, const Eis& y) const;
    std::vector<int> dlog(const Eis& u) const;
    Eis element(const std::vector<int>& exps) const;
    std::vector<Eis> elements() const;
};

const LocalUnitGroup& unit_group_3();
const LocalUnitGroup& unit_group_2();

// A character of K_3^x trivial on 1+9O: values on the unit generators and on sqrt(-3).
struct CharacterTable {
    std::string label;
    std::vector<Root> values;
    Root uniformizer_value;

    Root eval_unit(const Eis& u) const;
    Root eval(const Eis& x) const;
    int conductor_exponent() const;
    bool operator==(const CharacterTable& o) const { return values == o.values && uniformizer_value == o.uniformizer_value; }
};

std::string table_str(const CharacterTable& t);
CharacterTable trivial_character();

Root tame_hilbert(const Eis& a, const Eis& b, const Place& v, int m);

// The m-th Hilbert symbol (u, n) at the wild place (3 for m=3, 2 for m=2) through the product formula.
// lift_index 0 uses u itself; k >= 1 uses the k-th small lift congruent to u.
Root wild_symbol_via_product_formula(const Eis& u, const Int& n, int m, int lift_index = 0);
Eis wild_lift(const Eis& u, const Int& n, int m, int lift_index);

CharacterTable theta3_table();
// chi_{n,3}(x) = (x, n)_3 for n = 3p or 3p^2, computed from the product formula.
CharacterTable chi3_table(const Int& p, bool square);
// The tables printed in the literature, for comparison.
CharacterTable chi3_reference(int p_class, bool square);
CharacterTable delta_theta_table();
CharacterTable theta_small_table();  // theta_3 = Theta_3 * Delta
CharacterTable char_product(const CharacterTable& x, const CharacterTable& y, bool conjugate_y);

// alpha with chi(1+x) = psi(alpha x) on the top layer; nullopt when no candidate fits.
struct KElement {
    Eis num;
    Int den = 1;
    std::string str() const;
    bool operator==(const KElement& o) const { return num * Eis(o.den) == o.num * Eis(den); }
};
Root psi_K(const KElement& y);
// alpha and beta agree modulo pi^{-ceil(c/2)-1} O
bool alpha_equivalent(const KElement& x, const KElement& y, int c);
std::vector<KElement> conductor_alphas(const CharacterTable& chi);

// Published Theta_3 * conj(chi_3) tables, and alpha = 1/(3 sqrt(-3)) for the level-2 case of theta_3 * conj(chi_3).
CharacterTable theta_chibar_reference(int p_class, bool square);
KElement theta_chibar_alpha_reference();

struct ThetaChiConductor {
    int exponent = 0;
    std::optional<KElement> alpha;
    int twisted_exponent = 0;  // c(theta_3 chi_3) for the bound check
};
ThetaChiConductor theta_chi_conductor(int p_class, bool square);
ThetaChiConductor theta_chi_conductor_for(const Int& p, bool square);

struct GaussSum {
    Complex value;
    Real error_bound;
};
// sum over x in F_3^x of eta(x) exp(sign 2 pi i x / 3), divided by sqrt 3
GaussSum gauss_sum_quadratic(int sign = -1, unsigned bits = 128);

Int ring_class_number(const Int& f);

struct Assertion {
    std::string name;
    bool ok = false;
    std::string value;
};
std::vector<Assertion> verify_LCF(const Int& p);

}  // namespace cubesum
