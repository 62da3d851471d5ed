#pragma once

#include <gmpxx.h>

#include <climits>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cubesum/error.hpp"

namespace cubesum {

using Int = mpz_class;
using Rat = mpq_class;

// v_p of a nonzero integer or rational; infinite is flagged for zero.
struct Valuation {
    Int prime;
    long exponent = 0;
    bool infinite = false;

    bool operator>=(long k) const { return infinite || exponent >= k; }
};

Valuation valuation(const Int& n, const Int& p);
Valuation valuation(const Rat& x, const Int& p);
long val(const Int& n, unsigned long p);  // LONG_MAX for zero

bool is_prime(const Int& n);
// Trial division by d with d^2 <= bound; a cofactor left over must be prime.
std::vector<std::pair<Int, int>> factor_int(Int n, const Int& bound = Int("1000000000000"));
Int isqrt(const Int& n);
bool is_square(const Int& n, Int* root = nullptr);
Int sqrt_mod_prime(const Int& a, const Int& p);
Int rat_num(const Rat& x);
Int rat_den(const Rat& x);
std::string to_string(const Rat& x);

// a + b*omega with omega^2 + omega + 1 = 0.
struct Eis {
    Int a = 0, b = 0;

    Eis() = default;
    Eis(Int a_, Int b_) : a(std::move(a_)), b(std::move(b_)) {}
    Eis(long a_) : a(a_), b(0) {}
    explicit Eis(const Int& a_) : a(a_), b(0) {}

    static Eis omega() { return {0, 1}; }
    static Eis sqrt_m3() { return {1, 2}; }
    bool is_zero() const { return a == 0 && b == 0; }
    std::string str() const;
};

Eis operator+(const Eis& x, const Eis& y);
Eis operator-(const Eis& x, const Eis& y);
Eis operator-(const Eis& x);
Eis operator*(const Eis& x, const Eis& y);
bool operator==(const Eis& x, const Eis& y);
inline bool operator!=(const Eis& x, const Eis& y) { return !(x == y); }

Int eis_norm(const Eis& z);
Int eis_trace(const Eis& z);
Eis eis_conj(const Eis& z);
Eis eis_pow(Eis z, unsigned long e);
bool eis_divides(const Eis& d, const Eis& z);
Eis eis_div_exact(const Eis& z, const Eis& d);
Eis eis_mod(const Eis& z, const Eis& m);
Eis eis_powmod(Eis z, Int e, const Eis& m);

// Root of unity zeta12^e, stored as the exponent e mod 12.
struct Root {
    int e = 0;

    Root() = default;
    explicit Root(int k) : e(((k % 12) + 12) % 12) {}
    static Root one() { return Root(0); }
    static Root i() { return Root(3); }
    static Root minus_one() { return Root(6); }
    static Root omega() { return Root(4); }
    static Root omega2() { return Root(8); }

    Root operator*(Root o) const { return Root(e + o.e); }
    Root inv() const { return Root(-e); }
    Root pow(long k) const { return Root(static_cast<int>((static_cast<long>(e) * (k % 12)) % 12)); }
    bool operator==(Root o) const { return e == o.e; }
    bool operator!=(Root o) const { return e != o.e; }
    int order() const;
    std::string str() const;
};

// The six units zeta6^k = zeta12^{2k}.
Eis unit_eis(int k6);
// Root corresponding to a unit of Z[omega]; throws if z is not a unit.
Root unit_root(const Eis& z);

struct EisFactor {
    Eis prime;
    int multiplicity;
};

struct EisFactorization {
    int unit = 0;  // zeta6 exponent
    std::vector<EisFactor> factors;
};

Eis cornacchia_prime(const Int& q);
Eis primary_associate(const Eis& pi, int* unit_out = nullptr);
EisFactorization eis_factor(const Int& n, const Int& bound = Int("1000000000000"));
EisFactorization eis_factor_element(const Eis& z, const Int& bound = Int("1000000000000"));
Eis eis_expand(const EisFactorization& f);

// A prime of Z[omega]: generator, residue characteristic and residue field size.
struct Place {
    Eis pi;
    Int p;
    Int q;

    static Place split(const Eis& pi);
    static Place inert(const Int& p);
    static Place ramified();
    static Place over(const Eis& pi);
    bool operator==(const Place& o) const { return p == o.p && eis_divides(pi, o.pi) && eis_divides(o.pi, pi); }
    std::string str() const;
};

long eis_val(const Eis& z, const Place& v);
Root power_residue(const Eis& alpha, const Place& v, int m);
Root cubic_residue_symbol(const Eis& alpha, const Eis& pi);

struct Mat2 {
    Rat a = 0, b = 0, c = 0, d = 0;

    static Mat2 identity() { return {1, 0, 0, 1}; }
    Rat det() const { return a * d - b * c; }
    Rat trace() const { return a + d; }
    std::string str() const;
};

Mat2 operator*(const Mat2& x, const Mat2& y);
Mat2 operator+(const Mat2& x, const Mat2& y);
Mat2 operator*(const Rat& s, const Mat2& x);
bool operator==(const Mat2& x, const Mat2& y);
inline bool operator!=(const Mat2& x, const Mat2& y) { return !(x == y); }
Mat2 inverse(const Mat2& m);
Mat2 conj(const Mat2& m, const Mat2& g);
Mat2 mat_pow(const Mat2& m, int k);

// Dense univariate polynomials over Q, coefficient i multiplies x^i.
using Poly = std::vector<Rat>;

Poly poly_trim(Poly f);
int poly_deg(const Poly& f);
Poly poly_add(const Poly& f, const Poly& g);
Poly poly_sub(const Poly& f, const Poly& g);
Poly poly_mul(const Poly& f, const Poly& g);
Poly poly_scale(const Poly& f, const Rat& c);
Poly poly_deriv(const Poly& f);
std::pair<Poly, Poly> poly_divmod(const Poly& f, const Poly& g);
Poly poly_gcd(Poly f, Poly g);
Rat poly_eval(const Poly& f, const Rat& x);
std::string poly_str(const Poly& f);

// All rational roots, by p-adic lifting and rational reconstruction; each root is checked exactly.
std::vector<Rat> rational_roots(const Poly& f);

}  // namespace cubesum
