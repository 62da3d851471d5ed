#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "cubesum/exact_arith.hpp"

namespace cubesum {

struct NamedMatrices {
    Mat2 W{0, 1, -243, 0};
    Mat2 A{28, Rat(1, 3), 81, 1};
    Mat2 B{1, 0, 81, 1};
    Mat2 C{1, Rat(1, 9), -27, -2};
    Mat2 R{-1, -1, 1, 0};  // omega acting on (omega, 1)
};

const NamedMatrices& named_matrices();

// p mod 9 class: 2 or 5; throws BadPrimeClass otherwise.
int prime_class(const Int& p);

struct Embedding {
    int index = 0;
    Int p;
    Mat2 M;
    Mat2 rho_omega;
};

Embedding build_embedding(int i, const Int& p);
// Matrix printed for rho_i(omega) in the literature, used to audit build_embedding.
Mat2 displayed_rho_omega(int i, const Int& p);
// rho(x + y omega) = x I + y rho(omega)
Mat2 rho_of(const Embedding& e, const Eis& z);

// Smallest f with {y : x + y rho(omega) in R0(3^5) for some x} = f Z.
Int order_conductor(const Embedding& e);
// The same quantity by scanning the divisors of 36p.
Int order_conductor_by_divisors(const Embedding& e);

struct VMembershipReport {
    Mat2 matrix;
    bool is_3integral = false;
    long lower_left_val3 = 0;  // LONG_MAX when the entry is zero
    bool diag_congruent_mod3 = false;
    bool det_is_3unit = false;
    bool verdict = false;
};

VMembershipReport check_in_V(const Mat2& m);

struct IdentityCheck {
    std::string name;
    bool ok = false;
    std::string detail;
};

std::vector<IdentityCheck> verify_unit_action_identities(const Int& p);

// A^i B^j C^k rho(omega) in V for 0 <= i,j,k <= 2.
std::vector<std::array<int, 3>> omega_words_in_V(const Embedding& e);

// Laurent polynomials in p with rational coefficients, for identities in p.
struct Laurent {
    std::map<int, Rat> c;

    static Laurent constant(const Rat& r);
    static Laurent p_pow(int k, const Rat& coeff = 1);
    Laurent operator+(const Laurent& o) const;
    Laurent operator*(const Laurent& o) const;
    bool operator==(const Laurent& o) const;
    Rat eval(const Rat& p) const;
    std::string str() const;
};

struct LMat {
    Laurent a, b, c, d;
    LMat operator*(const LMat& o) const;
    bool operator==(const LMat& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }
};

LMat lmat_const(const Mat2& m);
// A^2 B^2 rho_1(1+3 omega) with p kept symbolic.
LMat symbolic_a2b2_rho1_unit();
// The matrix with entries 783/p + 9508 etc.
LMat displayed_a2b2_rho1_unit();

}  // namespace cubesum
