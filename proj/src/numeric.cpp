#include "cubesum/numeric.hpp"

#include <cmath>
#include <cstdio>
#include <vector>

namespace cubesum {

unsigned digits_for_bits(unsigned bits) { return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1; }

PrecisionGuard::PrecisionGuard(unsigned bits) : saved_(Real::default_precision()) {
    Real::default_precision(digits_for_bits(bits));
}

PrecisionGuard::~PrecisionGuard() { Real::default_precision(saved_); }

Real real_pi() {
    Real r;
    mpfr_const_pi(r.backend().data(), MPFR_RNDN);
    return r;
}

Real real_euler_gamma() {
    Real r;
    mpfr_const_euler(r.backend().data(), MPFR_RNDN);
    return r;
}

Real to_real(const Rat& q) {
    Real r;
    mpfr_set_q(r.backend().data(), q.get_mpq_t(), MPFR_RNDN);
    return r;
}

Real to_real(const Int& n) {
    Real r;
    mpfr_set_z(r.backend().data(), n.get_mpz_t(), MPFR_RNDN);
    return r;
}

Real working(const Real& x) {
    Real r;
    mpfr_set(r.backend().data(), x.backend().data(), MPFR_RNDN);
    return r;
}

Real pow2(long e) {
    Real r = 1;
    mpfr_mul_2si(r.backend().data(), r.backend().data(), e, MPFR_RNDN);
    return r;
}

std::string fmt(const Real& x, int digits) {
    std::vector<char> buf(static_cast<size_t>(digits) + 64);
    mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, x.backend().data());
    return buf.data();
}

double to_double(const Real& x) { return mpfr_get_d(x.backend().data(), MPFR_RNDN); }

Rat recognize_rational(const Real& x, const Int& max_den) {
    // continued fraction convergents of x
    Real t = x;
    Int h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    Rat best = 0;
    for (int it = 0; it < 200; ++it) {
        Real fl = floor(t);
        Int a;
        mpfr_get_z(a.get_mpz_t(), fl.backend().data(), MPFR_RNDN);
        Int h2 = a * h1 + h0, k2 = a * k1 + k0;
        if (abs(k2) > max_den) break;
        best = Rat(h2, k2);
        best.canonicalize();
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        Real frac = t - fl;
        if (frac == 0 || abs(frac) < pow2(-static_cast<long>(mpfr_get_prec(x.backend().data())) + 8)) break;
        t = 1 / frac;
    }
    return best;
}

}  // namespace cubesum
