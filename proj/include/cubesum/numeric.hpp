#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <string>

#include "cubesum/exact_arith.hpp"

namespace cubesum {

using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;

// Guard bits the L-series and report arithmetic carry above the requested precision.
constexpr unsigned kGuardBits = 64;

unsigned digits_for_bits(unsigned bits);

// Sets the process-wide working precision for the lifetime of the guard.
class PrecisionGuard {
public:
    explicit PrecisionGuard(unsigned bits);
    ~PrecisionGuard();
    PrecisionGuard(const PrecisionGuard&) = delete;
    PrecisionGuard& operator=(const PrecisionGuard&) = delete;

private:
    unsigned saved_;
};

// Copy of x at the current default precision; arithmetic keeps the left operand's precision.
Real working(const Real& x);
Real real_pi();
Real real_euler_gamma();
Real to_real(const Rat& q);
Real to_real(const Int& n);
Real pow2(long e);
std::string fmt(const Real& x, int digits = 25);
double to_double(const Real& x);

struct Complex {
    Real re, im;
};

// Nearest rational with denominator at most max_den, by continued fractions.
Rat recognize_rational(const Real& x, const Int& max_den);

}  // namespace cubesum
