#pragma once

#include <string>
#include <vector>

#include "cubesum/curves.hpp"
#include "cubesum/numeric.hpp"

namespace cubesum {

// q + 1 - #E(F_q) by counting; q must be a good prime below 10^6.
long ap_pointcount(const CurveModel& E, long q);
// a_q for a curve with j = 0 via the sextic residue symbol at a primary prime above q; 0 for q = 2 mod 3.
long ap_cm(const CurveModel& E, long q);

struct CoeffStream {
    CurveModel curve;  // global minimal model
    Int conductor;
    long cutoff = 0;
    std::vector<long> a;  // a[n] for 0 <= n <= cutoff, a[0] = 0

    // threads = 0 picks hardware concurrency
    static CoeffStream build(const CurveModel& E, long cutoff, unsigned threads = 0, bool use_cm = true);
    long operator[](long n) const { return a.at(static_cast<size_t>(n)); }
};

// ceil(max(30, bits log2 / 2pi + 2) * sqrt(N) * stretch)
long default_cutoff(const Int& N, unsigned bits, double stretch = 1.0);

Real incomplete_gamma(const Real& s, const Real& y);  // Gamma(s, y), 0 < s < 2, y > 0
Real expint_e1(const Real& y);                         // E_1(y) = Gamma(0, y)

struct LValue {
    Real value;
    Real tail_bound;  // truncation tail plus accumulated rounding
    int derivative_order = 0;
    long terms = 0;
    Int conductor;
    int epsilon = 0;
};

// L(1) (order 0) or L'(1) (order 1) with the symmetric kernel; epsilon is the sign the formula assumes.
LValue l_value(const CoeffStream& s, int order, int epsilon, unsigned bits);
// Checks the sign against root_number first; SignMismatch if order and sign disagree.
LValue l_value(const CurveModel& E, int order, unsigned bits, long cutoff = 0);
// L(1) from Lambda(1) with the split point A != 1; nonzero only if the assumed sign is wrong or L(1) != 0.
LValue l_value_split(const CoeffStream& s, int epsilon, unsigned bits, double A = 1.2);

struct FEResidual {
    double t = 0;
    int epsilon = 0;
    Real lambda_plus, lambda_minus;  // Lambda(1 + t), Lambda(1 - t)
    Real residual;                   // |Lambda(1 + t) - eps Lambda(1 - t)|
    Real bound;
};

FEResidual fe_residual(const CoeffStream& s, int epsilon, double t, unsigned bits, double A = 1.2);

struct RootNumber {
    int epsilon = 0;
    std::string method;
    std::vector<FEResidual> accepted;  // true sign, one per t
    std::vector<FEResidual> rejected;  // the other sign
};

// Inconclusive when t = 0.05 and t = 0.1 disagree or neither sign fits.
RootNumber root_number(const CoeffStream& s, unsigned bits, const std::vector<double>& ts = {0.05, 0.1});
RootNumber root_number(const CurveModel& E, unsigned bits);

struct LocalSign {
    std::string place;
    int sign = 1;
};

// Local signs of the quaternion algebra for the twisted base change: only infinity is ramified.
std::vector<LocalSign> twisted_sign_table();

}  // namespace cubesum
