#include "cubesum/lseries.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace cubesum {

namespace {


Int short_constant(const CurveModel& E) {
    if (E.c4() != 0) throw Error(ErrorKind::InvalidFamily, "ap_cm needs j = 0: " + E.str());
    Rat D = -54 * E.c6();
    // clear denominators by sixth powers
    Int den = D.get_den();
    Int u = 1;
    for (const auto& [q, e] : factor_int(den)) {
        for (int i = 0; i < (e + 5) / 6; ++i) u *= q;
    }
    Int u6 = u * u * u * u * u * u;
    Rat scaled = D * Rat(u6);
    return scaled.get_num();
}

long ap_cm_with(const Int& D, long q) {
    if (q % 3 == 2) return 0;
    if (q % 3 != 1) throw Error(ErrorKind::BadPrimeClass, "ap_cm at q = 3");
    Eis pi = primary_associate(cornacchia_prime(Int(q)));
    if (Int(pi.a % 3 + 3) % 3 != 2 || pi.b % 3 != 0)
        throw Error(ErrorKind::NormalizationFailure, "no primary associate above " + std::to_string(q));
    Root chi = power_residue(Eis(Int(4 * D)), Place::split(pi), 6);
    int k = chi.e / 2;
    return -eis_trace(unit_eis(-k) * pi).get_si();
}

void sieve_spf(long n, std::vector<long>& spf) {
    spf.assign(static_cast<size_t>(n) + 1, 0);
    for (long i = 2; i <= n; ++i) {
        if (spf[i]) continue;
        for (long j = i; j <= n; j += i)
            if (!spf[j]) spf[j] = i;
    }
}

}  // namespace

long ap_pointcount(const CurveModel& E, long q) {
    if (q > 1000000) throw Error(ErrorKind::BoundExceeded, "point count beyond 10^6");
    CurveModel M = minimal_model(E).model;
    if (M.disc().get_num() % q == 0) throw Error(ErrorKind::NotCoprime, "bad reduction at " + std::to_string(q));
    return q + 1 - count_points_mod(M, q);
}

long ap_cm(const CurveModel& E, long q) {
    if (q == 2) {
        // 2 is inert in Q(sqrt -3), so good reduction at 2 is supersingular
        if (minimal_model(E).model.disc().get_num() % 2 == 0) throw Error(ErrorKind::NotCoprime, "bad reduction at 2");
        return 0;
    }
    Int D = short_constant(E);
    if (q == 3 || D % q == 0) throw Error(ErrorKind::NotCoprime, "ap_cm needs a good prime q != 3");
    return ap_cm_with(D, q);
}

long default_cutoff(const Int& N, unsigned bits, double stretch) {
    double c = std::max(30.0, bits * std::log(2.0) / (2 * M_PI) + 2);
    return static_cast<long>(std::ceil(c * std::sqrt(N.get_d()) * stretch));
}

CoeffStream CoeffStream::build(const CurveModel& E, long cutoff, unsigned threads, bool use_cm) {
    CoeffStream s;
    s.curve = minimal_model(E).model;
    std::vector<LocalData> bad = local_data(s.curve);
    s.conductor = 1;
    for (const auto& ld : bad)
        for (int i = 0; i < ld.conductor_exponent; ++i) s.conductor *= ld.prime;
    s.cutoff = cutoff;

    std::vector<long> spf;
    sieve_spf(cutoff, spf);
    std::vector<long> primes;
    for (long i = 2; i <= cutoff; ++i)
        if (spf[i] == i) primes.push_back(i);

    bool cm = use_cm && s.curve.c4() == 0;
    Int D = cm ? short_constant(s.curve) : Int(0);
    std::vector<long> ap(primes.size());
    auto bad_ap = [&](long q, long& out) {
        for (const auto& ld : bad)
            if (ld.prime == q) {
                if (ld.conductor_exponent == 1) out = ld.split ? 1 : -1;
                else out = 0;
                return true;
            }
        return false;
    };
    auto work = [&](size_t begin, size_t step) {
        for (size_t i = begin; i < primes.size(); i += step) {
            long q = primes[i];
            long v;
            if (bad_ap(q, v)) {
                ap[i] = v;
            } else if (cm && q > 3) {
                ap[i] = ap_cm_with(D, q);
            } else {
                ap[i] = q + 1 - count_points_mod(s.curve, q);
            }
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    if (threads == 1 || primes.size() < 1000) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
        for (auto& th : pool) th.join();
    }

    s.a.assign(static_cast<size_t>(cutoff) + 1, 0);
    if (cutoff >= 1) s.a[1] = 1;
    std::vector<long> apq(static_cast<size_t>(cutoff) + 1, 0);
    for (size_t i = 0; i < primes.size(); ++i) apq[primes[i]] = ap[i];
    for (long n = 2; n <= cutoff; ++n) {
        long q = spf[n];
        long m = n, k = 0;
        while (m % q == 0) {
            m /= q;
            ++k;
        }
        long pk = n / m;  // q^k
        if (m > 1) {
            s.a[n] = s.a[pk] * s.a[m];
            continue;
        }
        // prime power: a_{q^k} = a_q a_{q^{k-1}} - q a_{q^{k-2}} at good q, a_q^k at bad q
        long aq = apq[q];
        bool good = s.conductor % q != 0;
        if (k == 1) s.a[n] = aq;
        else if (good) s.a[n] = aq * s.a[n / q] - q * (k == 2 ? 1 : s.a[n / q / q]);
        else s.a[n] = aq * s.a[n / q];
    }
    return s;
}

Real incomplete_gamma(const Real& s, const Real& y) {
    if (y <= 0) throw Error(ErrorKind::ZeroArgument, "incomplete gamma needs y > 0");
    Real eps = pow2(-static_cast<long>(Real::default_precision() * 3.33));
    if (y < 24) {
        // Gamma(s) - gamma(s, y), gamma(s, y) = y^s e^{-y} sum y^k / (s (s+1) ... (s+k)); the difference cancels y / log 2 bits
        unsigned outer = Real::default_precision() * 3.33;
        unsigned inner = outer + static_cast<unsigned>(to_double(y) * 1.45) + 16;
        PrecisionGuard g(inner);
        Real sw = working(s), yw = working(y);
        eps = pow2(-static_cast<long>(inner));
        Real term = 1 / sw, sum = term;
        for (int k = 1; k < 100000; ++k) {
            term *= yw / (sw + k);
            sum += term;
            if (abs(term) <= eps * abs(sum)) break;
        }
        return tgamma(sw) - sum * exp(sw * log(yw) - yw);
    }
    // modified Lentz on the continued fraction
    Real tiny = pow2(-4000);
    Real b = y + 1 - s, c = 1 / tiny, d = 1 / b, h = d;
    for (int i = 1; i < 100000; ++i) {
        Real an = -i * (i - s);
        b += 2;
        d = an * d + b;
        if (abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (abs(c) < tiny) c = tiny;
        d = 1 / d;
        Real del = d * c;
        h *= del;
        if (abs(del - 1) <= eps) break;
    }
    return exp(s * log(y) - y) * h;
}

Real expint_e1(const Real& y) {
    if (y <= 0) throw Error(ErrorKind::ZeroArgument, "E1 needs y > 0");
    Real eps = pow2(-static_cast<long>(Real::default_precision() * 3.33));
    if (y < 24) {
        // alternating terms peak near e^y / y against a result near e^{-y} / y
        unsigned outer = Real::default_precision() * 3.33;
        PrecisionGuard g(outer + static_cast<unsigned>(to_double(y) * 2.9) + 16);
        Real yw = working(y);
        Real term = 1, sum = 0;
        for (int k = 1; k < 100000; ++k) {
            term *= -yw / k;
            Real t = term / k;
            sum += t;
            if (abs(t) <= eps * exp(-yw) / (yw + 1)) break;
        }
        return -real_euler_gamma() - log(yw) - sum;
    }
    return incomplete_gamma(Real(0), y);
}

namespace {

Real tail_geometric(const Real& first, const Real& ratio) { return first / (1 - ratio); }

Real x_of(const Int& N) { return 2 * real_pi() / sqrt(to_real(N)); }

}  // namespace

LValue l_value(const CoeffStream& s, int order, int epsilon, unsigned bits) {
    if (order != 0 && order != 1) throw Error(ErrorKind::SignMismatch, "derivative order must be 0 or 1");
    if ((order == 0 && epsilon != 1) || (order == 1 && epsilon != -1))
        throw Error(ErrorKind::SignMismatch, "order " + std::to_string(order) + " with sign " + std::to_string(epsilon));
    unsigned work = bits + kGuardBits;
    PrecisionGuard guard(work);
    Real x = x_of(s.conductor);
    Real sum = 0, abs_sum = 0;
    for (long n = 1; n <= s.cutoff; ++n) {
        long an = s.a[n];
        if (an == 0) continue;
        Real y = x * n;
        Real k = order == 0 ? exp(-y) : expint_e1(y);
        Real term = 2 * Real(an) / n * k;
        sum += term;
        abs_sum += abs(term);
    }
    // |a_n| <= d(n) sqrt(n) <= 2n, and E_1(y) <= e^{-y} / y
    long M = s.cutoff + 1;
    Real first = 4 * exp(-x * M);
    if (order == 1) first /= x * M;
    Real tail = tail_geometric(first, exp(-x));
    Real rounding = abs_sum * (s.cutoff + 10) * pow2(-static_cast<long>(work) + 4);
    LValue v;
    v.value = sum;
    v.tail_bound = tail + rounding;
    v.derivative_order = order;
    v.terms = s.cutoff;
    v.conductor = s.conductor;
    v.epsilon = epsilon;
    return v;
}

namespace {

// Lambda(s) = sum a_n [ (xn)^{-s} Gamma(s, xnA) + eps (xn)^{s-2} Gamma(2-s, xn/A) ]
struct LambdaEval {
    Real value, bound;
};

LambdaEval lambda_split(const CoeffStream& s, int epsilon, const Real& sv, const Real& A, unsigned work) {
    Real x = x_of(s.conductor);
    Real sum = 0, abs_sum = 0;
    Real two_minus = 2 - sv;
    for (long n = 1; n <= s.cutoff; ++n) {
        long an = s.a[n];
        if (an == 0) continue;
        Real xn = x * n;
        Real t1 = exp(-sv * log(xn)) * incomplete_gamma(sv, xn * A);
        Real t2 = exp((sv - 2) * log(xn)) * incomplete_gamma(two_minus, xn / A);
        Real term = Real(an) * (t1 + epsilon * t2);
        sum += term;
        abs_sum += abs(term);
    }
    // Gamma(a, y) <= 2 y^{a-1} e^{-y} for 0 < a <= 2, y >= 2; |a_n| <= 2n
    long M = s.cutoff + 1;
    Real xm = x * M;
    if (xm / A < 2) throw Error(ErrorKind::PrecisionTooLow, "cutoff too small for the tail estimate");
    Real b1 = 2 * M * exp(-sv * log(xm)) * 2 * exp((sv - 1) * log(xm * A) - xm * A);
    Real b2 = 2 * M * exp((sv - 2) * log(xm)) * 2 * exp((1 - sv) * log(xm / A) - xm / A);
    Real tail = tail_geometric(b1 + b2, exp(-x / A));
    Real rounding = abs_sum * (s.cutoff + 10) * pow2(-static_cast<long>(work) + 8);
    return {sum, tail + rounding};
}

}  // namespace

LValue l_value_split(const CoeffStream& s, int epsilon, unsigned bits, double A) {
    unsigned work = bits + kGuardBits;
    PrecisionGuard guard(work);
    Real x = x_of(s.conductor);
    LambdaEval l = lambda_split(s, epsilon, Real(1), Real(A), work);
    LValue v;
    v.value = l.value * x;  // L(1) = x Lambda(1)
    v.tail_bound = l.bound * x;
    v.terms = s.cutoff;
    v.conductor = s.conductor;
    v.epsilon = epsilon;
    return v;
}

FEResidual fe_residual(const CoeffStream& s, int epsilon, double t, unsigned bits, double A) {
    unsigned work = bits + kGuardBits;
    PrecisionGuard guard(work);
    Real tt = t;
    LambdaEval p = lambda_split(s, epsilon, 1 + tt, Real(A), work);
    LambdaEval m = lambda_split(s, epsilon, 1 - tt, Real(A), work);
    FEResidual r;
    r.t = t;
    r.epsilon = epsilon;
    r.lambda_plus = p.value;
    r.lambda_minus = m.value;
    r.residual = abs(p.value - epsilon * m.value);
    r.bound = p.bound + m.bound;
    return r;
}

RootNumber root_number(const CoeffStream& s, unsigned bits, const std::vector<double>& ts) {
    RootNumber rn;
    rn.method = "numeric functional equation";
    int agreed = 0;
    for (double t : ts) {
        FEResidual plus = fe_residual(s, 1, t, bits);
        FEResidual minus = fe_residual(s, -1, t, bits);
        bool ok_plus = plus.residual <= plus.bound, ok_minus = minus.residual <= minus.bound;
        int eps = ok_plus == ok_minus ? 0 : (ok_plus ? 1 : -1);
        if (eps == 0)
            throw Error(ErrorKind::Inconclusive, "functional equation undecided at t = " + std::to_string(t));
        if (agreed != 0 && eps != agreed)
            throw Error(ErrorKind::Inconclusive, "signs disagree between sample points");
        agreed = eps;
        rn.accepted.push_back(eps == 1 ? plus : minus);
        rn.rejected.push_back(eps == 1 ? minus : plus);
    }
    rn.epsilon = agreed;
    return rn;
}

RootNumber root_number(const CurveModel& E, unsigned bits) {
    Int N = conductor(E);
    CoeffStream s = CoeffStream::build(E, default_cutoff(N, bits, 1.2));
    return root_number(s, bits);
}

LValue l_value(const CurveModel& E, int order, unsigned bits, long cutoff) {
    Int N = conductor(E);
    if (cutoff == 0) cutoff = default_cutoff(N, bits, 1.2);
    CoeffStream s = CoeffStream::build(E, cutoff);
    int eps = root_number(s, bits).epsilon;
    int expected = order == 0 ? 1 : -1;
    if (eps != expected)
        throw Error(ErrorKind::SignMismatch, "order " + std::to_string(order) + " requested, root number " + std::to_string(eps));
    return l_value(s, order, eps, bits);
}

std::vector<LocalSign> twisted_sign_table() {
    return {{"infinity", -1}, {"3", 1}, {"finite v != 3", 1}};
}

}  // namespace cubesum
