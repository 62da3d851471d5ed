#include "cubesum/points.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

namespace cubesum {

namespace {

Int gcd(const Int& a, const Int& b) {
    Int r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

Int lcm(const Int& a, const Int& b) {
    Int r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

Int family_n(const CurveModel& E) {
    if (E.family != Family::En) throw Error(ErrorKind::InvalidFamily, "expected an E_n model, got " + E.str());
    return E.n;
}

}  // namespace

bool CubeSumCertificate::verify() const {
    if (a == 0 || b == 0 || c <= 0) return false;
    return a * a * a + b * b * b == n * c * c * c;
}

std::string CubeSumCertificate::str() const {
    return a.get_str() + " " + b.get_str() + " " + c.get_str() + " " + n.get_str();
}

CubeSumCertificate make_certificate(const Int& n, const Int& a0, const Int& b0, const Int& c0) {
    if (c0 == 0) throw Error(ErrorKind::DegenerateCert, "c = 0");
    Int g = gcd(gcd(a0, b0), c0);
    Int s = c0 < 0 ? Int(-1) : Int(1);
    CubeSumCertificate cert{n, s * a0 / g, s * b0 / g, s * c0 / g};
    if (!cert.verify()) throw Error(ErrorKind::DegenerateCert, "not a cube-sum certificate: " + cert.str());
    return cert;
}

RPoint cubesum_to_point(const CubeSumCertificate& cert, bool reject_torsion) {
    if (!cert.verify()) throw Error(ErrorKind::DegenerateCert, "certificate fails a^3 + b^3 = n c^3: " + cert.str());
    Int s = cert.a + cert.b;
    if (s == 0) throw Error(ErrorKind::DegenerateCert, "a + b = 0");
    RPoint P{Rat(12 * cert.n * cert.c, s), Rat(36 * cert.n * (cert.a - cert.b), s), false};
    P.x.canonicalize();
    P.y.canonicalize();
    CurveModel E = CurveModel::E(cert.n);
    if (!on_curve(E, P)) throw Error(ErrorKind::PointNotOnCurve, point_str(P));
    if (reject_torsion && point_order(E, P, 16) != 0) throw Error(ErrorKind::TorsionImage, point_str(P));
    return P;
}

CubeSumCertificate point_to_cubesum(const RPoint& P, const CurveModel& En) {
    Int n = family_n(En);
    if (!on_curve(En, P)) throw Error(ErrorKind::PointNotOnCurve, point_str(P));
    if (P.inf || P.x == 0) throw Error(ErrorKind::DegenerateCert, "point at infinity or x = 0");
    Rat a = (36 * n + P.y) / (6 * P.x);
    Rat b = (36 * n - P.y) / (6 * P.x);
    if (a == 0 || b == 0) throw Error(ErrorKind::DegenerateCert, "a or b vanishes for " + point_str(P));
    Int c = lcm(a.get_den(), b.get_den());
    Rat ac = a * c, bc = b * c;
    return make_certificate(n, ac.get_num(), bc.get_num(), c);
}

namespace {

struct SquareTable {
    long mod;
    std::vector<char> sq;
    explicit SquareTable(long k) : mod(k), sq(static_cast<size_t>(k), 0) {
        for (long y = 0; y < k; ++y) sq[(y * y) % k] = 1;
    }
};

Rat cbrt_floor_rat(const Int& v) {
    Int r;
    mpz_root(r.get_mpz_t(), v.get_mpz_t(), 3);
    return Rat(r);
}

}  // namespace

SearchResult search_cubesum(const Int& n, std::uint64_t budget, unsigned threads) {
    if (n <= 2 || !is_cube_free(n)) throw Error(ErrorKind::InvalidFamily, "search needs a cube-free n > 2");
    CurveModel E = CurveModel::E(n);
    const Int k = 432 * n * n;
    // real points have x >= k^{1/3}
    Int x0 = cbrt_floor_rat(k).get_num();
    std::uint64_t width = static_cast<std::uint64_t>(std::ceil(std::sqrt(static_cast<double>(budget))));
    if (width == 0) width = 1;
    long emax = 0;
    std::uint64_t total = 0;
    while (true) {
        std::uint64_t e = static_cast<std::uint64_t>(emax + 1);
        std::uint64_t cost = width * e * e;
        if (total + cost > budget) break;
        total += cost;
        ++emax;
    }
    if (emax == 0) throw Error(ErrorKind::NotFound, "budget too small for a single denominator");

    static const std::vector<long> mods = {64, 63, 65, 11};
    std::vector<SquareTable> tables;
    for (long m : mods) tables.emplace_back(m);

    std::atomic<long> best_e{emax + 1};
    std::mutex mu;
    Int best_m;
    auto scan = [&](long start, long step) {
        for (long e = start; e <= emax; e += step) {
            if (e >= best_e.load()) return;
            Int e2 = Int(e) * e;
            Int e6 = e2 * e2 * e2;
            Int c = k * e6;
            Int m_lo = x0 * e2;
            // residue tables of m^3 - c
            std::vector<std::vector<char>> ok;
            for (const auto& t : tables) {
                long cm = Int(((c % t.mod) + t.mod) % t.mod).get_si();
                std::vector<char> row(static_cast<size_t>(t.mod));
                for (long r = 0; r < t.mod; ++r) row[r] = t.sq[(((r * r % t.mod) * r - cm) % t.mod + t.mod) % t.mod];
                ok.push_back(std::move(row));
            }
            std::vector<long> res(tables.size());
            for (size_t i = 0; i < tables.size(); ++i) res[i] = Int(m_lo % tables[i].mod).get_si();
            Int v;
            std::uint64_t count = static_cast<std::uint64_t>(width) * static_cast<std::uint64_t>(e * e);
            Int m = m_lo;
            for (std::uint64_t i = 0; i < count; ++i, ++m) {
                bool pass = true;
                for (size_t j = 0; j < tables.size(); ++j) {
                    if (!ok[j][res[j]]) pass = false;
                    if (++res[j] == tables[j].mod) res[j] = 0;
                }
                if (!pass) continue;
                v = m * m * m - c;
                if (v < 0 || mpz_perfect_square_p(v.get_mpz_t()) == 0) continue;
                if (e > 1 && gcd(m, Int(e)) != 1) continue;
                std::lock_guard<std::mutex> lock(mu);
                if (e < best_e.load()) {
                    best_e = e;
                    best_m = m;
                }
                return;
            }
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    if (threads == 1) {
        scan(1, 1);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(scan, static_cast<long>(t) + 1, static_cast<long>(threads));
        for (auto& th : pool) th.join();
    }
    if (best_e.load() > emax)
        throw Error(ErrorKind::NotFound, "no point with denominator <= " + std::to_string(emax) + "^2 within budget " +
                                             std::to_string(budget));
    long e = best_e.load();
    Int e2 = Int(e) * e;
    Int v = best_m * best_m * best_m - k * e2 * e2 * e2;
    Int Y = isqrt(v);
    SearchResult r;
    r.point = RPoint{Rat(best_m, e2), Rat(Y, e2 * e), false};
    r.point.x.canonicalize();
    r.point.y.canonicalize();
    if (!on_curve(E, r.point)) throw Error(ErrorKind::PointNotOnCurve, "search produced " + point_str(r.point));
    r.certificate = point_to_cubesum(r.point, E);
    cubesum_to_point(r.certificate, true);
    std::uint64_t before = 0;
    for (long f = 1; f < e; ++f) before += width * static_cast<std::uint64_t>(f * f);
    r.stats.candidates = before + Int(best_m - x0 * e2 + 1).get_ui();
    r.stats.max_denominator = emax;
    r.stats.max_x = Rat(x0 + Int(static_cast<unsigned long>(width)));
    return r;
}

const char* to_string(HeightNorm n) {
    return n == HeightNorm::DoublingLimit ? "doubling-limit" : "half-doubling-limit";
}

Real naive_height(const RPoint& P) {
    if (P.inf) return Real(0);
    Int h = abs(P.x.get_num());
    if (P.x.get_den() > h) h = P.x.get_den();
    return log(to_real(h));
}

HeightValue canonical_height(const RPoint& P0, const CurveModel& E, unsigned bits, HeightNorm tag) {
    MinimalModel mm = minimal_model(E);
    if (!on_curve(E, P0)) throw Error(ErrorKind::PointNotOnCurve, point_str(P0));
    const CurveModel& M = mm.model;
    RPoint P = map_point(mm.transform, P0);
    if (P.inf || point_order(M, P, 16) != 0) throw Error(ErrorKind::TorsionPoint, point_str(P0));

    Int m = 1;
    for (const auto& ld : local_data(M)) m = lcm(m, Int(ld.tamagawa));
    RPoint Q = scalar_mul(M, m.get_si(), P);

    unsigned work = bits + 32;
    PrecisionGuard guard(work);
    // shift x so that every real point has x' >= 1
    Real R = 1 + abs(to_real(M.b2())) / 4 + abs(to_real(M.b4())) / 2 + abs(to_real(M.b6())) / 4;
    Int r;
    mpz_set_d(r.get_mpz_t(), to_double(floor(-R)) - 1);
    Transform shift{1, Rat(r), 0, 0};
    CurveModel S = apply(M, shift);
    RPoint Qs = map_point(shift, Q);
    Real b2 = to_real(S.b2()), b4 = to_real(S.b4()), b6 = to_real(S.b6()), b8 = to_real(S.b8());
    Real x = to_real(Qs.x);
    Real lambda = log(abs(x)) / 2;
    Real t = 1 / x;
    Real scale = Real(1) / 8;
    int terms = static_cast<int>(work / 2) + 8;
    Real last = 0;
    for (int i = 0; i < terms; ++i) {
        Real t2 = t * t, t3 = t2 * t, t4 = t3 * t;
        Real w = 4 * t + b2 * t2 + 2 * b4 * t3 + b6 * t4;
        Real z = 1 - b4 * t2 - 2 * b6 * t3 - b8 * t4;
        last = log(abs(z));
        lambda += scale * last;
        t = w / z;
        scale /= 4;
    }
    Int d;
    mpz_sqrt(d.get_mpz_t(), Q.x.get_den_mpz_t());
    Real half = (lambda + log(to_real(d))) / to_real(Int(m * m));
    Real err = scale * 4 * (abs(last) + 1) / to_real(Int(m * m)) + abs(half) * pow2(-static_cast<long>(bits));
    HeightValue h;
    h.tag = tag;
    h.value = tag == HeightNorm::DoublingLimit ? Real(2 * half) : half;
    h.error = tag == HeightNorm::DoublingLimit ? Real(2 * err) : err;
    return h;
}

Real doubling_limit_height(const RPoint& P0, const CurveModel& E, int k) {
    MinimalModel mm = minimal_model(E);
    RPoint P = map_point(mm.transform, P0);
    for (int i = 0; i < k; ++i) P = add(mm.model, P, P);
    return naive_height(P) / pow(Real(4), k);
}

Divisibility is_divisible_by_3(const RPoint& P0, const CurveModel& E) {
    if (!on_curve(E, P0)) throw Error(ErrorKind::PointNotOnCurve, point_str(P0));
    Divisibility out;
    if (P0.inf) {
        out.divisible = true;
        out.witness = P0;
        return out;
    }
    Transform T = short_form_transform(E);
    CurveModel S = apply(E, T);
    Transform back = inverse(T);
    RPoint P = map_point(T, P0);
    Rat A = S.a4, B = S.a6;
    Poly psi3 = {-A * A, 12 * B, 6 * A, 0, 3};
    Poly cubic = {B, A, 0, 1};
    Poly f4 = {-8 * B * B - A * A * A, -4 * A * B, -5 * A * A, 20 * B, 5 * A, 0, 1};
    Poly x = {0, 1};
    Poly psi3sq = poly_mul(psi3, psi3);
    Poly phi3 = poly_sub(poly_mul(x, psi3sq), poly_scale(poly_mul(cubic, f4), 8));
    Poly F = poly_sub(phi3, poly_scale(psi3sq, P.x));
    for (const Rat& xr : rational_roots(F)) {
        Rat y2 = poly_eval(cubic, xr);
        if (y2 < 0) continue;
        Int yn, yd;
        if (!is_square(y2.get_num(), &yn) || !is_square(y2.get_den(), &yd)) continue;
        Rat y(yn, yd);
        y.canonicalize();
        for (const Rat& yy : {y, Rat(-y)}) {
            RPoint Q{xr, yy, false};
            if (scalar_mul(S, 3, Q) == P) {
                out.divisible = true;
                out.witness = map_point(back, Q);
                return out;
            }
        }
    }
    return out;
}

RPoint parse_point(const std::string& line) {
    std::istringstream is(line);
    std::string xs, ys, extra;
    if (!(is >> xs >> ys) || (is >> extra)) throw Error(ErrorKind::ParseError, "expected 'x_num/x_den y_num/y_den': " + line);
    RPoint P;
    for (auto [s, dst] : {std::pair{&xs, &P.x}, std::pair{&ys, &P.y}}) {
        Rat q;
        if (q.set_str(*s, 10) != 0) throw Error(ErrorKind::ParseError, "not a rational: " + *s);
        if (q.get_den() == 0) throw Error(ErrorKind::ParseError, "zero denominator: " + *s);
        Rat c = q;
        c.canonicalize();
        if (c.get_num() != q.get_num() || c.get_den() != q.get_den())
            throw Error(ErrorKind::ParseError, "not in lowest terms: " + *s);
        *dst = c;
    }
    return P;
}

std::vector<RPoint> parse_points(std::istream& in) {
    std::vector<RPoint> out;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        out.push_back(parse_point(line));
    }
    return out;
}

std::vector<RPoint> read_point_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
    return parse_points(in);
}

}  // namespace cubesum
