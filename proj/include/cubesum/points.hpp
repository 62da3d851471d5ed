#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "cubesum/curves.hpp"
#include "cubesum/numeric.hpp"

namespace cubesum {

// a^3 + b^3 = n c^3, c > 0, gcd(a, b, c) = 1
struct CubeSumCertificate {
    Int n, a, b, c;

    bool verify() const;
    std::string str() const;  // "a b c n"
};

CubeSumCertificate make_certificate(const Int& n, const Int& a, const Int& b, const Int& c);
// (a : b : c) -> (12 n c / (a + b), 36 n (a - b) / (a + b)); reject_torsion turns a torsion image into TorsionImage
RPoint cubesum_to_point(const CubeSumCertificate& cert, bool reject_torsion = false);
CubeSumCertificate point_to_cubesum(const RPoint& P, const CurveModel& En);

struct SearchStats {
    std::uint64_t candidates = 0;
    long max_denominator = 0;  // e in x = m / e^2
    Rat max_x = 0;
};

struct SearchResult {
    CubeSumCertificate certificate;
    RPoint point;
    SearchStats stats;
};

// Scans x = m / e^2 with e ascending, then m ascending; the first hit wins. NotFound when the budget runs out.
SearchResult search_cubesum(const Int& n, std::uint64_t budget, unsigned threads = 0);

enum class HeightNorm { DoublingLimit, HalfDoublingLimit };
const char* to_string(HeightNorm n);

struct HeightValue {
    Real value;
    Real error;
    HeightNorm tag = HeightNorm::DoublingLimit;
};

// log max(|num|, |den|) of x(P)
Real naive_height(const RPoint& P);
HeightValue canonical_height(const RPoint& P, const CurveModel& E, unsigned bits,
                             HeightNorm tag = HeightNorm::DoublingLimit);
// 4^{-k} h(x(2^k P)), in the DoublingLimit normalization
Real doubling_limit_height(const RPoint& P, const CurveModel& E, int k);

struct Divisibility {
    bool divisible = false;
    std::optional<RPoint> witness;  // 3 witness = P
};

Divisibility is_divisible_by_3(const RPoint& P, const CurveModel& E);

// Lines "x_num/x_den y_num/y_den"; blank lines and '#' comments are skipped.
std::vector<RPoint> parse_points(std::istream& in);
std::vector<RPoint> read_point_file(const std::string& path);
RPoint parse_point(const std::string& line);

}  // namespace cubesum
