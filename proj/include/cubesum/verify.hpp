#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cubesum/curves.hpp"
#include "cubesum/lseries.hpp"
#include "cubesum/numeric.hpp"
#include "cubesum/points.hpp"

namespace cubesum {

struct Config {
    unsigned precision = 192;
    long coeff_cutoff = 0;  // 0: per-curve default
    std::uint64_t search_budget = 10'000'000;
    std::string points_file;
    Int recognition_bound = 10000;
    double gz_tolerance = 1e-4;
    double recognition_tolerance = 1e-6;
    unsigned threads = 0;
    bool deterministic = false;  // zero the timings so reports compare byte for byte

    nlohmann::ordered_json to_json() const;
};

enum class CheckStatus { Pass, Fail, Skipped };
enum class CheckKind { Exact, Numeric, Budget };
const char* to_string(CheckStatus s);
const char* to_string(CheckKind k);

struct Check {
    std::string id;
    CheckStatus status = CheckStatus::Pass;
    CheckKind kind = CheckKind::Exact;
    nlohmann::ordered_json data = nlohmann::ordered_json::object();
    std::string tolerance;  // numeric checks only
    std::string margin;     // tolerance minus achieved error; negative on failure

    nlohmann::ordered_json to_json() const;
};

struct Section {
    std::string name;
    std::vector<Check> checks;
    std::vector<std::string> unmet_budget;
    double elapsed_ms = 0;

    Check& add(const std::string& id, bool ok, CheckKind kind = CheckKind::Exact);
    bool failed() const;
    bool skipped() const;
    nlohmann::ordered_json to_json() const;
};

// The four twists E_p, E_{p^2}, E_{3p}, E_{3p^2} and the pairing used by the index and BSD checks.
struct TwistFamily {
    Int p;
    int p_class = 0;
    Int n_rank0, n_rank1;  // p = 2 mod 9: (p, 3p^2); p = 5 mod 9: (p^2, 3p)
    std::vector<Int> all() const;
};
TwistFamily twist_family(const Int& p);

// "E_n", "En" or "E9"; InvalidFamily unless n is p, p^2, 3p or 3p^2 for a prime p = 2, 5 mod 9.
CurveModel parse_curve_spec(const std::string& spec);

// Shared caches so sections do not rebuild coefficient streams and L-values.
class Pipeline {
public:
    Pipeline(const Int& p, Config cfg);

    const Int& prime() const { return p_; }
    const Config& config() const { return cfg_; }
    const TwistFamily& family() const { return fam_; }

    const CoeffStream& stream(const Int& n);
    const RootNumber& sign(const Int& n);
    const LValue& leading_value(const Int& n);  // L(1) for sign +1, L'(1) for sign -1
    const RealWithError& period(const Int& n);
    // Generator of E_n(Q): point file first, then search; NoGenerator when neither works.
    RPoint generator(const Int& n);
    HeightNorm height_tag();
    nlohmann::ordered_json height_control() const { return height_control_; }

private:
    CoeffStream stream_for(const CurveModel& E, const Int& key);

    Int p_;
    Config cfg_;
    TwistFamily fam_;
    std::map<Int, CoeffStream> streams_;
    std::map<Int, RootNumber> signs_;
    std::map<Int, LValue> values_;
    std::map<Int, RealWithError> periods_;
    std::map<Int, RPoint> generators_;
    std::map<Int, std::string> no_generator_;
    std::optional<HeightNorm> tag_;
    nlohmann::ordered_json height_control_;
};

Section section_matrices(const Int& p);
Section section_local_fields(const Int& p, const Config& cfg);
Section section_curves(Pipeline& pl);
Section section_lseries(Pipeline& pl);
Section section_gz(Pipeline& pl);
Section section_bsd3(Pipeline& pl);

struct VerificationReport {
    Int prime;
    int class_mod9 = 0;
    Config config;
    nlohmann::ordered_json config_extra = nlohmann::ordered_json::object();
    std::vector<Section> sections;
    double total_ms = 0;

    std::string status() const;  // "pass" or "fail"
    int exit_code() const;       // 0 pass, 2 exact failure, 3 numeric failure, 4 budget exhaustion
    nlohmann::ordered_json to_json() const;
};

// names from {matrices, local_fields, curves, lseries, gz, bsd3}; empty runs all
VerificationReport run_report(const Int& p, const Config& cfg, const std::vector<std::string>& names = {});

}  // namespace cubesum
