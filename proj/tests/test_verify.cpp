#include <doctest.h>

#include "cubesum/error.hpp"
#include "cubesum/verify.hpp"

using namespace cubesum;

namespace {

Section section_with(CheckStatus st, CheckKind kind) {
    Section s;
    s.name = "synthetic";
    s.add("first", true);
    Check& c = s.add("second", st == CheckStatus::Pass, kind);
    c.status = st;
    return s;
}

VerificationReport report_of(std::vector<Section> secs) {
    VerificationReport r;
    r.prime = 5;
    r.class_mod9 = 5;
    r.sections = std::move(secs);
    return r;
}

}  // namespace

TEST_CASE("curve specs") {
    CHECK(parse_curve_spec("E_11").n == 11);
    CHECK(parse_curve_spec("E363").n == 363);
    CHECK(parse_curve_spec("E_25").n == 25);
    CHECK(parse_curve_spec("E_15").n == 15);
    CHECK(parse_curve_spec("E9").family == Family::E9);
    for (const char* bad : {"E_55", "E_7", "E_3", "E_49", "E_21"}) CHECK_THROWS_AS(parse_curve_spec(bad), Error);
    for (const char* bad : {"11", "E_", "E_1x", "F_11"}) CHECK_THROWS_AS(parse_curve_spec(bad), Error);
    try {
        parse_curve_spec("E_55");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidFamily);
    }
}

TEST_CASE("twist families") {
    TwistFamily f5 = twist_family(5), f11 = twist_family(11);
    CHECK(f5.p_class == 5);
    CHECK(f5.n_rank0 == 25);
    CHECK(f5.n_rank1 == 15);
    CHECK(f11.p_class == 2);
    CHECK(f11.n_rank0 == 11);
    CHECK(f11.n_rank1 == 363);
    CHECK(f11.all() == std::vector<Int>{11, 121, 33, 363});
    CHECK_THROWS_AS(twist_family(7), Error);
}

TEST_CASE("exit code precedence") {
    CHECK(report_of({section_with(CheckStatus::Pass, CheckKind::Exact)}).exit_code() == 0);
    CHECK(report_of({section_with(CheckStatus::Skipped, CheckKind::Budget)}).exit_code() == 4);
    CHECK(report_of({section_with(CheckStatus::Skipped, CheckKind::Budget)}).status() == "pass");
    CHECK(report_of({section_with(CheckStatus::Fail, CheckKind::Numeric),
                     section_with(CheckStatus::Skipped, CheckKind::Budget)})
              .exit_code() == 3);
    CHECK(report_of({section_with(CheckStatus::Fail, CheckKind::Numeric),
                     section_with(CheckStatus::Fail, CheckKind::Exact)})
              .exit_code() == 2);
    CHECK(report_of({section_with(CheckStatus::Fail, CheckKind::Exact)}).status() == "fail");
}

TEST_CASE("report json") {
    Config cfg;
    cfg.deterministic = true;
    VerificationReport a = run_report(5, cfg, {"local_fields"});
    VerificationReport b = run_report(5, cfg, {"local_fields"});
    auto ja = a.to_json();
    CHECK(ja.dump() == b.to_json().dump());
    for (const char* key : {"prime", "class_mod9", "config", "sections", "status", "timings_ms"})
        CHECK(ja.contains(key));
    CHECK(ja["prime"] == 5);
    CHECK(ja["class_mod9"] == 5);
    CHECK(a.exit_code() == 0);
    bool saw_numeric = false;
    for (const Check& c : a.sections.at(0).checks)
        if (c.kind == CheckKind::Numeric) {
            saw_numeric = true;
            CHECK_FALSE(c.tolerance.empty());
            CHECK_FALSE(c.margin.empty());
            CHECK(c.margin[0] != '-');
        }
    CHECK(saw_numeric);
}

TEST_CASE("missing generator is a budget skip") {
    Config cfg;
    cfg.search_budget = 1000;
    cfg.deterministic = true;
    VerificationReport r = run_report(11, cfg, {"gz"});
    CHECK(r.status() == "pass");
    CHECK(r.exit_code() == 4);
    REQUIRE(r.sections.size() == 1);
    CHECK_FALSE(r.sections[0].unmet_budget.empty());
}
