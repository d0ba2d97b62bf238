#include <doctest.h>

#include <fstream>

#include "common.hpp"

using namespace chab;

namespace {

Json paper_json() {
    std::ifstream in(std::string(CHAB_DATA_DIR) + "/paper_config.json");
    return Json::parse(in);
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config parsing") {
    const ProblemConfig& cfg = testdata::paper();
    CHECK(cfg.curves.size() == 3);
    CHECK(cfg.curve("C1").gens.size() == 3);
    CHECK(cfg.curve("C3").known.size() == 1);
    CHECK_THROWS_AS(cfg.curve("C9"), ConfigError);
    REQUIRE(cfg.descent);
    CHECK(cfg.descent->covers.size() == 4);

    Json j = paper_json();
    j["schema"] = "other/0";
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    j = paper_json();
    j["curves"][0]["sieve_primes"].push_back(2);
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    j = paper_json();
    j["curves"][1]["known"][0]["point"]["y"] = Json::array({5, 1, 0, 1});
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    j = paper_json();
    j["descent"]["covers"][0]["curve"] = "C7";
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    j = paper_json();
    j["curves"][0]["generators"][0]["v"][0] = Json::array({1, 0, 0, 1});
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("K-element serialization round-trips") {
    const auto& F = testdata::paper().F;
    for (const KElt& a : {KElt(F, mpq_class(-1, 2), mpq_class(1, 2)), KElt(F, mpq_class("123456789012345678901234567890"), 3)})
        CHECK(kelt_from_json(kelt_to_json(a), F) == a);
    CHECK(kelt_from_json(Json::array({"-5", "1", "1", "1"}), F) == testdata::k(-5, 1));
}

TEST_CASE("reports are deterministic") {
    const auto& cfg = testdata::paper();
    RunOptions opt;
    auto a = run_chabauty(cfg, "C3", 71, opt).json().dump();
    auto b = run_chabauty(cfg, "C3", 71, opt).json().dump();
    CHECK(a == b);
    auto s1 = run_sieve(cfg, "C2", opt).json().dump(), s2 = run_sieve(cfg, "C2", opt).json().dump();
    CHECK(s1 == s2);
}

TEST_CASE("exit codes") {
    const auto& cfg = testdata::paper();
    CHECK(run_chabauty(cfg, "C1", 89).exit == exit_ok);
    auto r = run_chabauty(cfg, "C1", 11);
    CHECK(r.exit == exit_inapplicable);
    CHECK(r.message.find("ramifies") != std::string::npos);
    CHECK(run_sieve(cfg, "C2").exit == exit_ok);
    CHECK(run_sieve(cfg, "C1", {}, std::vector<long>{89}).exit == exit_failure);
    CHECK(run_sieve(cfg, "C1", {}, std::vector<long>{11}).exit == exit_inapplicable);
}

TEST_CASE("verify-paper attributes a missing sieve certificate") {
    Json j = paper_json();
    j["curves"][0]["sieve_primes"] = Json::array();
    ProblemConfig cfg = parse_config(j);
    VerifyOutcome v = run_verify(cfg);
    CHECK(v.exit == exit_failure);
    CHECK_FALSE(v.assembled);
    CHECK(v.message.rfind("sieve: C1", 0) == 0);
    CHECK(v.covers[1].certified);
    CHECK(v.covers[2].certified);
    CHECK(v.covers[3].certified);
}

TEST_CASE("verify-paper with the alternate C1 list certifies Y(Q) = {inf}") {
    ProblemConfig cfg = load_config(std::string(CHAB_DATA_DIR) + "/paper_config_alt_sieve.json");
    VerifyOutcome v = run_verify(cfg);
    CHECK(v.exit == exit_ok);
    REQUIRE(v.points.size() == 1);
    CHECK(v.points[0].infinity);
    CHECK(v.search_contained);
}

}  // TEST_SUITE
