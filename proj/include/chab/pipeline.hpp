#pragma once

// Problem configuration, the check -> chabauty -> sieve -> descent driver and
// its reports. Everything serialized here carries a schema tag.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "chab/chabauty.hpp"
#include "chab/descent.hpp"
#include "chab/mwsieve.hpp"

namespace chab {

using Json = nlohmann::ordered_json;

inline constexpr const char* kConfigSchema = "chab-config/1";
inline constexpr const char* kReportSchema = "chab-report/1";
inline constexpr const char* kCertificateSchema = "chab-certificate/1";
inline constexpr const char* kBasisTag = "x^(f-1) dx/(2y), f=1,2";

struct CurveConfig {
    std::string id;
    HyperCurve<KElt> C;
    std::vector<MumfordDiv<KElt>> gens;
    long N = 1;
    std::vector<KnownPoint> known;
    std::vector<long> chabauty_primes;
    std::vector<long> sieve_primes;
};

struct CoverConfig {
    mpq_class a1;
    KElt a2;
    std::optional<std::string> curve;  // id of the curve carrying H_i
    bool rank_zero = false;            // J(K) has rank 0 (an input, like the generators)
    std::vector<long> torsion_primes;
};

struct DescentConfig {
    ZPoly q, Phi;
    std::optional<Poly<KElt>> expected_f;
    std::vector<CoverConfig> covers;
    long search_bound = 100;
};

struct ProblemConfig {
    QuadField F;
    int precision = 12;
    std::vector<CurveConfig> curves;
    std::optional<DescentConfig> descent;

    const CurveConfig& curve(const std::string& id) const;  // throws ConfigError
};

// Parsing throws ConfigError with a path to the offending field.
ProblemConfig parse_config(const Json& j);
ProblemConfig load_config(const std::string& path);

// K-elements are [c0_num, c0_den, c1_num, c1_den]; numerators and
// denominators may be JSON integers or decimal strings.
KElt kelt_from_json(const Json& j, const QuadField& F);
Json kelt_to_json(const KElt& a);
Poly<KElt> kpoly_from_json(const Json& j, const QuadField& F);
Json kpoly_to_json(const Poly<KElt>& f);
Json point_to_json(const CurvePoint<KElt>& P);
std::string point_str(const CurvePoint<KElt>& P);

enum ExitCode { exit_ok = 0, exit_failure = 1, exit_inapplicable = 2, exit_precision = 3, exit_config = 4 };

struct RunOptions {
    std::optional<int> precision;  // overrides the config
    int jobs = 1;
    std::uint64_t seed = 1;
    bool recheck = true;           // repeat chabauty at doubled precision
};

struct ChabautyOutcome {
    std::string curve;
    ChabautyReport report;
    std::optional<ChabautyReport> recheck;  // at 2M
    bool stable = true;                     // verdicts and j agree at M and 2M
    int exit = exit_ok;
    std::string message;
    Json json() const;
    std::string text() const;
    Json certificate(const CurveConfig& cc) const;
};

ChabautyOutcome run_chabauty(const ProblemConfig& cfg, const std::string& curve, long p, const RunOptions& opt = {});

struct SieveOutcome {
    std::string curve;
    std::vector<long> primes;
    SieveReport report;
    double seconds = 0;
    int exit = exit_ok;
    std::string message;
    Json json() const;
    std::string text() const;
    Json certificate(const CurveConfig& cc) const;
};

SieveOutcome run_sieve(const ProblemConfig& cfg, const std::string& curve, const RunOptions& opt = {},
                       std::optional<std::vector<long>> primes = std::nullopt);

struct CoverOutcome {
    TwistPair pair;
    std::string curve;   // configured id, or empty for a rank-zero cover
    bool model_matches = false;
    std::vector<ChabautyOutcome> chabauty;
    std::optional<SieveOutcome> sieve;
    mpz_class torsion;   // for rank-zero covers
    bool certified = false;
    std::string certificate;
    std::string failure;  // stage attribution when not certified
};

struct VerifyOutcome {
    ConjugateFactorization fg;
    bool factor_matches = true;
    ResultantSupports supports;
    std::vector<TwistPair> kernel;
    std::vector<CoverOutcome> covers;
    std::vector<RationalPoint> points;
    std::vector<RationalPoint> searched;
    bool assembled = false;
    bool search_contained = false;
    int exit = exit_ok;
    std::string message;
    Json json() const;
    std::string text() const;
};

VerifyOutcome run_verify(const ProblemConfig& cfg, const RunOptions& opt = {});

}  // namespace chab
