// chab: batch driver over a problem configuration.
//
//   chab --config data/paper_config.json chabauty --curve C1 --prime 89
//   chab --config data/paper_config.json sieve --curve C2
//   chab --config data/paper_config.json verify-paper --report json

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "chab/pipeline.hpp"

using namespace chab;

namespace {

void emit(const std::string& mode, const Json& j, const std::string& text) {
    if (mode == "json") std::cout << j.dump(2) << "\n";
    else std::cout << text;
}

void write_certificate(const std::string& dir, const std::string& name, const Json& cert) {
    if (dir.empty()) return;
    std::filesystem::create_directories(dir);
    std::ofstream(std::filesystem::path(dir) / name) << cert.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Chabauty criteria, Mordell-Weil sieve and two-cover descent for genus-2 curves over quadratic fields"};
    app.require_subcommand(1);

    std::string config_path, report = "text", cert_dir;
    std::optional<int> precision;
    int jobs = 1;
    std::uint64_t seed = 1;
    app.add_option("--config", config_path, "problem configuration (JSON)")->required();
    app.add_option("--precision", precision, "p-adic working precision M");
    app.add_option("--report", report, "report format")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--jobs", jobs, "worker threads for points and residue classes")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "seed for randomized group-order searches");
    app.add_option("--certificates", cert_dir, "directory for certificate files");

    std::string curve;
    long prime = 0;
    auto* chab = app.add_subcommand("chabauty", "criterion matrices and verdicts at one prime");
    chab->add_option("--curve", curve)->required();
    chab->add_option("--prime", prime)->required();

    std::vector<long> sieve_primes;
    auto* sv = app.add_subcommand("sieve", "Mordell-Weil sieve over the configured prime list");
    sv->add_option("--curve", curve)->required();
    sv->add_option("--primes", sieve_primes, "override the configured list");

    auto* vp = app.add_subcommand("verify-paper", "full pipeline: descent, chabauty and sieve on every cover");

    CLI11_PARSE(app, argc, argv);

    try {
        const ProblemConfig cfg = load_config(config_path);
        RunOptions opt;
        opt.precision = precision;
        opt.jobs = jobs;
        opt.seed = seed;

        if (*chab) {
            const CurveConfig& cc = cfg.curve(curve);
            if (prime < 3 || mpz_probab_prime_p(mpz_class(prime).get_mpz_t(), 30) == 0)
                throw ConfigError("--prime must be an odd prime");
            ChabautyOutcome out = run_chabauty(cfg, curve, prime, opt);
            emit(report, out.json(), out.text());
            write_certificate(cert_dir, "chabauty_" + curve + "_" + std::to_string(prime) + ".json", out.certificate(cc));
            return out.exit;
        }
        if (*sv) {
            const CurveConfig& cc = cfg.curve(curve);
            SieveOutcome out = run_sieve(cfg, curve, opt,
                                         sieve_primes.empty() ? std::nullopt : std::optional(sieve_primes));
            emit(report, out.json(), out.text());
            write_certificate(cert_dir, "sieve_" + curve + ".json", out.certificate(cc));
            return out.exit;
        }
        if (*vp) {
            VerifyOutcome out = run_verify(cfg, opt);
            emit(report, out.json(), out.text());
            for (const auto& c : out.covers) {
                if (c.curve.empty()) continue;
                const CurveConfig& cc = cfg.curve(c.curve);
                for (const auto& o : c.chabauty)
                    write_certificate(cert_dir, "chabauty_" + c.curve + "_" + std::to_string(o.report.p) + ".json",
                                      o.certificate(cc));
                if (c.sieve) write_certificate(cert_dir, "sieve_" + c.curve + ".json", c.sieve->certificate(cc));
            }
            return out.exit;
        }
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return exit_config;
    } catch (const PrecisionLoss& e) {
        std::cerr << e.what() << "\n";
        return exit_precision;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return exit_failure;
    }
    return exit_failure;
}
