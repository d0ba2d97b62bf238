// Acceptance run: one PASS/FAIL line per criterion, followed by detail lines.
// Usage: acceptance <data dir> <test binary>

#include <chrono>
#include <map>
#include <cstdio>
#include <iostream>
#include <set>
#include <sstream>
#include <sys/wait.h>

#include "chab/arith.hpp"
#include "chab/pipeline.hpp"

using namespace chab;

namespace {

struct Result {
    bool pass = true;
    std::vector<std::string> detail;
    void need(bool ok, const std::string& what) {
        if (!ok) pass = false;
        detail.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    }
    void info(const std::string& what) { detail.push_back("info " + what); }
};

double since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double s) {
    std::ostringstream os;
    os.precision(3);
    os << s << " s";
    return os.str();
}

long inv_mod(long a, long p) {
    mpz_class r, A = a, P = p;
    if (!mpz_invert(r.get_mpz_t(), A.get_mpz_t(), P.get_mpz_t())) return 0;
    return r.get_si();
}

long modp(const mpz_class& a, long p) { return mod_i64(a, p); }

// Ratio b/a of the last row of a test matrix, mod p.
long tail_ratio(const PadicMatrix& E, long p) {
    auto c = E.centered(1);
    const auto& row = c.back();
    return modp(row[1], p) * inv_mod(modp(row[0], p), p) % p;
}

Result criterion1(const ProblemConfig& cfg) {
    Result r;
    const auto t0 = std::chrono::steady_clock::now();
    RunOptions opt;
    opt.recheck = false;

    ChabautyOutcome c1 = run_chabauty(cfg, "C1", 89, opt);
    r.need(c1.report.all_true() && c1.report.points.size() == 3, "C1/89: three points, all verdicts true");
    for (const auto& v : c1.report.points) {
        if (!v.bundle) continue;
        const auto& b = *v.bundle;
        if (b.tag == CriterionCase::unramified) {
            const bool ok = b.calE.size() == 1 && b.calE[0].rows() == 1 && b.calE[0].cols() == 1 &&
                            modp(b.calE[0].centered(1)[0][0], 89) != 0;
            r.need(ok, "C1/89 " + point_str(v.P0) + ": E is a 1-vector nonzero mod 89 (" + b.calE[0].str(1) + ")");
        } else {
            bool ok = b.calE.size() == 2;
            std::set<long> ratios;
            for (std::size_t i = 0; i < b.calE.size(); ++i) {
                ok = ok && b.calE[i].rows() == 2 && b.calE[i].cols() == 2 && b.ranks[i] == 2;
                ratios.insert(tail_ratio(b.calE[i], 89));
            }
            // accept either ordering of the two primes above 89
            std::set<long> inverted;
            for (long x : ratios) inverted.insert(inv_mod(x, 89));
            const std::set<long> reference{41, 89 - 41};
            ok = ok && (ratios == reference || inverted == reference);
            std::ostringstream os;
            os << "C1/89 inf: two 2x2 test matrices of rank 2, second rows (1, c) with c in {";
            for (long x : ratios) os << (x > 44 ? x - 89 : x) << " ";
            os << "}, inverses {";
            for (long x : inverted) os << (x > 44 ? x - 89 : x) << " ";
            os << "} against reference +-41";
            r.need(ok, os.str());
        }
    }

    ChabautyOutcome c2 = run_chabauty(cfg, "C2", 23, opt);
    bool j3 = c2.report.points.size() == 3;
    for (const auto& v : c2.report.points) j3 = j3 && v.bundle && v.bundle->j == 3;
    r.need(c2.report.all_true() && j3, "C2/23: three points, all verdicts true, j = 3");

    ChabautyOutcome c3 = run_chabauty(cfg, "C3", 71, opt);
    const bool empty = c3.report.points.size() == 1 && c3.report.points[0].bundle && c3.report.points[0].bundle->calE.empty();
    r.need(c3.report.all_true() && empty, "C3/71: test set at infinity is empty, verdict true");

    const double s = since(t0);
    r.need(s < 30, "runtime " + fmt(s) + " (< 30 s)");
    return r;
}

Result criterion2(const ProblemConfig& cfg) {
    Result r;
    // Reference first digits of A/p, one row per Chabauty point.
    const std::map<std::string, std::vector<std::vector<long>>> reference{
        {"C1", {{70, 82, 51}, {70, 61, 86}, {55, 3, 58}, {29, 38, 28}}},
        {"C2", {{-6}, {-11}, {-11}, {-11}}},
        {"C3", {{58}, {60}, {47}, {48}}}};
    for (const auto& [id, p, j] : std::vector<std::tuple<std::string, long, int>>{{"C1", 89, 1}, {"C2", 23, 3}, {"C3", 71, 3}}) {
        const auto& cc = cfg.curve(id);
        IntegralMatrix A = integral_matrix(cc.C, p, cc.gens, cfg.precision);
        int bad = 0;
        std::ostringstream vals;
        for (int i = 0; i < A.A.rows(); ++i) {
            vals << (i ? "; " : "");
            for (int k = 0; k < A.A.cols(); ++k) {
                const long v = A.A(i, k).valuation();
                vals << (k ? "," : "") << v;
                bad += v != 1;
            }
        }
        r.need(bad == 0, id + "/" + std::to_string(p) + ": valuations of A [" + vals.str() + "]");
        ChabautyReport R = chabauty_report(cc.C, cc.gens, cc.N, p, cc.known, cfg.precision);
        bool jok = !R.points.empty();
        for (const auto& v : R.points) jok = jok && v.bundle && v.bundle->j == j;
        r.need(jok, id + "/" + std::to_string(p) + ": j = " + std::to_string(j) + " at every known point");

        // Informational: 2 A / p mod p with the two prime blocks swapped, compared up to sign.
        const auto& pub = reference.at(id);
        int agree = 0, total = 0;
        std::ostringstream ours;
        for (int i = 0; i < A.A.rows(); ++i) {
            const int src = (i + A.A.rows() / 2) % A.A.rows();
            ours << (i ? "; " : "");
            for (int k = 0; k < A.A.cols(); ++k) {
                long d = 0;
                const PadicNum& a = A.A(src, k);
                if (a.valuation() >= 1) d = modp(a.shift(-1).mod_pk(1) * 2, p);
                if (a.valuation() > 1) d = 0;
                const long pd = ((pub[i][k] % p) + p) % p;
                agree += d == pd || d == (p - pd) % p;
                ++total;
                ours << (k ? "," : "") << (d > p / 2 ? d - p : d);
            }
        }
        r.info(id + ": aligned first digits [" + ours.str() + "], " + std::to_string(agree) + "/" + std::to_string(total) +
               " agree with the reference matrix up to sign");
    }
    return r;
}

Result criterion3(const ProblemConfig& cfg, const ProblemConfig& alt) {
    Result r;
    const auto t0 = std::chrono::steady_clock::now();
    for (const char* id : {"C1", "C2", "C3"}) {
        SieveOutcome s = run_sieve(cfg, id);
        bool known_alive = true;
        for (const auto& c : s.report.classes)
            if (c.known && c.eliminated) known_alive = false;
        std::ostringstream os;
        os << id << " over {";
        for (std::size_t i = 0; i < s.primes.size(); ++i) os << (i ? "," : "") << s.primes[i];
        os << "}: " << s.report.classes.size() << " classes, " << s.report.survivors_outside_known()
           << " outside red(H') survive, red(H') classes " << (known_alive ? "all survive" : "ELIMINATED") << " ("
           << fmt(s.seconds) << ")";
        r.need(s.report.success(), os.str());
        if (!s.report.success())
            for (const auto& c : s.report.classes)
                if (!c.known && !c.eliminated) {
                    std::ostringstream w;
                    for (auto x : c.w_sizes) w << " " << x;
                    r.info("  survivor " + c.cls.str() + " |W|:" + w.str());
                }
    }
    SieveOutcome a = run_sieve(alt, "C1");
    std::ostringstream os;
    os << "C1 over the alternate list {";
    for (std::size_t i = 0; i < a.primes.size(); ++i) os << (i ? "," : "") << a.primes[i];
    os << "}: " << a.report.survivors_outside_known() << " survivors outside red(H') (not part of the gate)";
    r.info(os.str());
    const double s = since(t0);
    r.need(s < 600, "runtime " + fmt(s) + " (< 10 min)");
    return r;
}

Result criterion4(const ProblemConfig& cfg, const ProblemConfig& alt) {
    Result r;
    const auto t0 = std::chrono::steady_clock::now();
    const DescentConfig& d = *cfg.descent;
    auto fg = factor_over_K(d.Phi, cfg.F);
    r.need(d.expected_f && fg.f.same(*d.expected_f) && fg.g.same(conj(*d.expected_f)),
           "f = " + fg.f.str() + ", g = " + fg.g.str());
    auto S = resultant_supports(d.q, fg.f, fg.g);
    r.need(S.S1 == std::vector<long>{23}, "S1 = {23}");
    r.need(S.S2.size() == 1 && S.S2[0].p == 23, "S2 = {" + (S.S2.empty() ? std::string() : S.S2[0].str()) + "}");
    auto K = norm_kernel(S.S1, S.S2, cfg.F);
    const std::vector<std::pair<long, KElt>> expect{{1, KElt(cfg.F, 1)}, {1, KElt(cfg.F, -1)}, {23, KElt(cfg.F, 5, -1)}, {23, KElt(cfg.F, -5, 1)}};
    bool kok = K.size() == 4;
    std::string ks;
    for (std::size_t i = 0; i < K.size(); ++i) {
        ks += (i ? " " : "") + K[i].str();
        if (kok) kok = K[i].a1 == expect[i].first && K[i].a2 == expect[i].second;
    }
    r.need(kok, "norm kernel " + ks);
    const double setup = since(t0);

    VerifyOutcome reference = run_verify(cfg);
    r.info("reference sieve lists: " + reference.message);
    const auto t1 = std::chrono::steady_clock::now();
    VerifyOutcome v = run_verify(alt);
    const double full = since(t1);
    std::string pts;
    for (const auto& P : v.points) pts += (pts.empty() ? "" : ", ") + P.str();
    r.need(v.assembled && v.points.size() == 1 && v.points[0].infinity,
           "assembled Y(Q) = {" + pts + "} with every H_i certified (C1 sieved over the alternate list)");
    r.need(v.search_contained, "search |num|,|den| <= " + std::to_string(d.search_bound) + " finds " +
                                   std::to_string(v.searched.size()) + " point(s), all assembled");
    r.need(setup < 5, "descent bookkeeping " + fmt(setup) + " (< 5 s); full certified pipeline " + fmt(full));
    return r;
}

Result run_suites(const std::string& binary, const std::string& filter, const std::string& label) {
    Result r;
    const std::string cmd = binary + " " + filter + " --no-intro=true 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    std::string out, last;
    if (pipe) {
        char buf[4096];
        while (fgets(buf, sizeof buf, pipe)) {
            out += buf;
            std::string line(buf);
            if (line.find("assertions:") != std::string::npos || line.find("test cases:") != std::string::npos) {
                while (!line.empty() && line.back() == '\n') line.pop_back();
                r.info(line);
            }
        }
    }
    const int status = pipe ? pclose(pipe) : -1;
    r.need(status == 0, label + " (exit status " + std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : -1) + ")");
    return r;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: acceptance <data dir> <test binary>\n";
        return 2;
    }
    const std::string data = argv[1], tests = argv[2];
    const ProblemConfig cfg = load_config(data + "/paper_config.json");
    const ProblemConfig alt = load_config(data + "/paper_config_alt_sieve.json");

    std::vector<std::pair<std::string, Result>> results;
    results.emplace_back("1 chabauty verdicts", criterion1(cfg));
    results.emplace_back("2 period-matrix valuations", criterion2(cfg));
    results.emplace_back("3 sieve with the reference prime lists", criterion3(cfg, alt));
    results.emplace_back("4 descent", criterion4(cfg, alt));
    results.emplace_back("5 property suites at M=12 and M=24",
                         run_suites(tests, "--test-suite=padic,plinalg,intmat,hyperell,abelint,mwsieve --test-case-exclude=*exhaustive*",
                                    "Cantor laws, HNF, Hensel, integrals, reduction, sieve soundness, kernel_lattice"));
    results.emplace_back("6 desk-scale oracles", run_suites(tests, "--test-case=*exhaustive*", "toy-curve orders and structure, W0 search"));

    int failed = 0;
    for (const auto& [name, r] : results) {
        std::cout << "criterion " << name << ": " << (r.pass ? "PASS" : "FAIL") << "\n";
        for (const auto& d : r.detail) std::cout << "    " << d << "\n";
        failed += !r.pass;
    }
    std::cout << (6 - failed) << "/6 criteria pass\n";
    return failed;
}
