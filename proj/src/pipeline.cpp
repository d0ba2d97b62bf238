#include "chab/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include <omp.h>

namespace chab {

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) { throw ConfigError(path + ": " + what); }

const Json& need(const Json& j, const char* key, const std::string& path) {
    if (!j.is_object() || !j.contains(key)) bad(path, std::string("missing field '") + key + "'");
    return j.at(key);
}

mpz_class int_from_json(const Json& j, const std::string& path) {
    if (j.is_number_integer()) return mpz_class(std::to_string(j.get<long long>()));
    if (j.is_string()) {
        mpz_class z;
        if (z.set_str(j.get<std::string>(), 10) != 0) bad(path, "not a decimal integer");
        return z;
    }
    bad(path, "expected an integer");
}

Json int_to_json(const mpz_class& z) {
    if (z.fits_slong_p()) return Json(z.get_si());
    return Json(z.get_str());
}

mpq_class rat_from_json(const Json& j, const std::string& path) {
    if (j.is_array() && j.size() == 2) {
        mpz_class d = int_from_json(j[1], path + "[1]");
        if (d == 0) bad(path, "zero denominator");
        mpq_class q(int_from_json(j[0], path + "[0]"), d);
        q.canonicalize();
        return q;
    }
    return mpq_class(int_from_json(j, path));
}

Json rat_to_json(const mpq_class& q) {
    if (q.get_den() == 1) return int_to_json(q.get_num());
    return Json::array({int_to_json(q.get_num()), int_to_json(q.get_den())});
}

ZPoly zpoly_from_json(const Json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) bad(path, "expected a non-empty coefficient array");
    ZPoly out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(int_from_json(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<long> primes_from_json(const Json& j, const std::string& path) {
    std::vector<long> out;
    if (!j.is_array()) bad(path, "expected an array of primes");
    for (std::size_t i = 0; i < j.size(); ++i) {
        const mpz_class p = int_from_json(j[i], path + "[" + std::to_string(i) + "]");
        if (p < 3 || !p.fits_slong_p() || mpz_probab_prime_p(p.get_mpz_t(), 30) == 0)
            bad(path + "[" + std::to_string(i) + "]", "not an odd prime");
        out.push_back(p.get_si());
    }
    return out;
}

CurvePoint<KElt> point_from_json(const Json& j, const QuadField& F, const std::string& path) {
    if (j.is_string() && j.get<std::string>() == "inf") return CurvePoint<KElt>::at_infinity();
    return CurvePoint<KElt>::affine(kelt_from_json(need(j, "x", path), F), kelt_from_json(need(j, "y", path), F));
}

UniformizerSpec tau_from_json(const Json& j, const QuadField& F, const std::string& path) {
    if (j.is_string() && j.get<std::string>() == "xshift") return UniformizerSpec::xshift();
    return UniformizerSpec::scaled(kelt_from_json(need(j, "c", path), F), need(j, "a", path).get<int>(),
                                   need(j, "b", path).get<int>());
}

CurveConfig curve_from_json(const Json& j, const QuadField& F, const std::string& path) {
    CurveConfig c;
    c.id = need(j, "id", path).get<std::string>();
    try {
        c.C = HyperCurve<KElt>(kpoly_from_json(need(j, "f", path), F));
    } catch (const DomainError& e) {
        bad(path + ".f", e.what());
    }
    const Json& gens = need(j, "generators", path);
    for (std::size_t i = 0; i < gens.size(); ++i) {
        const std::string gp = path + ".generators[" + std::to_string(i) + "]";
        MumfordDiv<KElt> D{kpoly_from_json(need(gens[i], "u", gp), F), kpoly_from_json(need(gens[i], "v", gp), F)};
        if (!is_valid(c.C, D)) bad(gp, "not a reduced Mumford pair on the curve");
        c.gens.push_back(D);
    }
    c.N = j.value("N", 1L);
    if (c.N < 1) bad(path + ".N", "index must be positive");
    const Json& known = need(j, "known", path);
    for (std::size_t i = 0; i < known.size(); ++i) {
        const std::string kp = path + ".known[" + std::to_string(i) + "]";
        KnownPoint k{point_from_json(need(known[i], "point", kp), F, kp + ".point"), std::nullopt};
        if (!on_curve(c.C, k.P)) bad(kp, "point is not on the curve");
        if (known[i].contains("tau")) k.tau = tau_from_json(known[i]["tau"], F, kp + ".tau");
        c.known.push_back(k);
    }
    if (j.contains("chabauty_primes")) c.chabauty_primes = primes_from_json(j["chabauty_primes"], path + ".chabauty_primes");
    if (j.contains("sieve_primes")) c.sieve_primes = primes_from_json(j["sieve_primes"], path + ".sieve_primes");
    return c;
}

DescentConfig descent_from_json(const Json& j, const QuadField& F) {
    DescentConfig d;
    d.q = zpoly_from_json(need(j, "q", "descent"), "descent.q");
    d.Phi = zpoly_from_json(need(j, "Phi", "descent"), "descent.Phi");
    if (j.contains("expected_f")) d.expected_f = kpoly_from_json(j["expected_f"], F);
    d.search_bound = j.value("search_bound", 100L);
    const Json& covers = need(j, "covers", "descent");
    for (std::size_t i = 0; i < covers.size(); ++i) {
        const std::string cp = "descent.covers[" + std::to_string(i) + "]";
        CoverConfig c;
        c.a1 = rat_from_json(need(covers[i], "a1", cp), cp + ".a1");
        c.a2 = kelt_from_json(need(covers[i], "a2", cp), F);
        if (covers[i].contains("curve")) c.curve = covers[i]["curve"].get<std::string>();
        c.rank_zero = covers[i].value("rank_zero", false);
        if (covers[i].contains("torsion_primes"))
            c.torsion_primes = primes_from_json(covers[i]["torsion_primes"], cp + ".torsion_primes");
        if (!c.curve && !c.rank_zero) bad(cp, "needs either a curve id or rank_zero");
        d.covers.push_back(c);
    }
    return d;
}

Json matrix_mod_p(const PadicMatrix& A) {
    Json rows = Json::array();
    for (const auto& r : A.centered(1)) {
        Json row = Json::array();
        for (const auto& e : r) row.push_back(int_to_json(e));
        rows.push_back(row);
    }
    return rows;
}

Json valuations(const PadicMatrix& A) {
    Json rows = Json::array();
    for (int i = 0; i < A.rows(); ++i) {
        Json row = Json::array();
        for (int k = 0; k < A.cols(); ++k) {
            const PadicNum& a = A(i, k);
            if (a.is_indistinguishable_from_zero()) row.push_back(nullptr);
            else row.push_back(a.valuation());
        }
        rows.push_back(row);
    }
    return rows;
}

Json chabauty_report_json(const ChabautyReport& R) {
    Json j;
    j["p"] = R.p;
    j["precision"] = R.M;
    Json primes = Json::array();
    for (const auto& P : R.primes) primes.push_back(P.str());
    j["primes"] = primes;
    if (R.A) j["A_valuations"] = valuations(R.A->A);
    Json pts = Json::array();
    for (const auto& v : R.points) {
        Json pj;
        pj["point"] = point_to_json(v.P0);
        pj["tau"] = v.tau.str();
        pj["verdict"] = v.verdict;
        if (!v.error.empty()) {
            pj["error_kind"] = v.error_kind;
            pj["error"] = v.error;
        }
        if (v.bundle) {
            const CriterionBundle& b = *v.bundle;
            pj["case"] = to_string(b.tag);
            pj["e"] = b.e;
            pj["h"] = b.h;
            pj["j"] = b.j;
            pj["E0"] = matrix_mod_p(b.E0);
            Json tests = Json::array();
            for (std::size_t i = 0; i < b.calE.size(); ++i)
                tests.push_back({{"matrix", matrix_mod_p(b.calE[i])}, {"rank", b.ranks[i]}});
            pj["test_matrices"] = tests;
            if (!b.note.empty()) pj["note"] = b.note;
        }
        pts.push_back(pj);
    }
    j["points"] = pts;
    j["all_true"] = R.all_true();
    return j;
}

std::string join_primes(const std::vector<long>& ps) {
    std::string s = "{";
    for (std::size_t i = 0; i < ps.size(); ++i) s += (i ? "," : "") + std::to_string(ps[i]);
    return s + "}";
}

bool j_of(const PointVerdict& v, int& j) {
    if (!v.bundle) return false;
    j = v.bundle->j;
    return true;
}

}  // namespace

// ---------------------------------------------------------------------------

KElt kelt_from_json(const Json& j, const QuadField& F) {
    if (!j.is_array() || j.size() != 4) bad("K-element", "expected [c0_num, c0_den, c1_num, c1_den], got " + j.dump());
    const mpz_class d0 = int_from_json(j[1], "K-element"), d1 = int_from_json(j[3], "K-element");
    if (d0 == 0 || d1 == 0) bad("K-element", "zero denominator in " + j.dump());
    mpq_class c0(int_from_json(j[0], "K-element"), d0), c1(int_from_json(j[2], "K-element"), d1);
    c0.canonicalize();
    c1.canonicalize();
    return KElt(F, c0, c1);
}

Json kelt_to_json(const KElt& a) {
    return Json::array({int_to_json(a.c0().get_num()), int_to_json(a.c0().get_den()), int_to_json(a.c1().get_num()),
                        int_to_json(a.c1().get_den())});
}

Poly<KElt> kpoly_from_json(const Json& j, const QuadField& F) {
    if (!j.is_array() || j.empty()) bad("polynomial", "expected a non-empty coefficient array");
    std::vector<KElt> c;
    for (const auto& e : j) c.push_back(kelt_from_json(e, F));
    return Poly<KElt>(KElt(F, 0), c);
}

Json kpoly_to_json(const Poly<KElt>& f) {
    Json a = Json::array();
    for (const auto& c : f.coeffs()) a.push_back(kelt_to_json(c));
    return a;
}

Json point_to_json(const CurvePoint<KElt>& P) {
    if (P.infinity) return "inf";
    return {{"x", kelt_to_json(P.x)}, {"y", kelt_to_json(P.y)}};
}

std::string point_str(const CurvePoint<KElt>& P) {
    if (P.infinity) return "inf";
    return "(" + P.x.str() + ", " + P.y.str() + ")";
}

const CurveConfig& ProblemConfig::curve(const std::string& id) const {
    for (const auto& c : curves)
        if (c.id == id) return c;
    throw ConfigError("unknown curve id '" + id + "'");
}

ProblemConfig parse_config(const Json& j) {
    if (!j.is_object()) bad("$", "config must be a JSON object");
    if (j.value("schema", std::string()) != kConfigSchema) bad("schema", std::string("expected '") + kConfigSchema + "'");
    ProblemConfig cfg;
    const Json& field = need(j, "field", "$");
    cfg.F = QuadField{need(field, "u", "field").get<long>(), need(field, "v", "field").get<long>()};
    try {
        cfg.F.validate();
    } catch (const Error& e) {
        bad("field", e.what());
    }
    cfg.precision = j.value("precision", 12);
    if (cfg.precision < 4) bad("precision", "must be at least 4");
    const Json& curves = need(j, "curves", "$");
    for (std::size_t i = 0; i < curves.size(); ++i) {
        CurveConfig c = curve_from_json(curves[i], cfg.F, "curves[" + std::to_string(i) + "]");
        for (const auto& o : cfg.curves)
            if (o.id == c.id) bad("curves[" + std::to_string(i) + "]", "duplicate id " + c.id);
        cfg.curves.push_back(std::move(c));
    }
    if (j.contains("descent")) {
        cfg.descent = descent_from_json(j["descent"], cfg.F);
        for (const auto& c : cfg.descent->covers)
            if (c.curve) cfg.curve(*c.curve);
    }
    return cfg;
}

ProblemConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    try {
        return parse_config(j);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------

ChabautyOutcome run_chabauty(const ProblemConfig& cfg, const std::string& id, long p, const RunOptions& opt) {
    const CurveConfig& cc = cfg.curve(id);
    const int M = opt.precision.value_or(cfg.precision);
    ChabautyOutcome out;
    out.curve = id;
    out.report = chabauty_report(cc.C, cc.gens, cc.N, p, cc.known, M, opt.jobs);
    bool rejected = false, precision = false, silent = false;
    for (const auto& v : out.report.points) {
        rejected = rejected || v.error_kind == "rejected";
        precision = precision || v.error_kind == "precision";
        silent = silent || (v.bundle && v.bundle->j == 0);
    }
    if (opt.recheck && !rejected && !precision) {
        out.recheck = chabauty_report(cc.C, cc.gens, cc.N, p, cc.known, 2 * M, opt.jobs);
        for (std::size_t i = 0; i < out.report.points.size(); ++i) {
            const auto &a = out.report.points[i], &b = out.recheck->points[i];
            int ja = -1, jb = -1;
            j_of(a, ja);
            j_of(b, jb);
            if (a.verdict != b.verdict || ja != jb || b.error_kind == "precision") out.stable = false;
        }
    }
    if (rejected) {
        out.exit = exit_inapplicable;
        for (const auto& v : out.report.points)
            if (v.error_kind == "rejected") {
                out.message = v.error + "; try another prime";
                break;
            }
    } else if (precision || !out.stable) {
        out.exit = exit_precision;
        out.message = precision ? "precision loss; raise --precision" : "verdicts change at doubled precision";
    } else if (silent) {
        out.exit = exit_inapplicable;
        out.message = "j = 0 at this prime (criterion silent); try another prime";
    } else if (!out.report.all_true()) {
        out.exit = exit_failure;
        out.message = "some verdicts are false";
    } else {
        out.message = "all verdicts true";
    }
    return out;
}

Json ChabautyOutcome::json() const {
    Json j;
    j["schema"] = kReportSchema;
    j["command"] = "chabauty";
    j["curve"] = curve;
    j["report"] = chabauty_report_json(report);
    if (recheck) {
        j["recheck_precision"] = recheck->M;
        j["stable"] = stable;
    }
    j["exit"] = exit;
    j["message"] = message;
    return j;
}

std::string ChabautyOutcome::text() const {
    std::ostringstream os;
    os << "chabauty " << curve << " at p=" << report.p << " (M=" << report.M << ")\n";
    for (const auto& P : report.primes) os << "  prime above p: " << P.str() << "\n";
    for (const auto& v : report.points) {
        os << "  P0 = " << point_str(v.P0) << "  tau = " << v.tau.str() << "\n";
        if (!v.error.empty()) os << "    " << v.error_kind << ": " << v.error << "\n";
        if (v.bundle) {
            const auto& b = *v.bundle;
            os << "    case " << to_string(b.tag) << ", e=" << b.e << ", h=" << b.h << ", j=" << b.j << "\n";
            os << "    E0 mod p: " << b.E0.str(1) << "\n";
            for (std::size_t i = 0; i < b.calE.size(); ++i)
                os << "    E mod p: " << b.calE[i].str(1) << "  rank " << b.ranks[i] << "\n";
            if (b.calE.empty()) os << "    test set empty\n";
        }
        os << "    verdict: " << (v.verdict ? "true" : "false") << "\n";
    }
    if (recheck) os << "  doubled precision " << recheck->M << ": " << (stable ? "stable" : "UNSTABLE") << "\n";
    os << message << "\n";
    return os.str();
}

Json ChabautyOutcome::certificate(const CurveConfig& cc) const {
    Json j;
    j["schema"] = kCertificateSchema;
    j["kind"] = "chabauty";
    j["curve"] = cc.id;
    j["f"] = kpoly_to_json(cc.C.f);
    j["N"] = cc.N;
    j["basis"] = kBasisTag;
    j["p"] = report.p;
    j["precision"] = report.M;
    Json pts = Json::array();
    for (const auto& v : report.points) pts.push_back({{"point", point_to_json(v.P0)}, {"verdict", v.verdict}});
    j["points"] = pts;
    j["valid"] = exit == exit_ok;
    return j;
}

// ---------------------------------------------------------------------------

SieveOutcome run_sieve(const ProblemConfig& cfg, const std::string& id, const RunOptions& opt,
                       std::optional<std::vector<long>> primes) {
    const CurveConfig& cc = cfg.curve(id);
    SieveOutcome out;
    out.curve = id;
    out.primes = primes ? *primes : cc.sieve_primes;
    if (out.primes.empty()) {
        out.exit = exit_failure;
        out.message = "no sieve primes configured";
        return out;
    }
    SieveInput in{cc.C, cc.gens, cc.N, out.primes, {}, std::nullopt};
    for (const auto& k : cc.known) in.known.push_back(k.P);
    SieveOptions so;
    so.parallel = opt.jobs > 1;
    so.seed = opt.seed;
    const int saved = omp_get_max_threads();
    if (opt.jobs > 0) omp_set_num_threads(opt.jobs);
    const auto t0 = std::chrono::steady_clock::now();
    try {
        out.report = sieve(in, so);
    } catch (const DomainError& e) {
        omp_set_num_threads(saved);
        out.exit = exit_inapplicable;
        out.message = e.what();
        return out;
    }
    omp_set_num_threads(saved);
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (out.report.success()) {
        out.message = "every class outside red(H') eliminated";
    } else {
        out.exit = exit_failure;
        out.message = std::to_string(out.report.survivors_outside_known()) + " class(es) outside red(H') survive";
    }
    return out;
}

Json SieveOutcome::json() const {
    Json j;
    j["schema"] = kReportSchema;
    j["command"] = "sieve";
    j["curve"] = curve;
    j["primes"] = primes;
    j["N"] = report.N;
    Json conds = Json::array();
    for (const auto& c : report.conditions)
        conds.push_back({{"p", c.p},
                         {"unramified", c.unramified},
                         {"good_reduction", c.good_reduction},
                         {"coprime_index", c.coprime_index},
                         {"group_order", int_to_json(c.group_order)},
                         {"reasons", c.reasons}});
    j["conditions"] = conds;
    Json stages = Json::array();
    for (const auto& s : report.stages) {
        Json orders = Json::array();
        for (const auto& o : s.orders) orders.push_back(int_to_json(o));
        stages.push_back({{"p", s.p},
                          {"orders", orders},
                          {"invariants", s.moduli},
                          {"classes", s.num_classes},
                          {"index", int_to_json(s.index)}});
    }
    j["stages"] = stages;
    Json cls = Json::array();
    for (const auto& c : report.classes)
        cls.push_back({{"class", c.cls.str()},
                       {"known", c.known},
                       {"w_sizes", c.w_sizes},
                       {"eliminated", c.eliminated},
                       {"blowup", c.blowup}});
    j["classes"] = cls;
    j["success"] = exit == exit_ok;
    j["survivors_outside_known"] = report.survivors_outside_known();
    j["exit"] = exit;
    j["message"] = message;
    return j;
}

std::string SieveOutcome::text() const {
    std::ostringstream os;
    os << "sieve " << curve << " over " << join_primes(primes) << "\n";
    for (const auto& s : report.stages) {
        os << "  p=" << s.p << "  #J:";
        for (const auto& o : s.orders) os << " " << o;
        os << "  classes " << s.num_classes << "  [L_prev:L] = " << s.index << "\n";
    }
    for (const auto& c : report.classes) {
        os << "  " << c.cls.str() << (c.known ? " (known)" : "") << "  |W|:";
        for (auto w : c.w_sizes) os << " " << w;
        os << (c.eliminated ? "  eliminated" : "  survives") << (c.blowup ? " (coset cap hit)" : "") << "\n";
    }
    os << message << " (" << seconds << " s)\n";
    return os.str();
}

Json SieveOutcome::certificate(const CurveConfig& cc) const {
    Json j;
    j["schema"] = kCertificateSchema;
    j["kind"] = "sieve";
    j["curve"] = cc.id;
    j["f"] = kpoly_to_json(cc.C.f);
    j["N"] = cc.N;
    j["primes"] = primes;
    Json known = Json::array();
    for (const auto& k : cc.known) known.push_back(point_to_json(k.P));
    j["known"] = known;
    j["valid"] = exit == exit_ok;
    return j;
}

// ---------------------------------------------------------------------------

VerifyOutcome run_verify(const ProblemConfig& cfg, const RunOptions& opt) {
    if (!cfg.descent) throw ConfigError("config has no descent block");
    const DescentConfig& d = *cfg.descent;
    VerifyOutcome out;
    out.fg = factor_over_K(d.Phi, cfg.F);
    if (d.expected_f) out.factor_matches = out.fg.f.same(*d.expected_f);
    out.supports = resultant_supports(d.q, out.fg.f, out.fg.g);
    out.kernel = norm_kernel(out.supports.S1, out.supports.S2, cfg.F);
    const auto twists = twist_curves(out.kernel, out.fg.f);

    std::vector<CoverInput> inputs;
    for (const auto& tw : twists) {
        CoverOutcome co;
        co.pair = tw.pair;
        CoverInput ci{tw, false, "", {}};
        const CoverConfig* cc = nullptr;
        for (const auto& c : d.covers)
            if (c.a1 == tw.pair.a1 && c.a2 == tw.pair.a2) cc = &c;
        if (!cc) {
            co.failure = "descent: no cover configured for " + tw.pair.str();
        } else if (cc->curve) {
            const CurveConfig& cur = cfg.curve(*cc->curve);
            co.curve = cur.id;
            co.model_matches = cur.C.f.same(tw.C.f);
            bool chab_ok = false;
            for (long p : cur.chabauty_primes) {
                co.chabauty.push_back(run_chabauty(cfg, cur.id, p, opt));
                const Json cert = co.chabauty.back().certificate(cur);
                if (cert["valid"].get<bool>() && cert["N"] == cur.N && cert["basis"] == kBasisTag) chab_ok = true;
            }
            co.sieve = run_sieve(cfg, cur.id, opt);
            const bool sieve_ok = co.sieve->exit == exit_ok && co.sieve->certificate(cur)["N"] == cur.N;
            if (!co.model_matches) co.failure = "model: " + cur.id + " is not the twist by " + tw.pair.str();
            else if (cur.chabauty_primes.empty()) co.failure = "chabauty: no primes configured for " + cur.id;
            else if (!chab_ok) co.failure = "chabauty: no prime gives all-true verdicts for " + cur.id;
            else if (!sieve_ok) co.failure = "sieve: " + cur.id + " over " + join_primes(co.sieve->primes) + ": " + co.sieve->message;
            co.certified = co.failure.empty();
            if (co.certified) {
                co.certificate = "chabauty + sieve on " + cur.id;
                for (const auto& k : cur.known) ci.H.push_back(k.P);
            }
        } else {
            co.torsion = torsion_bound(tw.C, cc->torsion_primes);
            if (co.torsion != 1) co.failure = "torsion: reduction bound is " + co.torsion.get_str() + ", not 1";
            co.certified = co.failure.empty();
            if (co.certified) {
                co.certificate = "rank 0 (input) and trivial torsion by reduction at " + join_primes(cc->torsion_primes);
                ci.H.push_back(CurvePoint<KElt>::at_infinity());
            }
        }
        ci.certified = co.certified;
        ci.certificate = co.certificate;
        inputs.push_back(ci);
        out.covers.push_back(std::move(co));
    }

    try {
        out.points = assemble(inputs, d.q, out.fg.f);
        out.assembled = true;
    } catch (const UncertifiedInput&) {
        out.assembled = false;
    }
    out.searched = search_points(d.q, d.Phi, d.search_bound);
    out.search_contained = true;
    for (const auto& P : out.searched)
        if (std::find(out.points.begin(), out.points.end(), P) == out.points.end()) out.search_contained = false;

    std::string first_failure;
    for (const auto& c : out.covers)
        if (!c.certified && first_failure.empty()) first_failure = c.failure;
    if (!out.factor_matches) {
        out.exit = exit_failure;
        out.message = "descent: factorization differs from the expected f";
    } else if (!out.assembled) {
        out.exit = exit_failure;
        out.message = first_failure;
    } else if (!out.search_contained) {
        out.exit = exit_failure;
        out.message = "assembly: a searched point is missing from the assembled set";
    } else {
        std::string s;
        for (const auto& P : out.points) s += (s.empty() ? "" : ", ") + P.str();
        out.message = "Y(Q) = {" + s + "}";
    }
    return out;
}

Json VerifyOutcome::json() const {
    Json j;
    j["schema"] = kReportSchema;
    j["command"] = "verify-paper";
    j["f"] = kpoly_to_json(fg.f);
    j["g"] = kpoly_to_json(fg.g);
    j["factor_matches"] = factor_matches;
    j["res1"] = int_to_json(supports.res1);
    j["res2"] = kelt_to_json(supports.res2);
    j["S1"] = supports.S1;
    Json s2 = Json::array(), raw = Json::array();
    for (const auto& P : supports.S2) s2.push_back(P.str());
    for (const auto& P : supports.S2_raw) raw.push_back(P.str());
    j["S2"] = s2;
    j["S2_raw"] = raw;
    j["S2_notes"] = supports.notes;
    Json covers_j = Json::array();
    for (const auto& c : covers) {
        Json cj;
        cj["a1"] = rat_to_json(c.pair.a1);
        cj["a2"] = kelt_to_json(c.pair.a2);
        cj["nu"] = rat_to_json(c.pair.nu);
        if (!c.curve.empty()) {
            cj["curve"] = c.curve;
            cj["model_matches"] = c.model_matches;
            Json ch = Json::array();
            for (const auto& o : c.chabauty) ch.push_back(o.json());
            cj["chabauty"] = ch;
            if (c.sieve) cj["sieve"] = c.sieve->json();
        } else {
            cj["torsion_bound"] = int_to_json(c.torsion);
        }
        cj["certified"] = c.certified;
        if (c.certified) cj["certificate"] = c.certificate;
        else cj["failure"] = c.failure;
        covers_j.push_back(cj);
    }
    j["covers"] = covers_j;
    Json pts = Json::array(), found = Json::array();
    for (const auto& P : points) pts.push_back(P.str());
    for (const auto& P : searched) found.push_back(P.str());
    j["assembled"] = assembled;
    j["points"] = pts;
    j["searched"] = found;
    j["search_contained"] = search_contained;
    j["exit"] = exit;
    j["message"] = message;
    return j;
}

std::string VerifyOutcome::text() const {
    std::ostringstream os;
    os << "f = " << fg.f.str() << (factor_matches ? "" : "  (differs from expected)") << "\n";
    os << "g = " << fg.g.str() << "\n";
    os << "Res(q, fg) = " << supports.res1 << "   S1 = " << join_primes(supports.S1) << "\n";
    os << "Res(f, qg) = " << supports.res2.str() << "   S2 =";
    for (const auto& P : supports.S2) os << " " << P.str();
    os << "\n";
    for (const auto& n : supports.notes) os << "  " << n << "\n";
    for (const auto& c : covers) {
        os << "cover " << c.pair.str() << " nu=" << c.pair.nu;
        if (!c.curve.empty()) os << " on " << c.curve;
        os << ": " << (c.certified ? "certified (" + c.certificate + ")" : "NOT certified: " + c.failure) << "\n";
    }
    os << "points found by search: " << searched.size() << (search_contained ? " (all assembled)" : " (not all assembled)")
       << "\n";
    os << message << "\n";
    return os.str();
}

}  // namespace chab
