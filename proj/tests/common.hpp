#pragma once

#include <random>
#include <string>

#include "chab/pipeline.hpp"

namespace testdata {

inline const chab::ProblemConfig& paper() {
    static const chab::ProblemConfig cfg = chab::load_config(std::string(CHAB_DATA_DIR) + "/paper_config.json");
    return cfg;
}

inline chab::KElt k(long a, long b = 0) { return chab::KElt(paper().F, a, b); }

inline chab::Poly<chab::KElt> kpoly(std::vector<chab::KElt> c) { return chab::Poly<chab::KElt>(k(0), c); }

// A curve over F_p from integer coefficients (low to high).
inline chab::FqCurve fq_curve(const chab::FqCtx* K, const std::vector<long>& c) {
    std::vector<chab::Fq> cs;
    for (long a : c) cs.push_back(chab::Fq::from_int(K, a));
    return chab::FqCurve(chab::Poly<chab::Fq>(chab::Fq(K, 0), cs));
}

inline chab::Fq random_fq(const chab::FqCtx* K, std::mt19937_64& rng) {
    return chab::Fq::from_index(K, rng() % K->order());
}

// A random squarefree monic quintic over k.
inline chab::FqCurve random_curve(const chab::FqCtx* K, std::mt19937_64& rng) {
    for (;;) {
        std::vector<chab::Fq> c;
        for (int i = 0; i < 5; ++i) c.push_back(random_fq(K, rng));
        c.push_back(chab::Fq(K, 1));
        chab::Poly<chab::Fq> f(chab::Fq(K, 0), c);
        if (chab::is_squarefree(f)) return chab::FqCurve(f);
    }
}

constexpr int kPrecisions[] = {12, 24};

}  // namespace testdata
