#include <doctest.h>

#include <cmath>
#include <vector>

#include "pointdyn/errors.hpp"
#include "pointdyn/gibbs.hpp"
#include "pointdyn/rates.hpp"
#include "pointdyn/stats.hpp"

using namespace pointdyn;

namespace {

GibbsParams freeGasParams(double z, double L, long sweeps, std::uint64_t seed) {
    GibbsParams p;
    p.activity = z;
    p.pot = PairPotential::none();
    p.box = TorusBox(1, L);
    p.sweeps = sweeps;
    p.burnIn = 200;
    p.seed = seed;
    return p;
}

} // namespace

TEST_CASE("acceptance probabilities satisfy detailed balance pairwise") {
    // Walk a real chain and, at every state it visits, compare the
    // birth/death and move/reverse-move acceptance ratios against the exact
    // Gibbs density ratios. min(1,r)/min(1,1/r) == r makes these two-sided.
    GibbsParams p;
    p.activity = 0.7;
    p.pot = PairPotential::squareWell(0.4, 0.5, 1.0);
    p.box = TorusBox(1, 12.0);
    p.seed = 5;
    GibbsSampler chain(p);
    Rng rng(101);
    for (int warm = 0; warm < 30; ++warm) chain.sweep();

    int finiteChecks = 0;
    for (int iter = 0; iter < 400; ++iter) {
        chain.step();
        const Configuration& cfg = chain.config();
        const double V = p.box.volume();
        const auto n = static_cast<double>(cfg.size());

        // birth of x against death of that same particle afterwards
        const Point x{rng.uniformReal(0.0, 12.0), 0.0, 0.0};
        const double e = relativeEnergy(x, cfg, p.pot, p.box);
        const double ab = chain.birthAcceptProb(x);
        if (!std::isfinite(e)) {
            CHECK(ab == 0.0);
        } else {
            // A_b(x; gamma) = min(1, z V e^{-E(x,gamma)} / (N+1)); together with
            // the death check below this pins min(1,r)/min(1,1/r) = r, i.e.
            // exact detailed balance of the birth/death pair.
            const double r = p.activity * V * std::exp(-e) / (n + 1.0);
            CHECK(ab == doctest::Approx(std::min(1.0, r)).epsilon(1e-12));
            ++finiteChecks;
        }

        if (cfg.size() > 0) {
            const int i = static_cast<int>(rng.uniformBelow(cfg.size()));
            const double ei =
                relativeEnergyExcluding(i, cfg.pts[static_cast<std::size_t>(i)], cfg, p.pot, p.box);
            const double ad = chain.deathAcceptProb(i);
            const double rd = n / (p.activity * V) * std::exp(ei);
            CHECK(ad == doctest::Approx(std::min(1.0, rd)).epsilon(1e-12));

            // displacement against its reverse
            const Point y{rng.uniformReal(0.0, 12.0), 0.0, 0.0};
            const double am = chain.moveAcceptProb(i, y);
            const double logR = swapLogRatio(i, y, cfg, p.pot, p.box);
            if (std::isfinite(logR)) {
                CHECK(am == doctest::Approx(std::min(1.0, std::exp(logR))).epsilon(1e-12));
            } else if (logR < 0.0) {
                CHECK(am == 0.0);
            }
        }
    }
    CHECK(finiteChecks > 100);
}

TEST_CASE("free gas equilibrium is Poisson in the particle count") {
    auto p = freeGasParams(0.8, 10.0, 5000, 31);
    p.thinning = 10; // decorrelate: the chi-square below assumes independence
    const auto snaps = sampleEquilibrium(p);
    REQUIRE(static_cast<long>(snaps.size()) == p.sweeps / p.thinning);

    std::vector<long> counts;
    counts.reserve(snaps.size());
    double meanN = 0.0;
    for (const auto& s : snaps) {
        counts.push_back(static_cast<long>(s.cfg.size()));
        meanN += static_cast<double>(s.cfg.size());
    }
    meanN /= static_cast<double>(snaps.size());
    // E N = z L = 8; correlated sweeps, so give the mean a generous window
    CHECK(meanN == doctest::Approx(8.0).epsilon(0.05));

    const auto chi = poissonChiSquare(counts, 8.0);
    CHECK(chi.pValue > 1e-4); // distribution-shape test, not just the mean

    const auto est = estimateCorrelations(snaps, 1, 0, p.box);
    CHECK(est.k1.mean == doctest::Approx(0.8).epsilon(0.05));
    CHECK(std::fabs(est.k1.mean - 0.8) < 4.0 * est.k1.se + 1e-3);
}

TEST_CASE("repulsion suppresses the density below the activity") {
    GibbsParams p;
    p.activity = 0.6;
    p.pot = PairPotential::softRepulsive(1.5, 1.0);
    p.box = TorusBox(1, 20.0);
    p.sweeps = 2000;
    p.burnIn = 200;
    p.seed = 77;
    const auto snaps = sampleEquilibrium(p);
    const auto est = estimateCorrelations(snaps, 1, 0, p.box);
    CHECK(est.k1.mean + 3.0 * est.k1.se < p.activity);
    CHECK(est.k1.mean > 0.2); // but not collapsed
}

TEST_CASE("sampling is deterministic in the seed") {
    GibbsParams p;
    p.activity = 0.5;
    p.pot = PairPotential::squareWell(0.3, 0.5, 1.0);
    p.box = TorusBox(1, 15.0);
    p.sweeps = 60;
    p.burnIn = 20;
    p.seed = 12345;
    const auto a = sampleEquilibrium(p);
    const auto b = sampleEquilibrium(p);
    REQUIRE(a.size() == b.size());
    for (std::size_t t = 0; t < a.size(); ++t) {
        REQUIRE(a[t].cfg.size() == b[t].cfg.size());
        CHECK(a[t].sweepIndex == b[t].sweepIndex);
        for (std::size_t i = 0; i < a[t].cfg.size(); ++i)
            for (int c = 0; c < 3; ++c)
                CHECK(a[t].cfg.pts[i][static_cast<std::size_t>(c)] ==
                      b[t].cfg.pts[i][static_cast<std::size_t>(c)]);
    }
    // different seeds must not reproduce the same trajectory
    p.seed = 54321;
    const auto c = sampleEquilibrium(p);
    bool sameCounts = true;
    for (std::size_t t = 0; t < std::min(a.size(), c.size()); ++t)
        sameCounts = sameCounts && a[t].cfg.size() == c[t].cfg.size();
    CHECK_FALSE(sameCounts);
}

TEST_CASE("pair correlations vanish inside the hard core and follow e^{-phi} at low activity") {
    GibbsParams p;
    p.activity = 0.1;
    p.pot = PairPotential::squareWell(0.3, 0.5, 1.0);
    p.box = TorusBox(1, 40.0);
    p.sweeps = 12000;
    p.burnIn = 500;
    p.thinning = 2;
    p.seed = 99;
    const auto snaps = sampleEquilibrium(p);
    const auto est = estimateCorrelations(snaps, 2, 40, p.box);
    REQUIRE(est.k2.size() == 40);
    REQUIRE(est.binCenters.size() == 40);

    const auto est1 = estimateCorrelations(snaps, 1, 0, p.box);
    const double k1sq = est1.k1.mean * est1.k1.mean;

    for (std::size_t b = 0; b < est.k2.size(); ++b) {
        const double r = est.binCenters[b];
        if (r < 0.5) {
            CHECK(est.k2[b] == 0.0); // hard core: no pair can ever land here
        } else if (r > 1.6 && r < 5.0) {
            // far outside the range: k2 ~ k1^2 (low activity, short range)
            CHECK(est.k2[b] == doctest::Approx(k1sq).epsilon(0.25));
        } else if (r > 0.55 && r < 0.95) {
            // inside the well: k2/k1^2 ~ e^{+w} = e^{0.3}
            CHECK(est.k2[b] / k1sq == doctest::Approx(std::exp(0.3)).epsilon(0.2));
        }
    }

    // the density-bound report flags nothing at a generous xi, and flags the
    // well bins once xi is squeezed below the contact value
    const auto ok = ruelleReport(est, 1.0);
    CHECK_FALSE(ok.anyFlag);
    const auto tight = ruelleReport(est, 0.05);
    CHECK(tight.anyFlag);
}

TEST_CASE("parameter validation rejects inconsistent move mixes") {
    GibbsParams p;
    p.pot = PairPotential::none();
    p.box = TorusBox(1, 10.0);
    p.pBirth = 0.3;
    p.pDeath = 0.2;
    p.pMove = 0.5;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.pBirth = p.pDeath = 0.25;
    p.pMove = 0.6;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.pMove = 0.5;
    CHECK_NOTHROW(p.validate());
    p.activity = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("correlation estimators refuse tiny samples") {
    auto p = freeGasParams(0.5, 10.0, 50, 3);
    const auto snaps = sampleEquilibrium(p);
    CHECK_THROWS_AS(estimateCorrelations(snaps, 1, 0, p.box), InsufficientSamples);
}

TEST_CASE("hard-core states are unreachable from the empty configuration") {
    GibbsParams p;
    p.activity = 2.0; // push hard against the core
    p.pot = PairPotential::squareWell(0.5, 0.6, 1.2);
    p.box = TorusBox(1, 8.0);
    p.sweeps = 500;
    p.burnIn = 50;
    p.seed = 7;
    const auto snaps = sampleEquilibrium(p);
    for (const auto& s : snaps)
        CHECK(std::isfinite(totalEnergy(s.cfg, p.pot, p.box)));
}
