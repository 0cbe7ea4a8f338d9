#include "pointdyn/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <stdexcept>

#include "pointdyn/errors.hpp"
#include "pointdyn/generators.hpp"
#include "pointdyn/glauber.hpp"
#include "pointdyn/kawasaki.hpp"
#include "pointdyn/rng.hpp"
#include "pointdyn/stats.hpp"

namespace pointdyn {

namespace {

double nowSeconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::uint64_t replicaSeed(std::uint64_t base, std::uint64_t r) {
    std::uint64_t sm = base ^ (r + kGolden);
    return splitmix64(sm);
}

Point randomPoint(Rng& rng, const TorusBox& box) {
    Point p{0.0, 0.0, 0.0};
    for (int a = 0; a < box.dim; ++a) p[static_cast<std::size_t>(a)] = rng.uniformReal(0.0, box.side);
    return p;
}

std::string formatZ(const char* label, double zscore) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%s=%.2f", label, zscore);
    return buf;
}

// Plain mean / standard error over independent values.
void meanAndSe(const std::vector<double>& xs, double& mean, double& se) {
    const double n = static_cast<double>(xs.size());
    mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    se = xs.size() > 1 ? std::sqrt(ss / (n * (n - 1.0))) : 0.0;
}

} // namespace

std::vector<GnzFunction> defaultGnzFamily(const TorusBox& box, std::uint64_t seed) {
    Rng rng = Rng::stream(seed, {STREAM_VERIFY, 7});
    const double L = box.side;
    auto bumpAt = [&](double radius, double amp) {
        FieldBump b;
        b.center = randomPoint(rng, box);
        b.radius = radius;
        b.amplitude = amp;
        return b;
    };
    std::vector<GnzFunction> fns(3);
    fns[0].g.bumps = {bumpAt(0.22 * L, 1.0)};
    fns[0].withH = false;
    fns[0].label = "profile";

    fns[1].g.bumps = {bumpAt(0.18 * L, 0.8)};
    fns[1].psi.bumps = {bumpAt(0.30 * L, 0.5)};
    fns[1].withH = true;
    fns[1].label = "profile*tanh";

    fns[2].g.bumps = {bumpAt(0.15 * L, 1.0), bumpAt(0.20 * L, -0.6)};
    fns[2].psi.bumps = {bumpAt(0.25 * L, 0.4), bumpAt(0.12 * L, -0.3)};
    fns[2].withH = true;
    fns[2].label = "two-bump*tanh";
    return fns;
}

VerificationReport gnzTest(const std::vector<Snapshot>& snaps, double z,
                           const PairPotential& pot, const TorusBox& box,
                           const std::vector<GnzFunction>& fns, int mcPoints,
                           std::uint64_t seed) {
    const double t0 = nowSeconds();
    if (snaps.size() < 100)
        throw InsufficientSamples("gnzTest: need at least 100 snapshots");
    if (mcPoints < 1)
        throw std::invalid_argument("gnzTest: mcPoints must be positive");

    VerificationReport rep;
    rep.name = "insertion-identity";
    rep.threshold = 3.0;
    rep.seed = seed;
    rep.sampleSizes = {static_cast<long>(snaps.size()), mcPoints};
    rep.statistic = 0.0;
    const double volume = box.volume();

    for (std::size_t j = 0; j < fns.size(); ++j) {
        const GnzFunction& fn = fns[j];
        Rng rng = Rng::stream(seed, {STREAM_VERIFY, j});
        std::vector<double> diffs;
        diffs.reserve(snaps.size());
        for (const auto& snap : snaps) {
            const Configuration& cfg = snap.cfg;
            const double sumPsi = fn.withH ? fn.psi.sumOver(cfg, box) : 0.0;
            // Left side: sum over particles of g(x) h(<psi,gamma>); the h
            // argument sees the full configuration including x.
            double lhs = 0.0;
            const double hFull = fn.withH ? std::tanh(sumPsi) : 1.0;
            for (const auto& p : cfg.pts) lhs += fn.g.value(p, box) * hFull;
            // Right side: z V E_x[ e^{-E(x,gamma)} g(x) h(<psi,gamma>+psi(x)) ].
            double rhs = 0.0;
            for (int m = 0; m < mcPoints; ++m) {
                const Point x = randomPoint(rng, box);
                const double g = fn.g.value(x, box);
                if (g == 0.0)
                    continue; // outside the profile support: integrand 0
                const double e = relativeEnergy(x, cfg, pot, box);
                if (!std::isfinite(e))
                    continue;
                const double h = fn.withH ? std::tanh(sumPsi + fn.psi.value(x, box)) : 1.0;
                rhs += std::exp(-e) * g * h;
            }
            rhs *= z * volume / mcPoints;
            diffs.push_back(lhs - rhs);
        }
        const EstimateWithError est = batchMeans(diffs);
        const double zscore = est.se > 0.0 ? std::abs(est.mean) / est.se
                                           : (est.mean == 0.0 ? 0.0 : kInf);
        if (!rep.note.empty())
            rep.note += ", ";
        rep.note += formatZ(fn.label.c_str(), zscore);
        if (zscore > rep.statistic) {
            rep.statistic = zscore;
            rep.se = est.se;
        }
    }
    rep.pass = rep.statistic <= rep.threshold;
    rep.runtimeSeconds = nowSeconds() - t0;
    return rep;
}

VerificationReport detailedBalanceSuite(const PairPotential& pot, const TorusBox& box,
                                        int nCases, std::uint64_t seed) {
    const double t0 = nowSeconds();
    VerificationReport rep;
    rep.name = "detailed-balance";
    rep.threshold = 1e-10;
    rep.seed = seed;
    rep.sampleSizes = {nCases};

    Rng rng = Rng::stream(seed, {STREAM_VERIFY, 1});
    HopKernel kernel;
    kernel.shape = KernelShape::Ball;
    kernel.amplitude = 1.3;
    kernel.radius = 0.45 * box.side;
    kernel.delta = 1.0;
    kernel.dim = box.dim;

    // Cap case sizes below the hard-core packing bound so legal
    // configurations can always be drawn by rejection.
    long maxN = 20;
    if (pot.hardCore > 0.0) {
        const double perAxis = std::floor(box.side / pot.hardCore);
        double cap = 1.0;
        for (int a = 0; a < box.dim; ++a) cap *= perAxis;
        maxN = std::min(maxN, std::max(1L, static_cast<long>(0.5 * cap)));
    }

    const double sGrid[] = {0.0, 0.3, 0.5, 1.0};
    const double uvGrid[][2] = {{0.0, 1.0}, {0.2, 0.7}};
    const double z = 0.7;
    double worst = 0.0;
    auto bump = [&](double r) { worst = std::max(worst, r); };

    for (int cse = 0; cse < nCases; ++cse) {
        const long n = 1 + static_cast<long>(rng.uniformBelow(static_cast<std::uint64_t>(maxN)));
        Configuration cfg;
        for (long k = 0; k < n; ++k) {
            Point p;
            int tries = 0;
            do {
                p = randomPoint(rng, box);
                if (++tries > 5000)
                    throw std::runtime_error("detailedBalanceSuite: cannot draw a legal configuration");
            } while (!std::isfinite(relativeEnergy(p, cfg, pot, box)));
            cfg.addPoint(p);
        }
        const int i = static_cast<int>(rng.uniformBelow(cfg.size()));
        const Point x = cfg.pts[static_cast<std::size_t>(i)];
        const Point u = kernel.samplePoint(rng);
        const Point y = box.wrap(Point{x[0] + u[0], x[1] + u[1], x[2] + u[2]});

        // (i) the symmetrization leaves the gradient family invariant
        for (double s : sGrid) {
            const RateSpec spec = RateSpec::kawasakiS(s, kernel, z);
            const double c = kawasakiRate(spec, i, y, cfg, pot, box);
            const double ct = symmetrize(spec, i, y, cfg, pot, box);
            bump(std::abs(ct - c) / (1.0 + std::abs(c)));
        }

        // (ii) the two-sided swap identity for the symmetrized (u,v) family
        for (const auto& uv : uvGrid) {
            const RateSpec spec = RateSpec::kawasakiUV(uv[0], uv[1], kernel, z);
            const double ctF = symmetrize(spec, i, y, cfg, pot, box);
            const double logRatio = swapLogRatio(i, y, cfg, pot, box);
            if (std::isfinite(logRatio)) {
                Configuration swapped = cfg;
                swapped.movePoint(i, box.wrap(y));
                const double ctR = symmetrize(spec, i, x, swapped, pot, box);
                bump(std::abs(ctF - ctR * std::exp(logRatio)) / (1.0 + std::abs(ctF)));
            } else {
                // target blocked: forward symmetrized rate must vanish for
                // every family that consults the target energy
                if (uv[1] < 1.0)
                    bump(std::abs(ctF));
            }
        }

        // c_{0,1} is the bare kernel, bit-for-bit
        {
            const RateSpec spec = RateSpec::kawasakiUV(0.0, 1.0, kernel, z);
            const double c = kawasakiRate(spec, i, y, cfg, pot, box);
            const double a = kernel.value(box.dist(x, y));
            bump(std::abs(c - a));
        }

        // (iii) birth rate = e^{-E} * death rate after insertion
        for (double s : {0.0, 0.5, 1.0}) {
            const GlauberSpec gs = GlauberSpec::make(s, z, 1.3);
            Point w;
            if (cse % 2 == 0) {
                w = randomPoint(rng, box);
            } else { // near an existing particle, so interactions are exercised
                const Point v = kernel.samplePoint(rng);
                w = box.wrap(Point{x[0] + v[0], x[1] + v[1], x[2] + v[2]});
            }
            const double b = glauberBirthRate(gs, w, cfg, nullptr, pot, box);
            const double e = relativeEnergy(w, cfg, pot, box);
            if (!std::isfinite(e)) {
                bump(std::abs(b)); // blocked site: birth rate must be 0
                continue;
            }
            Configuration plus = cfg;
            plus.addPoint(box.wrap(w));
            const double d = glauberDeathRate(gs, static_cast<int>(plus.size()) - 1, plus,
                                              nullptr, pot, box);
            bump(std::abs(b - std::exp(-e) * d) / (1.0 + std::abs(b)));
        }
    }

    rep.statistic = worst;
    rep.se = 0.0;
    rep.pass = worst <= rep.threshold;
    rep.runtimeSeconds = nowSeconds() - t0;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "worst residual %.3e over %d cases", worst, nCases);
    rep.note = buf;
    return rep;
}

VerificationReport invarianceTest(const InvarianceSetup& setup,
                                  const std::vector<Snapshot>& starts,
                                  const std::vector<Observable>& obs) {
    const double t0 = nowSeconds();
    if (starts.size() < 8)
        throw InsufficientSamples("invarianceTest: need at least 8 starting snapshots");
    if (obs.empty())
        throw std::invalid_argument("invarianceTest: no observables supplied");

    const std::size_t R = starts.size();
    const std::size_t J = obs.size();

    auto runReplica = [&](const Configuration& init, std::uint64_t sd, double dtOverride,
                          std::vector<double>& v0, std::vector<double>& vT) {
        auto record = [&](const Configuration& cfg, std::vector<double>& out) {
            out.resize(J);
            for (std::size_t j = 0; j < J; ++j) out[j] = obs[j].fn(cfg, setup.box);
        };
        auto drive = [&](auto& eng) {
            record(eng.config(), v0);
            while (std::isfinite(eng.nextEventTime(setup.horizon))) eng.fireEvent();
            record(eng.config(), vT);
        };
        switch (setup.kind) {
        case EngineKind::Kawasaki: {
            KawasakiEngine eng(setup.rate, setup.pot, setup.box, init, sd);
            drive(eng);
            break;
        }
        case EngineKind::Glauber: {
            GlauberEngine eng(setup.glauber, setup.pot, setup.box, init, sd);
            drive(eng);
            break;
        }
        case EngineKind::Diffusion: {
            DiffusionParams par = setup.diffusion;
            par.seed = sd;
            if (dtOverride > 0.0)
                par.dt = dtOverride;
            DiffusionEngine eng(par, setup.pot, setup.box, init);
            drive(eng);
            break;
        }
        }
    };

    // diffs[j][r] = O_j(end) - O_j(start), one replica per snapshot
    std::vector<std::vector<double>> diffs(J, std::vector<double>(R));
    std::vector<std::vector<double>> diffsHalf; // dt/2 rerun for the bias bound
    const bool halveDt = setup.kind == EngineKind::Diffusion;
    if (halveDt)
        diffsHalf.assign(J, std::vector<double>(R));
    std::vector<double> v0, vT;
    for (std::size_t r = 0; r < R; ++r) {
        runReplica(starts[r].cfg, replicaSeed(setup.seed, r), 0.0, v0, vT);
        for (std::size_t j = 0; j < J; ++j) diffs[j][r] = vT[j] - v0[j];
        if (halveDt) {
            runReplica(starts[r].cfg, replicaSeed(setup.seed ^ 0xD1F2E3C4B5A69788ULL, r),
                       setup.diffusion.dt / 2.0, v0, vT);
            for (std::size_t j = 0; j < J; ++j) diffsHalf[j][r] = vT[j] - v0[j];
        }
    }

    VerificationReport rep;
    rep.name = "stationarity";
    rep.threshold = 3.0;
    rep.seed = setup.seed;
    rep.sampleSizes = {static_cast<long>(R)};
    rep.statistic = 0.0;
    for (std::size_t j = 0; j < J; ++j) {
        double mean, se;
        meanAndSe(diffs[j], mean, se);
        double bias = 0.0;
        if (halveDt) {
            double meanHalf, seHalf;
            meanAndSe(diffsHalf[j], meanHalf, seHalf);
            bias = std::abs(mean - meanHalf); // first-order time-step bias scale
        }
        const double allowed = se + bias / 3.0;
        const double zscore = allowed > 0.0 ? std::abs(mean) / allowed
                                            : (mean == 0.0 ? 0.0 : kInf);
        if (!rep.note.empty())
            rep.note += ", ";
        rep.note += formatZ(obs[j].name.c_str(), zscore);
        if (zscore > rep.statistic) {
            rep.statistic = zscore;
            rep.se = se;
        }
    }
    rep.pass = rep.statistic <= rep.threshold;
    rep.runtimeSeconds = nowSeconds() - t0;
    return rep;
}

namespace {

// Shared core of the two limit experiments: given per-snapshot values of the
// limit operator and a callback producing the (rescaled) hop-generator value
// at one delta, assemble the error curve and its gates.
LimitCurve limitCurve(const std::vector<double>& deltaGrid,
                      const std::vector<Snapshot>& snaps,
                      const std::vector<double>& limitVals, int quadGrid,
                      const std::function<double(double, const Configuration&)>& hopAt) {
    LimitCurve curve;
    for (double delta : deltaGrid) {
        std::vector<double> sq;
        sq.reserve(snaps.size());
        for (std::size_t t = 0; t < snaps.size(); ++t) {
            const double k = hopAt(delta, snaps[t].cfg);
            const double d = k - limitVals[t];
            sq.push_back(d * d);
        }
        const EstimateWithError est = batchMeans(sq);
        curve.points.push_back({delta, est.mean, est.se, static_cast<long>(snaps.size()), quadGrid});
    }
    curve.nonincreasing = true;
    for (std::size_t k = 0; k + 1 < curve.points.size(); ++k) {
        const LimitPoint& a = curve.points[k];
        const LimitPoint& b = curve.points[k + 1];
        if (b.l2err > a.l2err + std::sqrt(a.se * a.se + b.se * b.se))
            curve.nonincreasing = false;
    }
    if (!curve.points.empty())
        curve.finalQuarter = curve.points.back().l2err <= 0.25 * curve.points.front().l2err;
    curve.pass = curve.nonincreasing && curve.finalQuarter;
    return curve;
}

} // namespace

LimitCurve glauberLimitExperiment(const std::vector<double>& deltaGrid,
                                  const PairPotential& pot, const TorusBox& box, double z,
                                  const HopKernel& kernel, const TestField& psi,
                                  const std::vector<Snapshot>& snaps, int quadGrid) {
    if (snaps.size() < 100)
        throw InsufficientSamples("glauberLimitExperiment: need at least 100 snapshots");
    // Matched birth-death speed: each particle's total hop intensity in the
    // spread-out limit is 2 z |a|_1 <e^{-E}> = 2 k1 |a|_1 for the mean density.
    double k1 = 0.0;
    for (const auto& s : snaps) k1 += static_cast<double>(s.cfg.size());
    k1 /= static_cast<double>(snaps.size()) * box.volume();
    const double alpha = 2.0 * k1 * kernel.l1Norm();

    const CylinderFunctional F = CylinderFunctional::single(psi, OuterFn::exponential());
    const GlauberSpec gspec = GlauberSpec::make(0.0, z, alpha);
    std::vector<double> gvals;
    gvals.reserve(snaps.size());
    for (const auto& s : snaps)
        gvals.push_back(applyGlauber(F, s.cfg, gspec, pot, box, quadGrid).value);

    LimitCurve curve = limitCurve(
        deltaGrid, snaps, gvals, quadGrid, [&](double delta, const Configuration& cfg) {
            HopKernel k = kernel;
            k.delta = delta;
            const RateSpec spec = RateSpec::kawasakiS(0.0, k, z);
            return applyKawasaki(F, cfg, spec, pot, box, quadGrid).value;
        });
    curve.alpha = alpha;
    return curve;
}

LimitCurve diffusionLimitExperiment(const std::vector<double>& deltaGrid, double s,
                                    const PairPotential& pot, const TorusBox& box, double z,
                                    const HopKernel& kernel, const CylinderFunctional& F,
                                    const std::vector<Snapshot>& snaps, int quadGrid) {
    if (snaps.size() < 100)
        throw InsufficientSamples("diffusionLimitExperiment: need at least 100 snapshots");
    // The delta^2 rescaling exactly cancels the kernel's second-moment
    // scaling, so the limit operator carries the unscaled moment.
    const DiffusionOperatorParams dpar{s, z * kernel.secondMoment()};
    std::vector<double> tvals;
    tvals.reserve(snaps.size());
    for (const auto& snap : snaps)
        tvals.push_back(applyDiffusion(F, snap.cfg, dpar, pot, box));

    return limitCurve(deltaGrid, snaps, tvals, quadGrid,
                      [&](double delta, const Configuration& cfg) {
                          HopKernel k = kernel;
                          k.delta = delta;
                          const RateSpec spec = RateSpec::kawasakiS(s, k, z);
                          return delta * delta * applyKawasaki(F, cfg, spec, pot, box, quadGrid).value;
                      });
}

} // namespace pointdyn
