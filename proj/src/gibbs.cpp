#include "pointdyn/gibbs.hpp"

#include <cmath>
#include <stdexcept>

#include "pointdyn/errors.hpp"
#include "pointdyn/rates.hpp"

namespace pointdyn {

void GibbsParams::validate() const {
    std::vector<std::string> bad;
    if (!(activity > 0.0))
        bad.push_back("activity must be positive");
    if (pBirth < 0.0 || pDeath < 0.0 || pMove < 0.0)
        bad.push_back("move probabilities must be nonnegative");
    if (std::abs(pBirth + pDeath + pMove - 1.0) > 1e-12)
        bad.push_back("move probabilities must sum to 1");
    if (std::abs(pBirth - pDeath) > 1e-12)
        bad.push_back("birth and death probabilities must match (detailed balance)");
    if (burnIn < 0 || sweeps < 0)
        bad.push_back("sweeps and burnIn must be nonnegative");
    if (thinning < 1)
        bad.push_back("thinning must be at least 1");
    if (moveRadius < 0.0)
        bad.push_back("moveRadius must be nonnegative");
    if (!bad.empty()) {
        std::string msg = "invalid sampler parameters:";
        for (const auto& b : bad) msg += " " + b + ";";
        throw std::invalid_argument(msg);
    }
}

long GibbsParams::movesPerSweep() const {
    const double target = activity * box.volume();
    return std::max(1L, std::lround(target));
}

double GibbsParams::displacementRadius() const {
    if (moveRadius > 0.0)
        return moveRadius;
    return pot.range > 0.0 ? pot.range : 1.0;
}

namespace {

// Cell cutoff: the interaction range, or one cell spanning the box when the
// potential carries no range at all.
double cellCutoff(const GibbsParams& p) {
    return p.pot.range > 0.0 ? p.pot.range : p.box.side;
}

Point uniformInBox(const TorusBox& box, Rng& rng) {
    Point x{0.0, 0.0, 0.0};
    for (int a = 0; a < box.dim; ++a) x[static_cast<std::size_t>(a)] = rng.uniformReal(0.0, box.side);
    return x;
}

} // namespace

GibbsSampler::GibbsSampler(const GibbsParams& params)
    : params_(params), cells_(params.box, cellCutoff(params)),
      rng_(Rng::stream(params.seed, {STREAM_GIBBS})) {
    params_.validate();
    cells_.build(cfg_);
}

double GibbsSampler::birthAcceptProb(const Point& x) const {
    const double e = relativeEnergy(x, cfg_, cells_, params_.pot, params_.box);
    if (!std::isfinite(e))
        return 0.0;
    const double n1 = static_cast<double>(cfg_.size()) + 1.0;
    return std::min(1.0, params_.activity * params_.box.volume() * std::exp(-e) / n1);
}

double GibbsSampler::deathAcceptProb(int i) const {
    const double e = relativeEnergyExcluding(i, cfg_.pts[static_cast<std::size_t>(i)], cfg_,
                                             cells_, params_.pot, params_.box);
    const double n = static_cast<double>(cfg_.size());
    return std::min(1.0, n * std::exp(e) / (params_.activity * params_.box.volume()));
}

double GibbsSampler::moveAcceptProb(int i, const Point& y) const {
    const double dE = energyDeltaSwap(i, y, cfg_, cells_, params_.pot, params_.box);
    if (!std::isfinite(dE))
        return 0.0;
    return std::min(1.0, std::exp(-dE));
}

void GibbsSampler::step() {
    ++proposed_;
    const double which = rng_.uniform01();
    if (which < params_.pBirth) {
        const Point x = uniformInBox(params_.box, rng_);
        if (rng_.uniform01() < birthAcceptProb(x)) {
            cfg_.addPoint(x);
            cells_.onInsert(cfg_);
            ++accepted_;
        }
    } else if (which < params_.pBirth + params_.pDeath) {
        if (cfg_.size() == 0)
            return; // nothing to remove: ordinary rejection
        const int i = static_cast<int>(rng_.uniformBelow(cfg_.size()));
        if (rng_.uniform01() < deathAcceptProb(i)) {
            cfg_.removePointSwap(i);
            cells_.onRemoveSwap(cfg_, i);
            ++accepted_;
        }
    } else {
        if (cfg_.size() == 0)
            return;
        const int i = static_cast<int>(rng_.uniformBelow(cfg_.size()));
        HopKernel ball{KernelShape::Ball, 1.0, params_.displacementRadius(), 1.0, params_.box.dim};
        const Point u = ball.samplePoint(rng_);
        Point y = cfg_.pts[static_cast<std::size_t>(i)];
        for (int a = 0; a < params_.box.dim; ++a) y[static_cast<std::size_t>(a)] += u[static_cast<std::size_t>(a)];
        y = params_.box.wrap(y);
        if (rng_.uniform01() < moveAcceptProb(i, y)) {
            const Point old = cfg_.pts[static_cast<std::size_t>(i)];
            cfg_.movePoint(i, y);
            cells_.onMove(cfg_, i, old);
            ++accepted_;
        }
    }
}

void GibbsSampler::sweep() {
    const long n = params_.movesPerSweep();
    for (long k = 0; k < n; ++k) step();
    ++sweepIndex_;
}

std::vector<Snapshot> sampleEquilibrium(const GibbsParams& params) {
    GibbsSampler chain(params);
    for (long k = 0; k < params.burnIn; ++k) chain.sweep();

    std::vector<Snapshot> out;
    const long count = params.sweeps / params.thinning;
    out.reserve(static_cast<std::size_t>(std::max(0L, count)));
    for (long k = 0; k < count; ++k) {
        for (long t = 0; t < params.thinning; ++t) chain.sweep();
        if (!std::isfinite(totalEnergy(chain.config(), params.pot, params.box)))
            throw std::logic_error("sampler produced a hard-core-overlapping snapshot");
        out.push_back(Snapshot{chain.config(), params.seed, chain.sweepIndex()});
    }
    return out;
}

namespace {

double shellVolume(int dim, double r0, double r1) {
    switch (dim) {
    case 1: return 2.0 * (r1 - r0);
    case 2: return 3.14159265358979323846 * (r1 * r1 - r0 * r0);
    default: return 4.0 / 3.0 * 3.14159265358979323846 * (r1 * r1 * r1 - r0 * r0 * r0);
    }
}

} // namespace

CorrelationEstimate estimateCorrelations(const std::vector<Snapshot>& snaps, int order, int bins,
                                         const TorusBox& box) {
    if (order != 1 && order != 2)
        throw std::invalid_argument("estimateCorrelations: order must be 1 or 2");
    if (snaps.size() < 100)
        throw InsufficientSamples("estimateCorrelations: need at least 100 snapshots");

    CorrelationEstimate est;
    est.order = order;
    est.nSnapshots = static_cast<long>(snaps.size());
    const double vol = box.volume();

    if (order == 1) {
        std::vector<double> dens;
        dens.reserve(snaps.size());
        for (const auto& s : snaps) dens.push_back(static_cast<double>(s.cfg.size()) / vol);
        est.k1 = batchMeans(dens);
        est.ess = est.k1.ess;
        return est;
    }

    if (bins < 1)
        throw std::invalid_argument("estimateCorrelations: bins must be positive");
    const double rMax = box.side / 2.0; // minimum-image distances are valid below L/2
    const double h = rMax / bins;
    est.binEdges.resize(static_cast<std::size_t>(bins) + 1);
    est.binCenters.resize(static_cast<std::size_t>(bins));
    for (int b = 0; b <= bins; ++b) est.binEdges[static_cast<std::size_t>(b)] = b * h;
    for (int b = 0; b < bins; ++b) est.binCenters[static_cast<std::size_t>(b)] = (b + 0.5) * h;

    // Ordered-pair counts per snapshot and bin; the factorial-measure density
    // estimate is count / (V * shellVol).
    std::vector<std::vector<double>> perBin(static_cast<std::size_t>(bins));
    for (auto& v : perBin) v.reserve(snaps.size());
    std::vector<double> counts(static_cast<std::size_t>(bins));
    for (const auto& s : snaps) {
        std::fill(counts.begin(), counts.end(), 0.0);
        const auto& pts = s.cfg.pts;
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j) {
                const double r = box.dist(pts[i], pts[j]);
                const int b = static_cast<int>(r / h);
                if (b >= 0 && b < bins)
                    counts[static_cast<std::size_t>(b)] += 2.0; // both ordered pairs
            }
        for (int b = 0; b < bins; ++b) perBin[static_cast<std::size_t>(b)].push_back(counts[static_cast<std::size_t>(b)]);
    }

    est.k2.resize(static_cast<std::size_t>(bins));
    est.k2Se.resize(static_cast<std::size_t>(bins));
    est.ess = static_cast<double>(snaps.size());
    for (int b = 0; b < bins; ++b) {
        const double norm = vol * shellVolume(box.dim, est.binEdges[static_cast<std::size_t>(b)],
                                              est.binEdges[static_cast<std::size_t>(b) + 1]);
        const EstimateWithError e = batchMeans(perBin[static_cast<std::size_t>(b)]);
        est.k2[static_cast<std::size_t>(b)] = e.mean / norm;
        est.k2Se[static_cast<std::size_t>(b)] = e.se / norm;
        if (e.mean > 0.0)
            est.ess = std::min(est.ess, e.ess);
    }
    return est;
}

RuelleReport ruelleReport(const CorrelationEstimate& est, double xi) {
    if (!(xi > 0.0))
        throw std::invalid_argument("ruelleReport: xi must be positive");
    RuelleReport rep;
    rep.xi = xi;
    const double bound = xi * xi;
    for (std::size_t b = 0; b < est.k2.size(); ++b) {
        if (est.k2[b] - 3.0 * est.k2Se[b] > bound) {
            rep.flaggedBins.push_back(static_cast<int>(b));
            rep.anyFlag = true;
        }
    }
    return rep;
}

} // namespace pointdyn
