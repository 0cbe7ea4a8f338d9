#include "pointdyn/kawasaki.hpp"

#include <cmath>
#include <stdexcept>

#include "pointdyn/errors.hpp"

namespace pointdyn {

namespace {

double engineCutoff(const PairPotential& pot, const TorusBox& box) {
    return pot.range > 0.0 ? pot.range : box.side;
}

} // namespace

KawasakiEngine::KawasakiEngine(const RateSpec& spec, const PairPotential& pot,
                               const TorusBox& box, Configuration init, std::uint64_t seed,
                               int fullRefreshEvery)
    : spec_(spec), pot_(pot), box_(box), cfg_(std::move(init)),
      cells_(box, engineCutoff(pot, box)), rng_(Rng::stream(seed, {STREAM_KAWASAKI})),
      fullRefreshEvery_(fullRefreshEvery) {
    if (spec_.family != RateSpec::Family::KawasakiS)
        throw std::invalid_argument("KawasakiEngine: thinning envelopes exist for the s-family only");
    if (fullRefreshEvery_ < 1)
        throw std::invalid_argument("KawasakiEngine: fullRefreshEvery must be positive");
    if (pot_.phiMin() < 0.0 && spec_.s < 1.0) {
        const double nCap = pot_.packingCap(box_.dim);
        if (!std::isfinite(nCap))
            throw std::invalid_argument(
                "KawasakiEngine: attractive potential without hard core needs a neighbor cap");
        logCap_ = (1.0 - spec_.s) * (-pot_.phiMin()) * nCap;
    }
    kernelMass_ = spec_.kernel.l1Norm();
    for (auto& p : cfg_.pts) p = box_.wrap(p);
    cells_.build(cfg_);
    nFixed_ = cfg_.size();
    refreshAllEnergies();
}

void KawasakiEngine::refreshAllEnergies() {
    energies_.resize(cfg_.size());
    for (std::size_t i = 0; i < cfg_.size(); ++i) {
        energies_[i] = relativeEnergyExcluding(static_cast<int>(i), cfg_.pts[i], cfg_, cells_,
                                               pot_, box_);
        if (!std::isfinite(energies_[i]))
            throw std::invalid_argument("KawasakiEngine: configuration violates the hard core");
    }
    eventsSinceRefresh_ = 0;
}

void KawasakiEngine::refreshAround(const Point& center, int skip) {
    if (pot_.range <= 0.0)
        return; // free gas: all relative energies stay 0
    cells_.forNeighbors(center, pot_.range, cfg_, [&](int j, double) {
        if (j == skip)
            return;
        energies_[static_cast<std::size_t>(j)] =
            relativeEnergyExcluding(j, cfg_.pts[static_cast<std::size_t>(j)], cfg_, cells_, pot_, box_);
    });
}

double KawasakiEngine::nextEventTime(double horizon) {
    lambdas_.resize(cfg_.size());
    double total = 0.0;
    const double zMass = spec_.activity * kernelMass_;
    for (std::size_t i = 0; i < cfg_.size(); ++i) {
        lambdas_[i] = zMass * std::exp(spec_.s * energies_[i] + logCap_);
        total += lambdas_[i];
    }
    if (total <= 0.0) { // vacuum: nothing can ever fire, idle to the horizon
        clock_ = horizon;
        pendingValid_ = false;
        return kInf;
    }
    const double t = clock_ + rng_.exponential(total);
    if (t > horizon) {
        clock_ = horizon;
        pendingValid_ = false;
        return kInf;
    }
    pendingTime_ = t;
    pendingValid_ = true;
    return t;
}

EventRecord KawasakiEngine::fireEvent() {
    if (!pendingValid_)
        throw std::logic_error("KawasakiEngine: fireEvent without a pending event");
    pendingValid_ = false;
    clock_ = pendingTime_;
    ++proposed_;

    // Hopper proportional to its bound rate.
    double total = 0.0;
    for (double l : lambdas_) total += l;
    double pick = rng_.uniform01() * total;
    std::size_t i = 0;
    for (; i + 1 < lambdas_.size(); ++i) {
        pick -= lambdas_[i];
        if (pick < 0.0)
            break;
    }

    const Point u = spec_.kernel.samplePoint(rng_);
    Point y = cfg_.pts[i];
    for (int a = 0; a < box_.dim; ++a) y[static_cast<std::size_t>(a)] += u[static_cast<std::size_t>(a)];
    y = box_.wrap(y);

    EventRecord ev;
    ev.time = clock_;
    ev.xIndex = static_cast<int>(i);
    ev.y = y;

    const double ey = relativeEnergyExcluding(static_cast<int>(i), y, cfg_, cells_, pot_, box_);
    double p = 0.0;
    if (std::isfinite(ey)) {
        p = std::exp(-(1.0 - spec_.s) * ey - logCap_);
        if (p > 1.0 + 1e-12)
            throw MajorantViolation("hop thinning acceptance exceeds 1: neighbor cap too small");
    }
    if (rng_.uniform01() < p) {
        const Point old = cfg_.pts[i];
        cfg_.movePoint(static_cast<int>(i), y);
        cells_.onMove(cfg_, static_cast<int>(i), old);
        energies_[i] = ey; // E(y, gamma\x) is unchanged by the move itself
        refreshAround(old, static_cast<int>(i));
        refreshAround(y, static_cast<int>(i));
        ev.kind = EventRecord::Kind::Hop;
        ++accepted_;
    } else {
        ev.kind = EventRecord::Kind::Null;
        ++nulls_;
    }

    if (cfg_.size() != nFixed_)
        throw std::logic_error("KawasakiEngine: particle number changed");
    if (++eventsSinceRefresh_ >= fullRefreshEvery_)
        refreshAllEnergies();
    return ev;
}

EventRecord KawasakiEngine::ssaStep(double horizon) {
    nextEventTime(horizon);
    if (!pendingValid_) {
        EventRecord ev;
        ev.time = clock_; // idled to the horizon
        ev.kind = EventRecord::Kind::Null;
        return ev;
    }
    return fireEvent();
}

bool metropolisSwapStep(Configuration& cfg, const RateSpec& spec, const PairPotential& pot,
                        const TorusBox& box, Rng& rng) {
    if (cfg.size() == 0)
        throw std::invalid_argument("metropolisSwapStep: empty configuration");
    const int i = static_cast<int>(rng.uniformBelow(cfg.size()));
    const Point u = spec.kernel.samplePoint(rng);
    Point y = cfg.pts[static_cast<std::size_t>(i)];
    for (int a = 0; a < box.dim; ++a) y[static_cast<std::size_t>(a)] += u[static_cast<std::size_t>(a)];
    y = box.wrap(y);
    const double dE = energyDeltaSwap(i, y, cfg, pot, box);
    if (!std::isfinite(dE))
        return false; // proposal into a hard core: plain rejection
    if (dE > 0.0 && rng.uniform01() >= std::exp(-dE))
        return false;
    cfg.movePoint(i, y);
    return true;
}

} // namespace pointdyn
