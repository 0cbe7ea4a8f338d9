#include "pointdyn/glauber.hpp"

#include <cmath>
#include <stdexcept>

#include "pointdyn/errors.hpp"

namespace pointdyn {

namespace {

double engineCutoff(const PairPotential& pot, const TorusBox& box) {
    return pot.range > 0.0 ? pot.range : box.side;
}

} // namespace

GlauberEngine::GlauberEngine(const GlauberSpec& spec, const PairPotential& pot,
                             const TorusBox& box, Configuration init, std::uint64_t seed,
                             int fullRefreshEvery)
    : spec_(spec), pot_(pot), box_(box), cfg_(std::move(init)),
      cells_(box, engineCutoff(pot, box)), rng_(Rng::stream(seed, {STREAM_GLAUBER})),
      fullRefreshEvery_(fullRefreshEvery) {
    if (fullRefreshEvery_ < 1)
        throw std::invalid_argument("GlauberEngine: fullRefreshEvery must be positive");
    if (pot_.phiMin() < 0.0 && spec_.s < 1.0) {
        const double nCap = pot_.packingCap(box_.dim);
        if (!std::isfinite(nCap))
            throw std::invalid_argument(
                "GlauberEngine: attractive potential without hard core needs a neighbor cap");
        logCap_ = (1.0 - spec_.s) * (-pot_.phiMin()) * nCap;
    }
    birthBound_ = spec_.activity * spec_.alpha * box_.volume() * std::exp(logCap_);
    for (auto& p : cfg_.pts) p = box_.wrap(p);
    cells_.build(cfg_);
    refreshAllEnergies();
}

void GlauberEngine::refreshAllEnergies() {
    energies_.resize(cfg_.size());
    for (std::size_t i = 0; i < cfg_.size(); ++i) {
        energies_[i] = relativeEnergyExcluding(static_cast<int>(i), cfg_.pts[i], cfg_, cells_,
                                               pot_, box_);
        if (!std::isfinite(energies_[i]))
            throw std::invalid_argument("GlauberEngine: configuration violates the hard core");
    }
    eventsSinceRefresh_ = 0;
}

void GlauberEngine::refreshAround(const Point& center, int skip) {
    if (pot_.range <= 0.0)
        return;
    cells_.forNeighbors(center, pot_.range, cfg_, [&](int j, double) {
        if (j == skip)
            return;
        energies_[static_cast<std::size_t>(j)] =
            relativeEnergyExcluding(j, cfg_.pts[static_cast<std::size_t>(j)], cfg_, cells_, pot_, box_);
    });
}

double GlauberEngine::nextEventTime(double horizon) {
    double total = birthBound_;
    for (std::size_t i = 0; i < cfg_.size(); ++i)
        total += spec_.alpha * std::exp(spec_.s * energies_[i]);
    if (total <= 0.0) { // alpha == 0: frozen dynamics
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

EventRecord GlauberEngine::fireEvent() {
    if (!pendingValid_)
        throw std::logic_error("GlauberEngine: fireEvent without a pending event");
    pendingValid_ = false;
    clock_ = pendingTime_;
    ++proposed_;

    std::vector<double> deathRates(cfg_.size());
    double totalDeath = 0.0;
    for (std::size_t i = 0; i < cfg_.size(); ++i) {
        deathRates[i] = spec_.alpha * std::exp(spec_.s * energies_[i]);
        totalDeath += deathRates[i];
    }

    EventRecord ev;
    ev.time = clock_;
    const std::size_t nBefore = cfg_.size();

    if (rng_.uniform01() * (totalDeath + birthBound_) < totalDeath) {
        // Death: exact rates, no thinning.
        double pick = rng_.uniform01() * totalDeath;
        std::size_t i = 0;
        for (; i + 1 < deathRates.size(); ++i) {
            pick -= deathRates[i];
            if (pick < 0.0)
                break;
        }
        ev.kind = EventRecord::Kind::Death;
        ev.xIndex = static_cast<int>(i);
        ev.y = cfg_.pts[i];
        cfg_.removePointSwap(static_cast<int>(i));
        cells_.onRemoveSwap(cfg_, static_cast<int>(i));
        energies_[i] = energies_.back(); // mirror the swap-with-last rename
        energies_.pop_back();
        refreshAround(ev.y, -1);
        ++deaths_;
        if (cfg_.size() + 1 != nBefore)
            throw std::logic_error("GlauberEngine: death changed N by more than one");
    } else {
        // Birth attempt: uniform proposal, thinned by the true rate.
        Point x{0.0, 0.0, 0.0};
        for (int a = 0; a < box_.dim; ++a) x[static_cast<std::size_t>(a)] = rng_.uniformReal(0.0, box_.side);
        const double e = relativeEnergy(x, cfg_, cells_, pot_, box_);
        double p = 0.0;
        if (std::isfinite(e)) {
            p = std::exp((spec_.s - 1.0) * e - logCap_);
            if (p > 1.0 + 1e-12)
                throw MajorantViolation(
                    "birth thinning acceptance exceeds 1: neighbor cap too small");
        }
        if (rng_.uniform01() < p) {
            cfg_.addPoint(x);
            cells_.onInsert(cfg_);
            energies_.push_back(e);
            refreshAround(x, static_cast<int>(cfg_.size()) - 1);
            ev.kind = EventRecord::Kind::Birth;
            ev.xIndex = static_cast<int>(cfg_.size()) - 1;
            ev.y = x;
            ++births_;
            if (cfg_.size() != nBefore + 1)
                throw std::logic_error("GlauberEngine: birth changed N by more than one");
        } else {
            ev.kind = EventRecord::Kind::Null;
            ev.y = x;
            ++nulls_;
        }
    }

    if (++eventsSinceRefresh_ >= fullRefreshEvery_)
        refreshAllEnergies();
    return ev;
}

EventRecord GlauberEngine::ssaStep(double horizon) {
    nextEventTime(horizon);
    if (!pendingValid_) {
        EventRecord ev;
        ev.time = clock_; // idled to the horizon
        ev.kind = EventRecord::Kind::Null;
        return ev;
    }
    return fireEvent();
}

} // namespace pointdyn
