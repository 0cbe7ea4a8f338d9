#include "pointdyn/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pointdyn/errors.hpp"

namespace pointdyn {

EmCoefficients emCoefficients(const DiffusionParams& params, int i, const Configuration& cfg,
                              const PairPotential& pot, const TorusBox& box) {
    const Point& x = cfg.pts[static_cast<std::size_t>(i)];
    const double e = relativeEnergyExcluding(i, x, cfg, pot, box);
    EmCoefficients co;
    co.mobility = std::exp((2.0 * params.s - 1.0) * e);
    co.sigma = std::sqrt(2.0 * params.c * co.mobility);
    const Point g = energyGradientExcluding(i, x, cfg, pot, box);
    const double pref = -2.0 * (1.0 - params.s) * params.c * co.mobility;
    for (int a = 0; a < box.dim; ++a) co.drift[static_cast<std::size_t>(a)] = pref * g[static_cast<std::size_t>(a)];
    return co;
}

DiffusionEngine::DiffusionEngine(const DiffusionParams& params, const PairPotential& pot,
                                 const TorusBox& box, Configuration init)
    : params_(params), pot_(pot), box_(box), cfg_(std::move(init)),
      rng_(Rng::stream(params.seed, {STREAM_DIFFUSION})) {
    if (!pot_.isSmooth() || pot_.hardCore > 0.0)
        throw NotSmooth("DiffusionEngine: potential must be C^2 without hard core");
    if (!(params_.dt > 0.0) || !(params_.c > 0.0))
        throw std::invalid_argument("DiffusionEngine: dt and c must be positive");
    for (auto& p : cfg_.pts) p = box_.wrap(p);
    unwrapped_.assign(cfg_.size(), Point{0.0, 0.0, 0.0});
    lastNoise_.assign(cfg_.size(), Point{0.0, 0.0, 0.0});
}

void DiffusionEngine::emStep() {
    const std::size_t n = cfg_.size();
    const double sqrtDt = std::sqrt(params_.dt);
    std::vector<double> oldEnergy(n);
    std::vector<Point> increment(n, Point{0.0, 0.0, 0.0});

    // Coefficients from the frozen pre-step state, then synchronous apply.
    for (std::size_t i = 0; i < n; ++i) {
        oldEnergy[i] = relativeEnergyExcluding(static_cast<int>(i), cfg_.pts[i], cfg_, pot_, box_);
        const EmCoefficients co = emCoefficients(params_, static_cast<int>(i), cfg_, pot_, box_);
        for (int a = 0; a < box_.dim; ++a) {
            const double noise = co.sigma * sqrtDt * rng_.normal();
            lastNoise_[i][static_cast<std::size_t>(a)] = noise;
            increment[i][static_cast<std::size_t>(a)] = co.drift[static_cast<std::size_t>(a)] * params_.dt + noise;
        }
        double norm2 = 0.0;
        for (int a = 0; a < box_.dim; ++a) norm2 += increment[i][static_cast<std::size_t>(a)] * increment[i][static_cast<std::size_t>(a)];
        if (std::sqrt(norm2) > box_.side / 2.0)
            throw BlowUp("DiffusionEngine: per-step displacement exceeds half the box (reduce dt)");
    }
    for (std::size_t i = 0; i < n; ++i) {
        Point p = cfg_.pts[i];
        for (int a = 0; a < box_.dim; ++a) {
            p[static_cast<std::size_t>(a)] += increment[i][static_cast<std::size_t>(a)];
            unwrapped_[i][static_cast<std::size_t>(a)] += increment[i][static_cast<std::size_t>(a)];
        }
        cfg_.movePoint(static_cast<int>(i), box_.wrap(p));
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double e = relativeEnergyExcluding(static_cast<int>(i), cfg_.pts[i], cfg_, pot_, box_);
        if (std::abs(e - oldEnergy[i]) > params_.blowUpGuard)
            throw BlowUp("DiffusionEngine: per-step energy jump exceeds the guard (reduce dt)");
    }
    ++steps_;
    clock_ = static_cast<double>(steps_) * params_.dt;
}

double DiffusionEngine::nextEventTime(double horizon) {
    const double tNext = static_cast<double>(steps_ + 1) * params_.dt;
    if (tNext > horizon * (1.0 + 1e-12)) {
        clock_ = horizon;
        pendingValid_ = false;
        return kInf;
    }
    pendingValid_ = true;
    return std::min(tNext, horizon);
}

EventRecord DiffusionEngine::fireEvent() {
    if (!pendingValid_)
        throw std::logic_error("DiffusionEngine: fireEvent without a pending step");
    pendingValid_ = false;
    emStep();
    EventRecord ev;
    ev.time = clock_;
    ev.kind = EventRecord::Kind::Null; // EM steps are not logged as events
    return ev;
}

double DiffusionEngine::meanSquaredDisplacement() const {
    if (unwrapped_.empty())
        return 0.0;
    double acc = 0.0;
    for (const auto& u : unwrapped_) {
        for (int a = 0; a < box_.dim; ++a) acc += u[static_cast<std::size_t>(a)] * u[static_cast<std::size_t>(a)];
    }
    return acc / static_cast<double>(unwrapped_.size());
}

} // namespace pointdyn
