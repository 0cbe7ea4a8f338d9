/* Exact continuous-time hop dynamics via thinning: every particle carries the
 * dominating rate lambdaBar(x) = z ||a~||_1 e^{s E(x)} e^{(1-s)|phiMin| nCap};
 * waiting times are exponential in the total bound, proposals come from the
 * kernel density, and acceptance restores the exact law of the jump process
 * with per-pair hop intensity z c_s(x,y,gamma) dy. Rejections are null events
 * (time advances, state does not). Particle number is conserved by
 * construction and asserted per event.
 *
 * The engine simulates the symmetrized rates; for the s-family those equal
 * c_s itself, which is why the envelope construction is restricted to it.
 * Relative energies are cached per particle and refreshed locally around each
 * accepted hop (cell-list neighborhoods), with a periodic full recompute as a
 * drift backstop.
 */
#pragma once

#include <vector>

#include "pointdyn/rates.hpp"
#include "pointdyn/simulation.hpp"

namespace pointdyn {

class KawasakiEngine {
  public:
    // Throws std::invalid_argument unless spec is KawasakiS with a valid
    // envelope, or if the initial configuration violates the hard core.
    KawasakiEngine(const RateSpec& spec, const PairPotential& pot, const TorusBox& box,
                   Configuration init, std::uint64_t seed, int fullRefreshEvery = 10000);

    const Configuration& config() const { return cfg_; }
    const TorusBox& box() const { return box_; }
    double clock() const { return clock_; }

    /* Draws the next tentative event time. Returns min(draw, horizon); when
     * the configuration is empty (total bound rate 0) or the draw overshoots,
     * the clock jumps to the horizon and no event is pending. */
    double nextEventTime(double horizon);

    // Executes the pending event (choose hopper, propose, thin). Returns the
    // record; kind is Hop or Null.
    EventRecord fireEvent();

    // nextEventTime + fireEvent in one call; returns a Null record at the
    // horizon when nothing fires before it.
    EventRecord ssaStep(double horizon);

    TimeSeries run(double horizon, const std::vector<Observable>& obs, int nSamples,
                   std::vector<EventRecord>* log = nullptr) {
        return runEngine(*this, horizon, obs, nSamples, log);
    }

    std::uint64_t proposed() const { return proposed_; }
    std::uint64_t acceptedHops() const { return accepted_; }
    std::uint64_t nullEvents() const { return nulls_; }
    double nullFraction() const {
        return proposed_ ? static_cast<double>(nulls_) / static_cast<double>(proposed_) : 0.0;
    }

    // Cached relative energy of particle i (exposed for tests).
    double cachedEnergy(int i) const { return energies_[static_cast<std::size_t>(i)]; }

  private:
    void refreshAllEnergies();
    void refreshAround(const Point& center, int skip);

    RateSpec spec_;
    PairPotential pot_;
    TorusBox box_;
    Configuration cfg_;
    CellList cells_;
    Rng rng_;
    std::vector<double> energies_; // E(x_i, gamma \ x_i)
    std::vector<double> lambdas_;  // per-particle bound rates at the last draw
    double logCap_ = 0.0;
    double kernelMass_ = 0.0;
    double clock_ = 0.0;
    double pendingTime_ = 0.0;
    bool pendingValid_ = false;
    std::size_t nFixed_ = 0; // conserved particle number
    int fullRefreshEvery_;
    int eventsSinceRefresh_ = 0;
    std::uint64_t proposed_ = 0, accepted_ = 0, nulls_ = 0;
};

/* One discrete-time Metropolis swap: uniform particle, kernel-displaced
 * proposal, acceptance min(1, e^{-dE}). Exact detailed balance w.r.t. the
 * fixed-N Gibbs density (the kernel is symmetric). Returns true on an
 * accepted move. Works for any rate family since only the kernel is used. */
bool metropolisSwapStep(Configuration& cfg, const RateSpec& spec, const PairPotential& pot,
                        const TorusBox& box, Rng& rng);

} // namespace pointdyn
