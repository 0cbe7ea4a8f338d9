/* Exact continuous-time birth-and-death dynamics. Deaths are simulated from
 * their exact total rate (recomputed from cached per-particle energies, no
 * thinning needed for a finite sum); births race against the uniform
 * dominating intensity z alpha L^d e^{(1-s)|phiMin| nCap} and are thinned by
 * the true rate at the proposed location. Every accepted event changes the
 * particle count by exactly one; rejected births are null events.
 */
#pragma once

#include <vector>

#include "pointdyn/rates.hpp"
#include "pointdyn/simulation.hpp"

namespace pointdyn {

class GlauberEngine {
  public:
    GlauberEngine(const GlauberSpec& spec, const PairPotential& pot, const TorusBox& box,
                  Configuration init, std::uint64_t seed, int fullRefreshEvery = 10000);

    const Configuration& config() const { return cfg_; }
    const TorusBox& box() const { return box_; }
    double clock() const { return clock_; }

    // Two-phase stepping; contract as in KawasakiEngine. The empty
    // configuration is a legal state: deaths vanish, births continue.
    double nextEventTime(double horizon);
    EventRecord fireEvent();
    EventRecord ssaStep(double horizon);

    TimeSeries run(double horizon, const std::vector<Observable>& obs, int nSamples,
                   std::vector<EventRecord>* log = nullptr) {
        return runEngine(*this, horizon, obs, nSamples, log);
    }

    std::uint64_t proposed() const { return proposed_; }
    std::uint64_t births() const { return births_; }
    std::uint64_t deaths() const { return deaths_; }
    std::uint64_t nullEvents() const { return nulls_; }

  private:
    void refreshAllEnergies();
    void refreshAround(const Point& center, int skip);

    GlauberSpec spec_;
    PairPotential pot_;
    TorusBox box_;
    Configuration cfg_;
    CellList cells_;
    Rng rng_;
    std::vector<double> energies_; // E(x_i, gamma \ x_i)
    double logCap_ = 0.0;
    double birthBound_ = 0.0; // z alpha L^d e^{logCap}
    double clock_ = 0.0;
    double pendingTime_ = 0.0;
    bool pendingValid_ = false;
    int fullRefreshEvery_;
    int eventsSinceRefresh_ = 0;
    std::uint64_t proposed_ = 0, births_ = 0, deaths_ = 0, nulls_ = 0;
};

} // namespace pointdyn
