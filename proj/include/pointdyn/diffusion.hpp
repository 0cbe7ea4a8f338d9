/* Euler-Maruyama integrator for the interacting diffusion that arises as the
 * narrow-kernel limit of the rescaled hop dynamics. Per particle, with
 * M_i = e^{(2s-1) E(x_i, gamma\x_i)} frozen at the step start (Ito):
 *
 *   dx_i = -2(1-s) c M_i grad E_i dt + sqrt(2 c M_i) dW_i
 *
 * so the scheme's generator is c sum_i M_i (Laplacian_i - 2(1-s) <grad E_i,
 * grad_i>) term by term, the negative of the limit operator evaluated by the
 * generators module. At s = 1/2 the mobility is identically 1 and the scheme
 * is the constant-diffusion gradient dynamics dx = -c grad Phi dt +
 * sqrt(2c) dW.
 *
 * Requires a C^2 potential without hard core. All-particle updates are
 * synchronous; positions wrap, while cumulative displacements stay unwrapped
 * for mean-squared-displacement readouts.
 */
#pragma once

#include <vector>

#include "pointdyn/potentials.hpp"
#include "pointdyn/rng.hpp"
#include "pointdyn/simulation.hpp"

namespace pointdyn {

struct DiffusionParams {
    double s = 0.5;
    double c = 1.0;  // mobility constant (z * second moment of the kernel in limits)
    double dt = 1e-3;
    double blowUpGuard = 50.0; // max |dE| per particle per step before BlowUp
    std::uint64_t seed = 1;
};

// Per-particle drift and noise coefficients; pure function of the state,
// exposed for the coefficient unit tests.
struct EmCoefficients {
    double mobility = 1.0; // M_i
    Point drift{};         // -2(1-s) c M_i grad E_i
    double sigma = 0.0;    // sqrt(2 c M_i)
};

EmCoefficients emCoefficients(const DiffusionParams& params, int i, const Configuration& cfg,
                              const PairPotential& pot, const TorusBox& box);

class DiffusionEngine {
  public:
    // Throws NotSmooth unless the potential is C^2 with no hard core.
    DiffusionEngine(const DiffusionParams& params, const PairPotential& pot, const TorusBox& box,
                    Configuration init);

    const Configuration& config() const { return cfg_; }
    const TorusBox& box() const { return box_; }
    double clock() const { return clock_; }
    const DiffusionParams& params() const { return params_; }

    // One synchronous step of every particle. Throws BlowUp when a particle
    // moves further than half the box or its energy jumps past the guard.
    void emStep();

    // Two-phase interface for the shared sampling loop; every "event" is one
    // full EM step.
    double nextEventTime(double horizon);
    EventRecord fireEvent();

    TimeSeries run(double horizon, const std::vector<Observable>& obs, int nSamples) {
        return runEngine(*this, horizon, obs, nSamples, nullptr);
    }

    long steps() const { return steps_; }

    // Mean over particles of the squared unwrapped displacement since t = 0.
    double meanSquaredDisplacement() const;

    // Noise part sigma_i sqrt(dt) xi_i of the last step, one entry per
    // particle; used as an exact-mean-zero control variate by the
    // one-step generator-consistency harness.
    const std::vector<Point>& lastNoise() const { return lastNoise_; }

  private:
    DiffusionParams params_;
    PairPotential pot_;
    TorusBox box_;
    Configuration cfg_;
    Rng rng_;
    std::vector<Point> unwrapped_; // cumulative true displacement per particle
    std::vector<Point> lastNoise_;
    double clock_ = 0.0;
    long steps_ = 0;
    bool pendingValid_ = false;
};

} // namespace pointdyn
