/* Jump-rate families for the hop and birth-death dynamics, the hop kernel
 * with its delta-scaling, the symmetrization operation, and the exact
 * envelopes (majorants) used by the thinning simulators.
 *
 * Rate conventions:
 *   - Rates returned here never include the activity z; z enters at the
 *     intensity level (z * c(x,y,gamma) dy, z * b(x,gamma) dx).
 *   - If any relative energy entering a rate exponent is +infinity, the rate
 *     is 0 (hard-core-blocked move), for every value of the exponent weights.
 *     This also rules out inf - inf: density ratios across a swap are always
 *     computed in the pair-cancelled form E(x,gamma\x) - E(y,gamma\x), which
 *     is the exact Gibbs ratio (the phi(x,y) contributions cancel
 *     identically, even when both diverge).
 */
#pragma once

#include <functional>

#include "pointdyn/potentials.hpp"
#include "pointdyn/rng.hpp"

namespace pointdyn {

enum class KernelShape { Ball, Triangle };

/* Radial hop kernel a~ (unscaled shape, amplitude, support radius) together
 * with the scaling a~_delta(u) = delta^dim * a~(delta u), which preserves the
 * total mass while shrinking the support to radius/delta. The L1 norm and the
 * second moment integral of a~(u) (u_1)^2 du are analytic per shape. */
struct HopKernel {
    KernelShape shape = KernelShape::Ball;
    double amplitude = 1.0;
    double radius = 1.0; // support radius of the unscaled a~
    double delta = 1.0;
    int dim = 1;

    double unscaledValue(double r) const; // a~ at |u| = r
    double value(double r) const;         // a~_delta at |u| = r
    double supportRadius() const { return radius / delta; }

    double l1Norm() const;             // integral of a~ (= of a~_delta, any delta)
    double secondMoment() const;       // integral a~(u) (u_1)^2 du, unscaled
    double secondMomentScaled() const; // same for a~_delta: secondMoment()/delta^2

    // Draw u with density a~_delta(u) / l1Norm() (exact inverse/rejection
    // sampling in the radius, uniform direction).
    Point samplePoint(Rng& rng) const;

    // Mass of a~_delta by radial midpoint quadrature; for the scaling test.
    double massByQuadrature(int n = 4096) const;
};

/* Hop-rate family selector. KawasakiS is the one-parameter family
 *   c_s(x,y,gamma) = a(x-y) exp[s E(x,gamma\x) - (1-s) E(y,gamma\x)],
 * KawasakiUV the two-parameter generalization
 *   c_{u,v}(x,y,gamma) = a(x-y) exp[u E(x,gamma\x) - (1-v) E(y,gamma)]
 * (note: E(y,gamma) with x still present). Custom accepts any evaluator
 * c(x, xIdx, y, cfg) for rate-level experiments; the event-driven engine
 * only accepts KawasakiS (its envelope construction is family-specific). */
using RateEvaluator = std::function<double(const Point& x, int xIdx, const Point& y,
                                           const Configuration& cfg, const PairPotential& pot,
                                           const TorusBox& box)>;

struct RateSpec {
    enum class Family { KawasakiS, KawasakiUV, Custom };
    Family family = Family::KawasakiS;
    double s = 0.0;
    double u = 0.0, v = 1.0;
    HopKernel kernel;
    double activity = 1.0; // z
    RateEvaluator custom;  // Family::Custom only

    static RateSpec kawasakiS(double s, HopKernel k, double z);
    static RateSpec kawasakiUV(double u, double v, HopKernel k, double z);
    static RateSpec customRate(RateEvaluator c, HopKernel k, double z);
};

// c(x, y, gamma) for the particle at index xIdx hopping to y. No z factor.
double kawasakiRate(const RateSpec& spec, int xIdx, const Point& y, const Configuration& cfg,
                    const PairPotential& pot, const TorusBox& box);

// The bare (unsymmetrized) evaluator a spec describes; no z factor.
RateEvaluator evaluatorFor(const RateSpec& spec);

/* Symmetrized rate
 *   c~(x,y,gamma) = (1/2)( c(x,y,gamma)
 *                        + c(y,x,gamma\x u y) * exp[-E(y,gamma)+E(x,gamma\x u y)] )
 * computed mechanically from the definition for any evaluator (the swapped
 * configuration is materialized; the exponential density ratio uses the
 * pair-cancelled form, see file header). For KawasakiS this is c_s itself. */
double symmetrizeEvaluator(const RateEvaluator& c, int xIdx, const Point& y,
                           const Configuration& cfg, const PairPotential& pot,
                           const TorusBox& box);

double symmetrize(const RateSpec& spec, int xIdx, const Point& y, const Configuration& cfg,
                  const PairPotential& pot, const TorusBox& box);

/* Gibbs density log-ratio log[ mu(gamma\x u y) / mu(gamma) ] for a swap,
 * i.e. the exponent -E(y,gamma) + E(x,gamma\x u y) in pair-cancelled form
 * E(x,gamma\x) - E(y,gamma\x). Returns -inf when the target is blocked,
 * +inf when the source location itself is illegal. */
double swapLogRatio(int xIdx, const Point& y, const Configuration& cfg, const PairPotential& pot,
                    const TorusBox& box);

/* Per-particle envelope for thinning simulation of the s-family:
 *   lambdaBar(x) = z * ||a~||_1 * exp[s E(x,gamma\x)] * exp[(1-s)|phiMin| nCap]
 * with nCap the hard-core packing bound (or the user neighbor cap). Proposals
 * y = x + u with u from the kernel density; acceptance
 *   p(y) = exp[-(1-s)(E(y,gamma\x) + |phiMin| nCap)]  (0 if E(y,gamma\x)=inf),
 * which equals z c_s ||a~||_1 / (lambdaBar a~_delta(x-y)) and is <= 1 by the
 * packing bound. Throws std::invalid_argument when no finite cap exists. */
struct HopEnvelope {
    double lambdaBar = 0.0;
    double logCapFactor = 0.0; // (1-s) * |phiMin| * nCap
};

HopEnvelope hopMajorant(const RateSpec& spec, int xIdx, const Configuration& cfg,
                        const CellList* cells, const PairPotential& pot, const TorusBox& box);

// Thinning acceptance for a proposed target y (see HopEnvelope contract).
double hopAcceptance(const RateSpec& spec, int xIdx, const Point& y, const Configuration& cfg,
                     const CellList* cells, const PairPotential& pot, const TorusBox& box);

/* Birth-and-death coefficients: death rate d_s(x,gamma) = alpha e^{s E(x,gamma\x)}
 * per particle, birth intensity z * alpha * e^{(s-1) E(x,gamma)} dx. The birth
 * envelope is uniform: z * alpha * L^dim * e^{(1-s)|phiMin| nCap}. */
struct GlauberSpec {
    double s = 0.0;
    double activity = 1.0; // z
    double alpha = 1.0;    // overall time-scale factor

    static GlauberSpec make(double s, double z, double alpha = 1.0);
};

struct GlauberRateSet {
    std::vector<double> deathRates;
    double totalDeathRate = 0.0;
    double birthEnvelope = 0.0; // total dominating birth rate over the box
    double logCapFactor = 0.0;  // (1-s) * |phiMin| * nCap
};

GlauberRateSet glauberRates(const GlauberSpec& spec, const Configuration& cfg,
                            const CellList* cells, const PairPotential& pot, const TorusBox& box);

// Birth thinning acceptance at x: e^{(s-1)E(x,gamma)} / e^{logCapFactor}.
double glauberBirthAcceptance(const GlauberSpec& spec, const Point& x, const Configuration& cfg,
                              const CellList* cells, const PairPotential& pot,
                              const TorusBox& box);

// Death rate of the particle at index i (exact, no thinning needed).
double glauberDeathRate(const GlauberSpec& spec, int i, const Configuration& cfg,
                        const CellList* cells, const PairPotential& pot, const TorusBox& box);

// Birth rate b_s(x, gamma) = alpha e^{(s-1)E(x,gamma)} (no z).
double glauberBirthRate(const GlauberSpec& spec, const Point& x, const Configuration& cfg,
                        const CellList* cells, const PairPotential& pot, const TorusBox& box);

} // namespace pointdyn
