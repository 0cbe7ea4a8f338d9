/* Grand-canonical Metropolis-Hastings sampler for the finite-volume Gibbs
 * measure with unnormalized density z^N e^{-U(gamma)} on the torus, plus
 * correlation-function estimators and the density-bound report.
 *
 * Move mix: birth (uniform location), death (uniform particle), displacement
 * (uniform particle, uniform proposal in a ball). The stated acceptance rules
 * give exact detailed balance only for equal birth and death weights, so the
 * parameter check enforces pBirth == pDeath.
 */
#pragma once

#include <cstdint>
#include <vector>

#include "pointdyn/potentials.hpp"
#include "pointdyn/rng.hpp"
#include "pointdyn/stats.hpp"

namespace pointdyn {

struct GibbsParams {
    double activity = 1.0; // z
    PairPotential pot;
    TorusBox box{1, 1.0};
    double pBirth = 0.25, pDeath = 0.25, pMove = 0.5;
    double moveRadius = 0.0; // 0: default to the interaction range (or 1 for free gas)
    long sweeps = 1000;      // post-burn-in sweeps
    long burnIn = 100;       // discarded sweeps
    long thinning = 1;       // record every thinning-th sweep
    std::uint64_t seed = 1;

    void validate() const; // throws std::invalid_argument on violations
    long movesPerSweep() const;
    double displacementRadius() const;
};

class GibbsSampler {
  public:
    explicit GibbsSampler(const GibbsParams& params);

    // One Metropolis-Hastings update (birth, death or displacement).
    void step();
    // movesPerSweep() updates.
    void sweep();

    const Configuration& config() const { return cfg_; }
    const GibbsParams& params() const { return params_; }
    long sweepIndex() const { return sweepIndex_; }

    // Acceptance probabilities of the three move types from the current
    // state; exposed so detailed balance can be checked externally.
    double birthAcceptProb(const Point& x) const;
    double deathAcceptProb(int i) const;
    double moveAcceptProb(int i, const Point& y) const;

    std::uint64_t proposed() const { return proposed_; }
    std::uint64_t accepted() const { return accepted_; }

  private:
    GibbsParams params_;
    Configuration cfg_;
    CellList cells_;
    Rng rng_;
    long sweepIndex_ = 0;
    std::uint64_t proposed_ = 0, accepted_ = 0;
};

/* Runs the chain from the empty configuration, discards burnIn sweeps and
 * returns sweeps/thinning snapshots. Every snapshot is checked to have finite
 * energy (hard-core states must be unreachable). */
std::vector<Snapshot> sampleEquilibrium(const GibbsParams& params);

struct CorrelationEstimate {
    int order = 1;
    EstimateWithError k1;          // order 1: estimate of k^(1) = E[N]/L^d
    std::vector<double> binEdges;  // order 2: radial bins on [0, L/2]
    std::vector<double> binCenters;
    std::vector<double> k2;        // estimate of k^(2)(r) per bin
    std::vector<double> k2Se;      // batch-means standard error per bin
    double ess = 0.0;              // effective sample size (min across bins for order 2)
    long nSnapshots = 0;
};

// k^(1) from particle counts; k^(2)(r) from ordered-pair distance histograms
// normalized by box volume times shell volume. Throws InsufficientSamples
// below 100 snapshots.
CorrelationEstimate estimateCorrelations(const std::vector<Snapshot>& snaps, int order, int bins,
                                         const TorusBox& box);

struct RuelleReport {
    double xi = 0.0;
    std::vector<int> flaggedBins; // bins with k2 - 3 se > xi^2
    bool anyFlag = false;
};

// Flags histogram bins whose estimate exceeds xi^2 beyond 3 standard errors.
// xi is a reporting input, never a gate.
RuelleReport ruelleReport(const CorrelationEstimate& est, double xi);

} // namespace pointdyn
