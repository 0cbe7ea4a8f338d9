#pragma once

// Verification battery: equilibrium identity checks (integration by parts,
// detailed balance), stationarity of the dynamics started from equilibrium
// samples, and the two scaling-limit experiments that compare the hop
// generator against its birth-death and diffusion limits.

#include <cstdint>
#include <string>
#include <vector>

#include "pointdyn/diffusion.hpp"
#include "pointdyn/functionals.hpp"
#include "pointdyn/geometry.hpp"
#include "pointdyn/potentials.hpp"
#include "pointdyn/rates.hpp"
#include "pointdyn/simulation.hpp"

namespace pointdyn {

// Outcome of a single verification check, sized for one line of a report.
struct VerificationReport {
    std::string name;
    bool pass = false;
    double statistic = 0.0; // the quantity compared against the threshold
    double threshold = 0.0;
    double se = 0.0;        // statistical error scale where applicable
    std::vector<long> sampleSizes;
    std::uint64_t seed = 0;
    double runtimeSeconds = 0.0;
    std::string note;
};

// One test function F(x, gamma) = g(x) * h(<psi, gamma>) for the insertion
// identity. withH = false means h == 1 (pure spatial profile).
struct GnzFunction {
    TestField g;
    TestField psi;
    bool withH = false;
    std::string label;
};

// Three standard test functions spread over the box, derived from the seed.
std::vector<GnzFunction> defaultGnzFamily(const TorusBox& box, std::uint64_t seed);

/* Insertion identity: E[ sum_{x in gamma} F(x,gamma) ] equals
 * z * E[ int e^{-E(x,gamma)} F(x, gamma + x) dx ]. The right side is
 * estimated per snapshot with mcPoints uniform insertion points, and the
 * paired per-snapshot differences are averaged with batch means. The
 * statistic is the worst |mean|/se over the family; threshold 3. */
VerificationReport gnzTest(const std::vector<Snapshot>& snaps, double z,
                           const PairPotential& pot, const TorusBox& box,
                           const std::vector<GnzFunction>& fns, int mcPoints,
                           std::uint64_t seed);

/* Detailed-balance identities evaluated exactly on random finite
 * configurations: the symmetrization fixed point for the s-family, the
 * two-sided swap identity for the (u,v)-family, and the birth-death
 * relation b = e^{-E} d. The statistic is the worst residual. */
VerificationReport detailedBalanceSuite(const PairPotential& pot, const TorusBox& box,
                                        int nCases, std::uint64_t seed);

enum class EngineKind { Kawasaki, Glauber, Diffusion };

// What to run and from where for a stationarity check.
struct InvarianceSetup {
    EngineKind kind = EngineKind::Kawasaki;
    RateSpec rate;           // used when kind == Kawasaki
    GlauberSpec glauber;     // used when kind == Glauber
    DiffusionParams diffusion; // used when kind == Diffusion (seed ignored)
    PairPotential pot;
    TorusBox box{1, 10.0};
    double horizon = 1.0;
    std::uint64_t seed = 0;
};

/* Starts one replica per snapshot, runs each to the horizon, and compares
 * observable values at the start and the end as paired differences across
 * replicas. Every observable must satisfy |mean diff| <= 3 se; for the
 * Euler-Maruyama chain the bound is widened by a dt-halving bias estimate.
 * The statistic is the worst |mean|/(se + bias). */
VerificationReport invarianceTest(const InvarianceSetup& setup,
                                  const std::vector<Snapshot>& starts,
                                  const std::vector<Observable>& obs);

// One point of a scaling-limit error curve.
struct LimitPoint {
    double delta = 0.0;
    double l2err = 0.0; // mean squared generator difference over snapshots
    double se = 0.0;    // batch-means error of that mean
    long nSnapshots = 0;
    int quadResolution = 0;
};

struct LimitCurve {
    std::vector<LimitPoint> points; // in the order of the supplied grid
    double alpha = 0.0;             // matched birth-death speed (hop-to-birth-death only)
    bool nonincreasing = false;     // successive points within one combined se
    bool finalQuarter = false;      // last error <= 1/4 of the first
    bool pass = false;
};

/* Hop-to-birth-death limit at s = 0: for each delta in the grid the squared
 * difference between the localized hop generator and the birth-death
 * generator with matched speed alpha = 2 k1 |a|_1 is averaged over the
 * snapshots, applied to F = exp(<psi, .>). */
LimitCurve glauberLimitExperiment(const std::vector<double>& deltaGrid,
                                  const PairPotential& pot, const TorusBox& box, double z,
                                  const HopKernel& kernel, const TestField& psi,
                                  const std::vector<Snapshot>& snaps, int quadGrid);

/* Hop-to-diffusion limit: delta^2 times the hop generator with kernel scale
 * delta against the diffusion operator with c = z * m2(kernel), averaged
 * over snapshots. The grid is ascending in delta. */
LimitCurve diffusionLimitExperiment(const std::vector<double>& deltaGrid, double s,
                                    const PairPotential& pot, const TorusBox& box, double z,
                                    const HopKernel& kernel, const CylinderFunctional& F,
                                    const std::vector<Snapshot>& snaps, int quadGrid);

} // namespace pointdyn
