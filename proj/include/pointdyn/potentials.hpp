/* Pair potentials phi(r), relative energies E(x, gamma), move energy deltas,
 * and the stability / integrability constants used for activity thresholds.
 *
 * Conventions:
 *   - phi(r) = +infinity for r < hardCore encodes hard-core exclusion.
 *   - phi(r) = 0 for r >= range (finite range, exact).
 *   - Inverse temperature is absorbed into phi; there is no separate beta.
 *   - E(x, gamma) sums phi over every point of gamma at a location distinct
 *     from x, so passing a configuration that contains x itself automatically
 *     yields E(x, gamma minus x).
 */
#pragma once

#include <limits>

#include "pointdyn/geometry.hpp"

namespace pointdyn {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class PotentialShape {
    None,          // free gas, phi == 0
    SquareWell,    // +inf inside hardCore, -depth on [hardCore, range), 0 beyond
    SmoothBump,    // amplitude * exp(1 - 1/(1-(r/range)^2)) inside range; C^inf
    SoftRepulsive, // amplitude * (1-(r/range)^2)^3 inside range; C^2; amplitude >= 0
};

struct PairPotential {
    PotentialShape shape = PotentialShape::None;
    double hardCore = 0.0;  // r_hc
    double range = 0.0;     // R
    double depth = 0.0;     // w, SquareWell only
    double amplitude = 0.0; // A, smooth shapes (signed for SmoothBump)
    int neighborCap = 0;    // optional user bound on in-range neighbors (0 = none)

    static PairPotential none();
    static PairPotential squareWell(double w, double rhc, double R);
    static PairPotential smoothBump(double A, double R, double rhc = 0.0);
    static PairPotential softRepulsive(double A, double R);

    double phiMin() const; // inf over r >= hardCore of phi(r); <= 0 by convention
    bool isSmooth() const; // C^2 everywhere (no hard core, no jumps)

    double phi(double r) const;
    double phiPrime(double r) const;  // d phi / dr; throws NotSmooth for SquareWell
    double phiSecond(double r) const; // d^2 phi / dr^2

    // Gradient of phi(|u|) with respect to u (zero vector at u = 0).
    Point phiGradient(const Point& u) const;

    /* Upper bound on the number of configuration points within distance
     * `range` of any location, for hard-core-legal configurations: the packing
     * bound (1 + 2R/r_hc)^dim, or the user-supplied neighborCap if given.
     * +infinity when neither applies. */
    double packingCap(int dim) const;
};

struct PotentialConstants {
    double B = 0.0;           // stability constant (upper bound)
    double C = 0.0;           // integral of |e^{-phi} - 1| over R^dim
    double zThreshold1 = 0.0; // (1/(2e)) / (e^{2B} C)
    double zThreshold2 = 0.0; // (1/e)   / (e^{2B} C)
};

// Radial integral over R^dim of |e^{t*phi(|u|)} - 1| du. Analytic for the
// square well, composite-midpoint quadrature (with refinement check) for the
// smooth shapes. Returns +infinity when the integrand is infinite on a set of
// positive measure (t > 0 with a hard core). Used for C (t = -1) and for the
// large-s generator-domain condition (t = 2s-1).
double expPhiL1(const PairPotential& pot, double t, int dim, int quadResolution = 4096);

PotentialConstants computeConstants(const PairPotential& pot, int dim, int quadResolution = 4096);

// E(x, gamma): sum of phi over points of gamma at locations distinct from x.
// O(N) scan; the cell-list overload requires cells.cutoff() >= pot.range.
double relativeEnergy(const Point& x, const Configuration& cfg, const PairPotential& pot,
                      const TorusBox& box);
double relativeEnergy(const Point& x, const Configuration& cfg, const CellList& cells,
                      const PairPotential& pot, const TorusBox& box);

// E(x, gamma minus particle skipIdx); use for E(x_i, gamma\x_i) by index.
double relativeEnergyExcluding(int skipIdx, const Point& x, const Configuration& cfg,
                               const PairPotential& pot, const TorusBox& box);
double relativeEnergyExcluding(int skipIdx, const Point& x, const Configuration& cfg,
                               const CellList& cells, const PairPotential& pot,
                               const TorusBox& box);

// E(y, gamma\x) - E(x, gamma\x) for moving particle xIdx to y. +inf when the
// target is hard-core blocked.
double energyDeltaSwap(int xIdx, const Point& y, const Configuration& cfg,
                       const PairPotential& pot, const TorusBox& box);
double energyDeltaSwap(int xIdx, const Point& y, const Configuration& cfg, const CellList& cells,
                       const PairPotential& pot, const TorusBox& box);

// Total energy U(gamma) = sum over unordered pairs. O(N^2); for tests/oracles.
double totalEnergy(const Configuration& cfg, const PairPotential& pot, const TorusBox& box);

// Gradient of E(x, gamma\skipIdx) with respect to x (smooth shapes only).
Point energyGradientExcluding(int skipIdx, const Point& x, const Configuration& cfg,
                              const PairPotential& pot, const TorusBox& box);

} // namespace pointdyn
