#include "pointdyn/potentials.hpp"

#include <cmath>
#include <stdexcept>

namespace pointdyn {

namespace {

// Surface area of the unit sphere S^{d-1}: 2, 2*pi, 4*pi for d = 1, 2, 3.
double sphereSurface(int dim) {
    switch (dim) {
        case 1: return 2.0;
        case 2: return 2.0 * M_PI;
        case 3: return 4.0 * M_PI;
        default: throw std::invalid_argument("sphereSurface: dim must be 1, 2 or 3");
    }
}

} // namespace

PairPotential PairPotential::none() { return PairPotential{}; }

PairPotential PairPotential::squareWell(double w, double rhc, double R) {
    if (!(rhc > 0.0) || !(R > rhc)) throw std::invalid_argument("squareWell: need 0 < r_hc < R");
    PairPotential p;
    p.shape = PotentialShape::SquareWell;
    p.hardCore = rhc;
    p.range = R;
    p.depth = w;
    return p;
}

PairPotential PairPotential::smoothBump(double A, double R, double rhc) {
    if (!(R > 0.0) || rhc < 0.0 || rhc >= R)
        throw std::invalid_argument("smoothBump: need 0 <= r_hc < R");
    PairPotential p;
    p.shape = PotentialShape::SmoothBump;
    p.hardCore = rhc;
    p.range = R;
    p.amplitude = A;
    return p;
}

PairPotential PairPotential::softRepulsive(double A, double R) {
    if (!(R > 0.0) || A < 0.0) throw std::invalid_argument("softRepulsive: need A >= 0, R > 0");
    PairPotential p;
    p.shape = PotentialShape::SoftRepulsive;
    p.range = R;
    p.amplitude = A;
    return p;
}

double PairPotential::phiMin() const {
    switch (shape) {
        case PotentialShape::None: return 0.0;
        case PotentialShape::SquareWell: return -depth;
        case PotentialShape::SmoothBump: return std::min(0.0, amplitude);
        case PotentialShape::SoftRepulsive: return 0.0;
    }
    return 0.0;
}

bool PairPotential::isSmooth() const {
    switch (shape) {
        case PotentialShape::None: return true;
        case PotentialShape::SquareWell: return false;
        case PotentialShape::SmoothBump:
        case PotentialShape::SoftRepulsive: return hardCore == 0.0;
    }
    return false;
}

double PairPotential::phi(double r) const {
    if (r < hardCore) return kInf;
    switch (shape) {
        case PotentialShape::None: return 0.0;
        case PotentialShape::SquareWell: return (r < range) ? -depth : 0.0;
        case PotentialShape::SmoothBump: {
            if (r >= range) return 0.0;
            const double q = (r / range) * (r / range);
            return amplitude * std::exp(1.0 - 1.0 / (1.0 - q));
        }
        case PotentialShape::SoftRepulsive: {
            if (r >= range) return 0.0;
            const double q = (r / range) * (r / range);
            const double s = 1.0 - q;
            return amplitude * s * s * s;
        }
    }
    return 0.0;
}

double PairPotential::phiPrime(double r) const {
    switch (shape) {
        case PotentialShape::None: return 0.0;
        case PotentialShape::SquareWell: throw NotSmooth("square well has no derivative");
        case PotentialShape::SmoothBump: {
            if (r >= range || r < hardCore) return 0.0;
            const double q = (r / range) * (r / range);
            const double s = 1.0 - q;
            const double val = amplitude * std::exp(1.0 - 1.0 / s);
            const double dvdq = -val / (s * s);
            return dvdq * 2.0 * r / (range * range);
        }
        case PotentialShape::SoftRepulsive: {
            if (r >= range || r < hardCore) return 0.0;
            const double q = (r / range) * (r / range);
            const double s = 1.0 - q;
            return -6.0 * amplitude * r / (range * range) * s * s;
        }
    }
    return 0.0;
}

double PairPotential::phiSecond(double r) const {
    switch (shape) {
        case PotentialShape::None: return 0.0;
        case PotentialShape::SquareWell: throw NotSmooth("square well has no derivative");
        case PotentialShape::SmoothBump: {
            if (r >= range || r < hardCore) return 0.0;
            const double R2 = range * range;
            const double q = r * r / R2;
            const double s = 1.0 - q;
            const double val = amplitude * std::exp(1.0 - 1.0 / s);
            const double dvdq = -val / (s * s);
            // d2v/dq2 = v * (h'^2 + h'') with h' = -1/s^2, h'' = -2/s^3.
            const double d2vdq2 = val * (1.0 / (s * s * s * s) - 2.0 / (s * s * s));
            const double dqdr = 2.0 * r / R2;
            return d2vdq2 * dqdr * dqdr + dvdq * 2.0 / R2;
        }
        case PotentialShape::SoftRepulsive: {
            if (r >= range || r < hardCore) return 0.0;
            const double q = (r / range) * (r / range);
            const double s = 1.0 - q;
            return -6.0 * amplitude / (range * range) * s * (1.0 - 5.0 * q);
        }
    }
    return 0.0;
}

Point PairPotential::phiGradient(const Point& u) const {
    double r2 = 0.0;
    for (double c : u) r2 += c * c;
    const double r = std::sqrt(r2);
    Point g{0.0, 0.0, 0.0};
    if (r == 0.0) return g;
    const double dp = phiPrime(r);
    for (std::size_t a = 0; a < 3; ++a) g[a] = dp * u[a] / r;
    return g;
}

double PairPotential::packingCap(int dim) const {
    if (neighborCap > 0) return static_cast<double>(neighborCap);
    if (phiMin() == 0.0) return 0.0; // never needed: the majorant factor is e^0
    if (hardCore > 0.0) return std::pow(1.0 + 2.0 * range / hardCore, dim);
    return kInf;
}

double expPhiL1(const PairPotential& pot, double t, int dim, int quadResolution) {
    const double S = sphereSurface(dim);
    if (pot.shape == PotentialShape::None) return 0.0;
    if (t == 0.0) return 0.0;

    const double rhc = pot.hardCore;
    const double R = pot.range;
    // Core: |e^{t * inf} - 1| is 1 for t < 0 and +inf for t > 0.
    double core = 0.0;
    if (rhc > 0.0) {
        if (t > 0.0) return kInf;
        core = S * std::pow(rhc, dim) / dim;
    }

    if (pot.shape == PotentialShape::SquareWell) {
        const double plateau = std::fabs(std::exp(t * (-pot.depth)) - 1.0);
        return core + S * plateau * (std::pow(R, dim) - std::pow(rhc, dim)) / dim;
    }

    // Smooth shapes: composite midpoint on [rhc, R], with a half-resolution
    // refinement check as a cheap failure guard.
    auto quad = [&](int n) {
        const double h = (R - rhc) / n;
        double sum = 0.0;
        for (int k = 0; k < n; ++k) {
            const double r = rhc + (k + 0.5) * h;
            const double f = std::fabs(std::exp(t * pot.phi(r)) - 1.0);
            if (!std::isfinite(f)) throw QuadratureFailure("expPhiL1: non-finite integrand");
            sum += f * std::pow(r, dim - 1);
        }
        return S * sum * h;
    };
    const double fine = quad(quadResolution);
    const double coarse = quad(quadResolution / 2);
    if (!std::isfinite(fine) || std::fabs(fine - coarse) > 1e-3 * (1.0 + std::fabs(fine)))
        throw QuadratureFailure("expPhiL1: quadrature did not settle");
    return core + fine;
}

PotentialConstants computeConstants(const PairPotential& pot, int dim, int quadResolution) {
    PotentialConstants out;
    out.C = expPhiL1(pot, -1.0, dim, quadResolution);

    if (pot.phiMin() == 0.0) {
        out.B = 0.0; // nonnegative potential: U >= 0 >= -B N for B = 0
    } else {
        const double cap = pot.packingCap(dim);
        out.B = std::isfinite(cap) ? 0.5 * (-pot.phiMin()) * cap : kInf;
    }

    if (out.C == 0.0) {
        out.zThreshold1 = kInf;
        out.zThreshold2 = kInf;
    } else if (!std::isfinite(out.B)) {
        out.zThreshold1 = 0.0;
        out.zThreshold2 = 0.0;
    } else {
        const double denom = std::exp(2.0 * out.B) * out.C;
        out.zThreshold1 = 1.0 / (2.0 * M_E * denom);
        out.zThreshold2 = 1.0 / (M_E * denom);
    }
    return out;
}

namespace {

// Shared accumulation for the relative-energy variants. Returns +inf as soon
// as a hard-core overlap shows up.
struct EnergyAcc {
    double sum = 0.0;
    bool blocked = false;

    void add(double phi) {
        if (phi == kInf)
            blocked = true;
        else
            sum += phi;
    }

    double value() const { return blocked ? kInf : sum; }
};

} // namespace

double relativeEnergyExcluding(int skipIdx, const Point& x, const Configuration& cfg,
                               const PairPotential& pot, const TorusBox& box) {
    if (pot.shape == PotentialShape::None) return 0.0;
    EnergyAcc acc;
    for (std::size_t j = 0; j < cfg.pts.size(); ++j) {
        if (static_cast<int>(j) == skipIdx) continue;
        const double r = box.dist(x, cfg.pts[j]);
        if (r == 0.0) continue; // same location as x: not an interaction partner
        if (r >= pot.range) continue;
        acc.add(pot.phi(r));
        if (acc.blocked) return kInf;
    }
    return acc.value();
}

double relativeEnergy(const Point& x, const Configuration& cfg, const PairPotential& pot,
                      const TorusBox& box) {
    return relativeEnergyExcluding(-1, x, cfg, pot, box);
}

double relativeEnergyExcluding(int skipIdx, const Point& x, const Configuration& cfg,
                               const CellList& cells, const PairPotential& pot,
                               const TorusBox& box) {
    (void)box;
    if (pot.shape == PotentialShape::None) return 0.0;
    EnergyAcc acc;
    cells.forNeighbors(x, pot.range, cfg, [&](int j, double r) {
        if (j == skipIdx || r == 0.0 || acc.blocked) return;
        acc.add(pot.phi(r));
    });
    return acc.value();
}

double relativeEnergy(const Point& x, const Configuration& cfg, const CellList& cells,
                      const PairPotential& pot, const TorusBox& box) {
    return relativeEnergyExcluding(-1, x, cfg, cells, pot, box);
}

double energyDeltaSwap(int xIdx, const Point& y, const Configuration& cfg,
                       const PairPotential& pot, const TorusBox& box) {
    const double ey = relativeEnergyExcluding(xIdx, y, cfg, pot, box);
    if (ey == kInf) return kInf;
    const double ex = relativeEnergyExcluding(xIdx, cfg.pts[static_cast<std::size_t>(xIdx)], cfg, pot, box);
    return ey - ex;
}

double energyDeltaSwap(int xIdx, const Point& y, const Configuration& cfg, const CellList& cells,
                       const PairPotential& pot, const TorusBox& box) {
    const double ey = relativeEnergyExcluding(xIdx, y, cfg, cells, pot, box);
    if (ey == kInf) return kInf;
    const double ex =
        relativeEnergyExcluding(xIdx, cfg.pts[static_cast<std::size_t>(xIdx)], cfg, cells, pot, box);
    return ey - ex;
}

double totalEnergy(const Configuration& cfg, const PairPotential& pot, const TorusBox& box) {
    if (pot.shape == PotentialShape::None) return 0.0;
    EnergyAcc acc;
    for (std::size_t i = 0; i + 1 < cfg.pts.size(); ++i) {
        for (std::size_t j = i + 1; j < cfg.pts.size(); ++j) {
            const double r = box.dist(cfg.pts[i], cfg.pts[j]);
            if (r >= pot.range) continue;
            acc.add(pot.phi(r));
            if (acc.blocked) return kInf;
        }
    }
    return acc.value();
}

Point energyGradientExcluding(int skipIdx, const Point& x, const Configuration& cfg,
                              const PairPotential& pot, const TorusBox& box) {
    Point g{0.0, 0.0, 0.0};
    if (pot.shape == PotentialShape::None) return g;
    if (!pot.isSmooth()) throw NotSmooth("energy gradient requires a smooth potential");
    for (std::size_t j = 0; j < cfg.pts.size(); ++j) {
        if (static_cast<int>(j) == skipIdx) continue;
        const Point u = box.delta(x, cfg.pts[j]); // x - x_j, minimum image
        double r2 = 0.0;
        for (int a = 0; a < box.dim; ++a) r2 += u[static_cast<std::size_t>(a)] * u[static_cast<std::size_t>(a)];
        if (r2 == 0.0 || r2 >= pot.range * pot.range) continue;
        const Point dg = pot.phiGradient(u);
        for (int a = 0; a < box.dim; ++a) g[static_cast<std::size_t>(a)] += dg[static_cast<std::size_t>(a)];
    }
    return g;
}

} // namespace pointdyn
