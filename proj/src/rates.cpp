#include "pointdyn/rates.hpp"

#include <cmath>
#include <stdexcept>

#include "pointdyn/errors.hpp"

namespace pointdyn {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Surface area of the unit sphere S^{d-1} in R^d (d = 1: two points).
double unitSphereArea(int dim) {
    switch (dim) {
    case 1: return 2.0;
    case 2: return 2.0 * kPi;
    case 3: return 4.0 * kPi;
    default: throw std::invalid_argument("unitSphereArea: dim must be 1, 2 or 3");
    }
}

// Volume of the d-ball of radius r.
double ballVolume(int dim, double r) {
    switch (dim) {
    case 1: return 2.0 * r;
    case 2: return kPi * r * r;
    case 3: return 4.0 / 3.0 * kPi * r * r * r;
    default: throw std::invalid_argument("ballVolume: dim must be 1, 2 or 3");
    }
}

} // namespace

double HopKernel::unscaledValue(double r) const {
    if (r < 0.0 || r >= radius)
        return 0.0;
    if (shape == KernelShape::Ball)
        return amplitude;
    return amplitude * (1.0 - r / radius);
}

double HopKernel::value(double r) const {
    return std::pow(delta, dim) * unscaledValue(delta * r);
}

double HopKernel::l1Norm() const {
    // Mass is invariant under the delta-scaling, so integrate the unscaled shape.
    if (shape == KernelShape::Ball)
        return amplitude * ballVolume(dim, radius);
    // Triangular bump: S_{d-1} int_0^R (1 - r/R) r^{d-1} dr = S_{d-1} R^d / (d(d+1)).
    return amplitude * unitSphereArea(dim) * std::pow(radius, dim) / (dim * (dim + 1.0));
}

double HopKernel::secondMoment() const {
    // int a~(u) (u_1)^2 du = (S_{d-1}/d) int_0^R shape(r) r^{d+1} dr by symmetry.
    const double s = unitSphereArea(dim);
    const double rp = std::pow(radius, dim + 2);
    if (shape == KernelShape::Ball)
        return amplitude * s * rp / (dim * (dim + 2.0));
    return amplitude * s * rp / (dim * (dim + 2.0) * (dim + 3.0));
}

double HopKernel::secondMomentScaled() const { return secondMoment() / (delta * delta); }

Point HopKernel::samplePoint(Rng& rng) const {
    const double rSup = supportRadius();
    double r = 0.0;
    for (;;) {
        r = rSup * std::pow(rng.uniform01(), 1.0 / dim); // density ~ r^{d-1}
        if (shape == KernelShape::Ball)
            break;
        if (rng.uniform01() < 1.0 - r / rSup) // extra (1 - r/R) factor
            break;
    }
    Point u{0.0, 0.0, 0.0};
    if (dim == 1) {
        u[0] = (rng.uniform01() < 0.5) ? r : -r;
    } else if (dim == 2) {
        const double th = 2.0 * kPi * rng.uniform01();
        u[0] = r * std::cos(th);
        u[1] = r * std::sin(th);
    } else {
        const double zc = r * (2.0 * rng.uniform01() - 1.0);
        const double rho = std::sqrt(std::max(0.0, r * r - zc * zc));
        const double th = 2.0 * kPi * rng.uniform01();
        u[0] = rho * std::cos(th);
        u[1] = rho * std::sin(th);
        u[2] = zc;
    }
    return u;
}

double HopKernel::massByQuadrature(int n) const {
    const double rSup = supportRadius();
    const double h = rSup / n;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = (i + 0.5) * h;
        acc += value(r) * std::pow(r, dim - 1);
    }
    return unitSphereArea(dim) * acc * h;
}

RateSpec RateSpec::kawasakiS(double s, HopKernel k, double z) {
    if (s < 0.0 || s > 1.0)
        throw std::invalid_argument("RateSpec: s must lie in [0,1]");
    if (z <= 0.0)
        throw std::invalid_argument("RateSpec: activity must be positive");
    RateSpec spec;
    spec.family = Family::KawasakiS;
    spec.s = s;
    spec.kernel = k;
    spec.activity = z;
    return spec;
}

RateSpec RateSpec::kawasakiUV(double u, double v, HopKernel k, double z) {
    if (u < 0.0 || u > 1.0 || v < 0.0 || v > 1.0)
        throw std::invalid_argument("RateSpec: u, v must lie in [0,1]");
    if (z <= 0.0)
        throw std::invalid_argument("RateSpec: activity must be positive");
    RateSpec spec;
    spec.family = Family::KawasakiUV;
    spec.u = u;
    spec.v = v;
    spec.kernel = k;
    spec.activity = z;
    return spec;
}

RateSpec RateSpec::customRate(RateEvaluator c, HopKernel k, double z) {
    if (!c)
        throw std::invalid_argument("RateSpec: custom evaluator must be callable");
    if (z <= 0.0)
        throw std::invalid_argument("RateSpec: activity must be positive");
    RateSpec spec;
    spec.family = Family::Custom;
    spec.custom = std::move(c);
    spec.kernel = k;
    spec.activity = z;
    return spec;
}

double kawasakiRate(const RateSpec& spec, int xIdx, const Point& y, const Configuration& cfg,
                    const PairPotential& pot, const TorusBox& box) {
    const Point& x = cfg.pts[xIdx];
    if (spec.family == RateSpec::Family::Custom)
        return spec.custom(x, xIdx, y, cfg, pot, box);

    const double a = spec.kernel.value(box.dist(x, y));
    if (a <= 0.0)
        return 0.0;
    if (spec.family == RateSpec::Family::KawasakiS) {
        // Both energies matter at every s: a blocked target (or illegal
        // source) zeroes the rate regardless of its exponent coefficient,
        // which is exactly what keeps the symmetrization a fixed point.
        const double ex = relativeEnergyExcluding(xIdx, x, cfg, pot, box);
        if (!std::isfinite(ex))
            return 0.0;
        const double ey = relativeEnergyExcluding(xIdx, y, cfg, pot, box);
        if (!std::isfinite(ey))
            return 0.0;
        return a * std::exp(spec.s * ex - (1.0 - spec.s) * ey);
    }
    // Two-parameter family: the target energy sees the full configuration,
    // x included. A zero exponent coefficient means that energy is never
    // consulted, so c_{0,1} reduces to the kernel identically.
    double arg = 0.0;
    if (spec.u > 0.0) {
        const double ex = relativeEnergyExcluding(xIdx, x, cfg, pot, box);
        if (!std::isfinite(ex))
            return 0.0;
        arg += spec.u * ex;
    }
    if (spec.v < 1.0) {
        const double eyFull = relativeEnergy(y, cfg, pot, box);
        if (!std::isfinite(eyFull))
            return 0.0;
        arg -= (1.0 - spec.v) * eyFull;
    }
    return a * std::exp(arg);
}

RateEvaluator evaluatorFor(const RateSpec& spec) {
    if (spec.family == RateSpec::Family::Custom)
        return spec.custom;
    return [spec](const Point&, int xIdx, const Point& y, const Configuration& cfg,
                  const PairPotential& pot, const TorusBox& box) {
        return kawasakiRate(spec, xIdx, y, cfg, pot, box);
    };
}

double swapLogRatio(int xIdx, const Point& y, const Configuration& cfg, const PairPotential& pot,
                    const TorusBox& box) {
    // -E(y,gamma) + E(x,gamma\x u y): the phi(x,y) contributions of the two
    // arguments cancel identically, leaving E(x,gamma\x) - E(y,gamma\x).
    const double ey = relativeEnergyExcluding(xIdx, y, cfg, pot, box);
    if (!std::isfinite(ey))
        return -kInf;
    const double ex = relativeEnergyExcluding(xIdx, cfg.pts[xIdx], cfg, pot, box);
    if (!std::isfinite(ex))
        return kInf;
    return ex - ey;
}

double symmetrizeEvaluator(const RateEvaluator& c, int xIdx, const Point& y,
                           const Configuration& cfg, const PairPotential& pot,
                           const TorusBox& box) {
    const Point x = cfg.pts[xIdx];
    const double forward = c(x, xIdx, y, cfg, pot, box);

    const double logRatio = swapLogRatio(xIdx, y, cfg, pot, box);
    double reverse = 0.0;
    if (std::isfinite(logRatio)) {
        Configuration swapped = cfg;
        swapped.pts[xIdx] = box.wrap(y);
        const double cRev = c(swapped.pts[xIdx], xIdx, x, swapped, pot, box);
        if (cRev > 0.0)
            reverse = cRev * std::exp(logRatio);
    }
    // logRatio = -inf: target blocked, the reverse state has zero Gibbs
    // weight; +inf: the source state itself is illegal. Either way the
    // detailed-balance term is 0.
    return 0.5 * (forward + reverse);
}

double symmetrize(const RateSpec& spec, int xIdx, const Point& y, const Configuration& cfg,
                  const PairPotential& pot, const TorusBox& box) {
    return symmetrizeEvaluator(evaluatorFor(spec), xIdx, y, cfg, pot, box);
}

HopEnvelope hopMajorant(const RateSpec& spec, int xIdx, const Configuration& cfg,
                        const CellList* cells, const PairPotential& pot, const TorusBox& box) {
    if (spec.family != RateSpec::Family::KawasakiS)
        throw std::invalid_argument("hopMajorant: envelope construction requires the s-family");
    const double s = spec.s;
    double logCap = 0.0;
    if (pot.phiMin() < 0.0 && s < 1.0) {
        const double nCap = pot.packingCap(box.dim);
        if (!std::isfinite(nCap))
            throw std::invalid_argument(
                "hopMajorant: attractive potential without hard core needs a neighbor cap");
        logCap = (1.0 - s) * (-pot.phiMin()) * nCap;
    }
    const Point& x = cfg.pts[xIdx];
    const double ex = cells ? relativeEnergyExcluding(xIdx, x, cfg, *cells, pot, box)
                            : relativeEnergyExcluding(xIdx, x, cfg, pot, box);
    HopEnvelope env;
    env.logCapFactor = logCap;
    if (!std::isfinite(ex)) {
        env.lambdaBar = 0.0; // illegal source: rate 0 by the exponent convention
        return env;
    }
    env.lambdaBar = spec.activity * spec.kernel.l1Norm() * std::exp(s * ex + logCap);
    return env;
}

double hopAcceptance(const RateSpec& spec, int xIdx, const Point& y, const Configuration& cfg,
                     const CellList* cells, const PairPotential& pot, const TorusBox& box) {
    if (spec.family != RateSpec::Family::KawasakiS)
        throw std::invalid_argument("hopAcceptance: envelope construction requires the s-family");
    const double ey = cells ? relativeEnergyExcluding(xIdx, y, cfg, *cells, pot, box)
                            : relativeEnergyExcluding(xIdx, y, cfg, pot, box);
    if (!std::isfinite(ey))
        return 0.0;
    double logCap = 0.0;
    if (pot.phiMin() < 0.0 && spec.s < 1.0)
        logCap = (1.0 - spec.s) * (-pot.phiMin()) * pot.packingCap(box.dim);
    const double p = std::exp(-(1.0 - spec.s) * ey - logCap);
    if (p > 1.0 + 1e-12)
        throw MajorantViolation("hop thinning acceptance exceeds 1: supplied neighbor cap too small");
    return p;
}

GlauberSpec GlauberSpec::make(double s, double z, double alpha) {
    if (s < 0.0 || s > 1.0)
        throw std::invalid_argument("GlauberSpec: s must lie in [0,1]");
    if (z <= 0.0)
        throw std::invalid_argument("GlauberSpec: activity must be positive");
    if (alpha < 0.0)
        throw std::invalid_argument("GlauberSpec: alpha must be nonnegative");
    return GlauberSpec{s, z, alpha};
}

double glauberDeathRate(const GlauberSpec& spec, int i, const Configuration& cfg,
                        const CellList* cells, const PairPotential& pot, const TorusBox& box) {
    const double e = cells ? relativeEnergyExcluding(i, cfg.pts[i], cfg, *cells, pot, box)
                           : relativeEnergyExcluding(i, cfg.pts[i], cfg, pot, box);
    if (!std::isfinite(e))
        return 0.0;
    return spec.alpha * std::exp(spec.s * e);
}

double glauberBirthRate(const GlauberSpec& spec, const Point& x, const Configuration& cfg,
                        const CellList* cells, const PairPotential& pot, const TorusBox& box) {
    const double e = cells ? relativeEnergy(x, cfg, *cells, pot, box)
                           : relativeEnergy(x, cfg, pot, box);
    if (!std::isfinite(e))
        return 0.0;
    return spec.alpha * std::exp((spec.s - 1.0) * e);
}

GlauberRateSet glauberRates(const GlauberSpec& spec, const Configuration& cfg,
                            const CellList* cells, const PairPotential& pot, const TorusBox& box) {
    GlauberRateSet rs;
    rs.deathRates.resize(cfg.pts.size());
    for (std::size_t i = 0; i < cfg.pts.size(); ++i) {
        rs.deathRates[i] = glauberDeathRate(spec, static_cast<int>(i), cfg, cells, pot, box);
        rs.totalDeathRate += rs.deathRates[i];
    }
    if (pot.phiMin() < 0.0 && spec.s < 1.0) {
        const double nCap = pot.packingCap(box.dim);
        if (!std::isfinite(nCap))
            throw std::invalid_argument(
                "glauberRates: attractive potential without hard core needs a neighbor cap");
        rs.logCapFactor = (1.0 - spec.s) * (-pot.phiMin()) * nCap;
    }
    rs.birthEnvelope = spec.activity * spec.alpha * box.volume() * std::exp(rs.logCapFactor);
    return rs;
}

double glauberBirthAcceptance(const GlauberSpec& spec, const Point& x, const Configuration& cfg,
                              const CellList* cells, const PairPotential& pot,
                              const TorusBox& box) {
    const double e = cells ? relativeEnergy(x, cfg, *cells, pot, box)
                           : relativeEnergy(x, cfg, pot, box);
    if (!std::isfinite(e))
        return 0.0;
    double logCap = 0.0;
    if (pot.phiMin() < 0.0 && spec.s < 1.0)
        logCap = (1.0 - spec.s) * (-pot.phiMin()) * pot.packingCap(box.dim);
    const double p = std::exp((spec.s - 1.0) * e - logCap);
    if (p > 1.0 + 1e-12)
        throw MajorantViolation(
            "birth thinning acceptance exceeds 1: supplied neighbor cap too small");
    return p;
}

} // namespace pointdyn
