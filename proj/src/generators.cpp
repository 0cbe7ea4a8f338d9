#include "pointdyn/generators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pointdyn/errors.hpp"

namespace pointdyn {

namespace {

// Midpoint tensor grid over [-half, half]^dim: invokes fn(u) for every node,
// weight w = (2 half / n)^dim.
template <typename Fn>
void forTensorNodes(int dim, double half, int n, Fn&& fn) {
    const double h = 2.0 * half / n;
    long totalNodes = 1;
    for (int a = 0; a < dim; ++a) totalNodes *= n;
    for (long flat = 0; flat < totalNodes; ++flat) {
        Point u{0.0, 0.0, 0.0};
        long rest = flat;
        for (int a = 0; a < dim; ++a) {
            const long j = rest % n;
            rest /= n;
            u[static_cast<std::size_t>(a)] = -half + (static_cast<double>(j) + 0.5) * h;
        }
        fn(u);
    }
}

/* Composite midpoint on [a,b] with interior breakpoints (piecewise-smooth
 * integrands: square-well shells and kernel kinks are jump/kink loci, and
 * plain midpoint would lose an O(h) error per jump). Nodes are distributed
 * over the pieces proportionally to length, at least one per piece. */
template <typename Fn>
double lineQuadrature(double a, double b, std::vector<double> breaks, int nTotal, Fn&& f) {
    breaks.push_back(a);
    breaks.push_back(b);
    std::sort(breaks.begin(), breaks.end());
    double total = 0.0;
    double lo = a;
    for (std::size_t k = 0; k < breaks.size(); ++k) {
        const double hi = std::min(std::max(breaks[k], a), b);
        if (hi - lo < 1e-12)
            continue;
        const int n = std::max(1, static_cast<int>(std::lround(nTotal * (hi - lo) / (b - a))));
        const double h = (hi - lo) / n;
        for (int j = 0; j < n; ++j) total += f(lo + (j + 0.5) * h) * h;
        lo = hi;
    }
    return total;
}

// Potential discontinuity/kink offsets relative to `center`, restricted to
// (-half, half), in unwrapped line coordinates (d = 1 only). Shell radii of
// every particle contribute; 0 is included for the kernel's own kink.
std::vector<double> potentialBreaks1d(const Configuration& cfg, double center, double half,
                                      const PairPotential& pot, const TorusBox& box) {
    std::vector<double> radii;
    if (pot.hardCore > 0.0)
        radii.push_back(pot.hardCore);
    if (pot.shape == PotentialShape::SquareWell)
        radii.push_back(pot.range);
    std::vector<double> breaks{0.0};
    for (const auto& p : cfg.pts) {
        for (int m = -1; m <= 1; ++m) {
            const double base = p[0] + m * box.side - center;
            for (double r : radii) {
                for (double sgn : {-1.0, 1.0}) {
                    const double u = base + sgn * r;
                    if (u > -half && u < half)
                        breaks.push_back(u);
                }
            }
        }
    }
    return breaks;
}

double dot(const Point& a, const Point& b, int dim) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) s += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i)];
    return s;
}

double kawasakiIntegral(const CylinderFunctional& F, const Configuration& cfg,
                        const RateSpec& spec, const PairPotential& pot, const TorusBox& box,
                        int n, bool symmetrized) {
    const double rSup = spec.kernel.supportRadius();
    const std::vector<double> sums0 = F.fieldSums(cfg, box);
    const double f0 = F.valueFromSums(sums0);

    // For the s-family the symmetrization is the identity, so the bare rate
    // is used directly; other families get the mechanical construction.
    const bool direct = !symmetrized || spec.family == RateSpec::Family::KawasakiS;

    double total = 0.0;
    std::vector<double> shifted(sums0.size());
    for (std::size_t i = 0; i < cfg.size(); ++i) {
        const Point& x = cfg.pts[i];
        const std::vector<double> psiX = F.fieldValuesAt(x, box);
        auto integrand = [&](const Point& u) -> double {
            double r2 = 0.0;
            for (int a = 0; a < box.dim; ++a) r2 += u[static_cast<std::size_t>(a)] * u[static_cast<std::size_t>(a)];
            if (r2 >= rSup * rSup)
                return 0.0; // outside the kernel support: rate 0
            Point y = x;
            for (int a = 0; a < box.dim; ++a) y[static_cast<std::size_t>(a)] += u[static_cast<std::size_t>(a)];
            y = box.wrap(y);
            const double c = direct
                                 ? kawasakiRate(spec, static_cast<int>(i), y, cfg, pot, box)
                                 : symmetrize(spec, static_cast<int>(i), y, cfg, pot, box);
            if (c == 0.0)
                return 0.0;
            const std::vector<double> psiY = F.fieldValuesAt(y, box);
            for (std::size_t k = 0; k < sums0.size(); ++k) shifted[k] = sums0[k] - psiX[k] + psiY[k];
            const double term = c * (F.valueFromSums(shifted) - f0);
            if (!std::isfinite(term))
                throw QuadratureFailure("hop generator integrand is not finite");
            return term;
        };
        if (box.dim == 1) {
            total += lineQuadrature(-rSup, rSup, potentialBreaks1d(cfg, x[0], rSup, pot, box), n,
                                    [&](double u) { return integrand(Point{u, 0.0, 0.0}); });
        } else {
            const double w = std::pow(2.0 * rSup / n, box.dim);
            forTensorNodes(box.dim, rSup, n, [&](const Point& u) { total += integrand(u) * w; });
        }
    }
    return -2.0 * spec.activity * total;
}

double glauberBirthIntegral(const CylinderFunctional& F, const Configuration& cfg,
                            const GlauberSpec& spec, const PairPotential& pot,
                            const TorusBox& box, int n) {
    const std::vector<double> sums0 = F.fieldSums(cfg, box);
    const double f0 = F.valueFromSums(sums0);
    std::vector<double> shifted(sums0.size());
    auto integrand = [&](const Point& x) -> double {
        const double b = glauberBirthRate(spec, x, cfg, nullptr, pot, box);
        if (b == 0.0)
            return 0.0;
        const std::vector<double> psiX = F.fieldValuesAt(x, box);
        for (std::size_t k = 0; k < sums0.size(); ++k) shifted[k] = sums0[k] + psiX[k];
        const double term = b * (F.valueFromSums(shifted) - f0);
        if (!std::isfinite(term))
            throw QuadratureFailure("birth generator integrand is not finite");
        return term;
    };
    double total = 0.0;
    if (box.dim == 1) {
        total = lineQuadrature(0.0, box.side,
                               potentialBreaks1d(cfg, 0.0, box.side, pot, box), n,
                               [&](double x) { return integrand(Point{x, 0.0, 0.0}); });
    } else {
        const double w = std::pow(box.side / n, box.dim);
        forTensorNodes(box.dim, box.side / 2.0, n, [&](const Point& u) {
            Point x{0.0, 0.0, 0.0};
            for (int a = 0; a < box.dim; ++a) x[static_cast<std::size_t>(a)] = u[static_cast<std::size_t>(a)] + box.side / 2.0;
            total += integrand(x) * w;
        });
    }
    return -spec.activity * total;
}

} // namespace

GeneratorEvaluation applyKawasaki(const CylinderFunctional& F, const Configuration& cfg,
                                  const RateSpec& spec, const PairPotential& pot,
                                  const TorusBox& box, int quadGrid, bool symmetrized) {
    if (quadGrid < 2 || quadGrid % 2 != 0)
        throw std::invalid_argument("applyKawasaki: quadGrid must be even and >= 2");
    if (spec.kernel.supportRadius() > box.side / 2.0 * (1.0 + 1e-12))
        throw std::invalid_argument("applyKawasaki: kernel support exceeds half the box");
    GeneratorEvaluation ev;
    ev.value = kawasakiIntegral(F, cfg, spec, pot, box, quadGrid, symmetrized);
    const double coarse = kawasakiIntegral(F, cfg, spec, pot, box, quadGrid / 2, symmetrized);
    ev.quadError = std::abs(ev.value - coarse);
    return ev;
}

GeneratorEvaluation applyGlauber(const CylinderFunctional& F, const Configuration& cfg,
                                 const GlauberSpec& spec, const PairPotential& pot,
                                 const TorusBox& box, int quadGrid) {
    if (quadGrid < 2 || quadGrid % 2 != 0)
        throw std::invalid_argument("applyGlauber: quadGrid must be even and >= 2");
    // Exact death part: sum_x d_s(x) [F(gamma\x) - F(gamma)].
    const std::vector<double> sums0 = F.fieldSums(cfg, box);
    const double f0 = F.valueFromSums(sums0);
    double deathPart = 0.0;
    std::vector<double> shifted(sums0.size());
    for (std::size_t i = 0; i < cfg.size(); ++i) {
        const double d = glauberDeathRate(spec, static_cast<int>(i), cfg, nullptr, pot, box);
        if (d == 0.0)
            continue;
        const std::vector<double> psiX = F.fieldValuesAt(cfg.pts[i], box);
        for (std::size_t k = 0; k < sums0.size(); ++k) shifted[k] = sums0[k] - psiX[k];
        deathPart += d * (F.valueFromSums(shifted) - f0);
    }
    GeneratorEvaluation ev;
    const double birthFine = glauberBirthIntegral(F, cfg, spec, pot, box, quadGrid);
    const double birthCoarse = glauberBirthIntegral(F, cfg, spec, pot, box, quadGrid / 2);
    ev.value = birthFine - deathPart;
    ev.quadError = std::abs(birthFine - birthCoarse);
    return ev;
}

double applyDiffusion(const CylinderFunctional& F, const Configuration& cfg,
                      const DiffusionOperatorParams& params, const PairPotential& pot,
                      const TorusBox& box) {
    if (!pot.isSmooth() || pot.hardCore > 0.0)
        throw NotSmooth("applyDiffusion: potential must be C^2 without hard core");
    double total = 0.0;
    for (std::size_t i = 0; i < cfg.size(); ++i) {
        const Point& x = cfg.pts[i];
        const double e = relativeEnergyExcluding(static_cast<int>(i), x, cfg, pot, box);
        const double mob = std::exp((2.0 * params.s - 1.0) * e);
        const Point gradE = energyGradientExcluding(static_cast<int>(i), x, cfg, pot, box);
        const Point gradF = F.pointGradient(x, cfg, box);
        const double lapF = F.pointLaplacian(x, cfg, box);
        total += mob * (-lapF + 2.0 * (1.0 - params.s) * dot(gradE, gradF, box.dim));
    }
    return params.c * total;
}

EstimateWithError selfAdjointnessResidual(const OperatorFn& apply, const CylinderFunctional& F,
                                          const CylinderFunctional& G,
                                          const std::vector<Snapshot>& snaps,
                                          const TorusBox& box) {
    if (snaps.size() < 100)
        throw InsufficientSamples("selfAdjointnessResidual: need at least 100 snapshots");
    std::vector<double> diffs;
    diffs.reserve(snaps.size());
    for (const auto& s : snaps) {
        const double af = apply(F, s.cfg);
        const double ag = apply(G, s.cfg);
        const double fv = F.evaluate(s.cfg, box);
        const double gv = G.evaluate(s.cfg, box);
        diffs.push_back(af * gv - fv * ag);
    }
    return batchMeans(diffs);
}

} // namespace pointdyn
