#include "pointdyn/functionals.hpp"

#include <cmath>
#include <stdexcept>

namespace pointdyn {

namespace {

// One bump evaluated at squared scaled distance q = |u|^2 / r^2 < 1.
// Returns A * exp(1 - 1/(1-q)) and its first/second derivatives in q.
struct BumpEval {
    double v = 0.0;   // value
    double vq = 0.0;  // d/dq
    double vqq = 0.0; // d^2/dq^2
};

BumpEval bumpEval(double amplitude, double q) {
    BumpEval e;
    const double s = 1.0 - q;
    e.v = amplitude * std::exp(1.0 - 1.0 / s);
    e.vq = -e.v / (s * s);                              // h' = -1/s^2
    e.vqq = e.v * (1.0 / (s * s * s * s) - 2.0 / (s * s * s)); // h'^2 + h''
    return e;
}

} // namespace

double TestField::value(const Point& x, const TorusBox& box) const {
    double out = 0.0;
    for (const auto& b : bumps) {
        const double q = box.dist2(x, b.center) / (b.radius * b.radius);
        if (q >= 1.0) continue;
        out += bumpEval(b.amplitude, q).v;
    }
    return out;
}

Point TestField::gradient(const Point& x, const TorusBox& box) const {
    Point g{0.0, 0.0, 0.0};
    for (const auto& b : bumps) {
        const Point u = box.delta(x, b.center);
        double r2 = 0.0;
        for (int a = 0; a < box.dim; ++a) r2 += u[static_cast<std::size_t>(a)] * u[static_cast<std::size_t>(a)];
        const double q = r2 / (b.radius * b.radius);
        if (q >= 1.0) continue;
        const BumpEval e = bumpEval(b.amplitude, q);
        const double scale = e.vq * 2.0 / (b.radius * b.radius); // d/du of q is 2u/r^2
        for (int a = 0; a < box.dim; ++a) g[static_cast<std::size_t>(a)] += scale * u[static_cast<std::size_t>(a)];
    }
    return g;
}

double TestField::laplacian(const Point& x, const TorusBox& box) const {
    double lap = 0.0;
    for (const auto& b : bumps) {
        const double r2b = b.radius * b.radius;
        const double q = box.dist2(x, b.center) / r2b;
        if (q >= 1.0) continue;
        const BumpEval e = bumpEval(b.amplitude, q);
        // Laplacian of v(q(u)): (2/r^2) * (dim * v_q + 2 q v_qq).
        lap += (2.0 / r2b) * (box.dim * e.vq + 2.0 * q * e.vqq);
    }
    return lap;
}

double TestField::sumOver(const Configuration& cfg, const TorusBox& box) const {
    double s = 0.0;
    for (const auto& p : cfg.pts) s += value(p, box);
    return s;
}

void TestField::validate(const TorusBox& box) const {
    for (const auto& b : bumps) {
        if (!(b.radius > 0.0)) throw std::invalid_argument("TestField: bump radius must be positive");
        if (!(b.radius < 0.5 * box.side))
            throw std::invalid_argument("TestField: bump radius must be < L/2");
    }
}

OuterFn OuterFn::polynomial(std::vector<double> p) {
    if (p.empty() || p.size() > 5)
        throw std::invalid_argument("OuterFn: polynomial degree must be <= 4");
    return {OuterKind::Polynomial, std::move(p)};
}

double OuterFn::value(double t) const {
    switch (kind) {
        case OuterKind::Exponential: return std::exp(t);
        case OuterKind::Tanh: return std::tanh(t);
        case OuterKind::Polynomial: {
            double v = 0.0;
            for (std::size_t k = coeffs.size(); k-- > 0;) v = v * t + coeffs[k];
            return v;
        }
    }
    return 0.0;
}

double OuterFn::d1(double t) const {
    switch (kind) {
        case OuterKind::Exponential: return std::exp(t);
        case OuterKind::Tanh: {
            const double c = std::cosh(t);
            return 1.0 / (c * c);
        }
        case OuterKind::Polynomial: {
            double v = 0.0;
            for (std::size_t k = coeffs.size(); k-- > 1;)
                v = v * t + coeffs[k] * static_cast<double>(k);
            return v;
        }
    }
    return 0.0;
}

double OuterFn::d2(double t) const {
    switch (kind) {
        case OuterKind::Exponential: return std::exp(t);
        case OuterKind::Tanh: {
            const double th = std::tanh(t);
            const double c = std::cosh(t);
            return -2.0 * th / (c * c);
        }
        case OuterKind::Polynomial: {
            double v = 0.0;
            for (std::size_t k = coeffs.size(); k-- > 2;)
                v = v * t + coeffs[k] * static_cast<double>(k) * static_cast<double>(k - 1);
            return v;
        }
    }
    return 0.0;
}

CylinderFunctional::CylinderFunctional(std::vector<TestField> fields,
                                       std::vector<CylinderTerm> terms)
    : fields_(std::move(fields)), terms_(std::move(terms)) {
    for (const auto& t : terms_)
        if (t.fieldCoeffs.size() != fields_.size())
            throw std::invalid_argument("CylinderFunctional: coefficient/field count mismatch");
}

CylinderFunctional CylinderFunctional::single(TestField psi, OuterFn g) {
    CylinderTerm term;
    term.weight = 1.0;
    term.outer = std::move(g);
    term.fieldCoeffs = {1.0};
    return CylinderFunctional({std::move(psi)}, {std::move(term)});
}

std::vector<double> CylinderFunctional::fieldSums(const Configuration& cfg,
                                                  const TorusBox& box) const {
    std::vector<double> sums(fields_.size(), 0.0);
    for (const auto& p : cfg.pts)
        for (std::size_t i = 0; i < fields_.size(); ++i) sums[i] += fields_[i].value(p, box);
    return sums;
}

std::vector<double> CylinderFunctional::fieldValuesAt(const Point& x, const TorusBox& box) const {
    std::vector<double> vals(fields_.size(), 0.0);
    for (std::size_t i = 0; i < fields_.size(); ++i) vals[i] = fields_[i].value(x, box);
    return vals;
}

double CylinderFunctional::valueFromSums(const std::vector<double>& sums) const {
    double out = 0.0;
    for (const auto& term : terms_) {
        double arg = 0.0;
        for (std::size_t i = 0; i < sums.size(); ++i) arg += term.fieldCoeffs[i] * sums[i];
        out += term.weight * term.outer.value(arg);
    }
    return out;
}

double CylinderFunctional::evaluate(const Configuration& cfg, const TorusBox& box) const {
    return valueFromSums(fieldSums(cfg, box));
}

double CylinderFunctional::dMinusPlus(const Point& x, const Point& y, const Configuration& cfg,
                                      const TorusBox& box) const {
    std::vector<double> sums = fieldSums(cfg, box);
    const double before = valueFromSums(sums);
    for (std::size_t i = 0; i < fields_.size(); ++i)
        sums[i] += fields_[i].value(y, box) - fields_[i].value(x, box);
    return valueFromSums(sums) - before;
}

double CylinderFunctional::dMinus(const Point& x, const Configuration& cfg,
                                  const TorusBox& box) const {
    std::vector<double> sums = fieldSums(cfg, box);
    const double before = valueFromSums(sums);
    for (std::size_t i = 0; i < fields_.size(); ++i) sums[i] -= fields_[i].value(x, box);
    return valueFromSums(sums) - before;
}

double CylinderFunctional::dPlus(const Point& x, const Configuration& cfg,
                                 const TorusBox& box) const {
    std::vector<double> sums = fieldSums(cfg, box);
    const double before = valueFromSums(sums);
    for (std::size_t i = 0; i < fields_.size(); ++i) sums[i] += fields_[i].value(x, box);
    return valueFromSums(sums) - before;
}

Point CylinderFunctional::pointGradient(const Point& x, const Configuration& cfg,
                                        const TorusBox& box) const {
    const std::vector<double> sums = fieldSums(cfg, box);
    std::vector<Point> fieldGrads(fields_.size());
    for (std::size_t i = 0; i < fields_.size(); ++i) fieldGrads[i] = fields_[i].gradient(x, box);

    Point g{0.0, 0.0, 0.0};
    for (const auto& term : terms_) {
        double arg = 0.0;
        for (std::size_t i = 0; i < sums.size(); ++i) arg += term.fieldCoeffs[i] * sums[i];
        const double g1 = term.weight * term.outer.d1(arg);
        for (std::size_t i = 0; i < fields_.size(); ++i)
            for (int a = 0; a < box.dim; ++a)
                g[static_cast<std::size_t>(a)] +=
                    g1 * term.fieldCoeffs[i] * fieldGrads[i][static_cast<std::size_t>(a)];
    }
    return g;
}

double CylinderFunctional::pointLaplacian(const Point& x, const Configuration& cfg,
                                          const TorusBox& box) const {
    const std::vector<double> sums = fieldSums(cfg, box);
    std::vector<Point> fieldGrads(fields_.size());
    std::vector<double> fieldLaps(fields_.size());
    for (std::size_t i = 0; i < fields_.size(); ++i) {
        fieldGrads[i] = fields_[i].gradient(x, box);
        fieldLaps[i] = fields_[i].laplacian(x, box);
    }

    double lap = 0.0;
    for (const auto& term : terms_) {
        double arg = 0.0;
        for (std::size_t i = 0; i < sums.size(); ++i) arg += term.fieldCoeffs[i] * sums[i];
        const double g1 = term.outer.d1(arg);
        const double g2 = term.outer.d2(arg);
        // Gradient of the (scalar) argument of this term at x.
        Point argGrad{0.0, 0.0, 0.0};
        double argLap = 0.0;
        for (std::size_t i = 0; i < fields_.size(); ++i) {
            argLap += term.fieldCoeffs[i] * fieldLaps[i];
            for (int a = 0; a < box.dim; ++a)
                argGrad[static_cast<std::size_t>(a)] +=
                    term.fieldCoeffs[i] * fieldGrads[i][static_cast<std::size_t>(a)];
        }
        double argGrad2 = 0.0;
        for (int a = 0; a < box.dim; ++a)
            argGrad2 += argGrad[static_cast<std::size_t>(a)] * argGrad[static_cast<std::size_t>(a)];
        lap += term.weight * (g1 * argLap + g2 * argGrad2);
    }
    return lap;
}

void CylinderFunctional::validate(const TorusBox& box) const {
    for (const auto& f : fields_) f.validate(box);
}

CylinderFunctional linearCombination(double a, const CylinderFunctional& F, double b,
                                     const CylinderFunctional& G) {
    std::vector<TestField> fields = F.fields();
    fields.insert(fields.end(), G.fields().begin(), G.fields().end());

    std::vector<CylinderTerm> terms;
    for (const auto& t : F.terms()) {
        CylinderTerm nt = t;
        nt.weight *= a;
        nt.fieldCoeffs.resize(fields.size(), 0.0);
        terms.push_back(std::move(nt));
    }
    for (const auto& t : G.terms()) {
        CylinderTerm nt;
        nt.weight = b * t.weight;
        nt.outer = t.outer;
        nt.fieldCoeffs.assign(fields.size(), 0.0);
        for (std::size_t i = 0; i < t.fieldCoeffs.size(); ++i)
            nt.fieldCoeffs[F.fields().size() + i] = t.fieldCoeffs[i];
        terms.push_back(std::move(nt));
    }
    return CylinderFunctional(std::move(fields), std::move(terms));
}

} // namespace pointdyn
