/* Cylinder test functionals F(gamma) = sum_k w_k * g_k(sum_i c_{k,i} <psi_i, gamma>)
 * over smooth compactly supported fields psi_i, with exact difference operators
 * (remove/insert/swap a point) and analytic per-point gradient and Laplacian.
 *
 * Everything is symbolic: the outer functions are a closed family (exp,
 * polynomial of degree <= 4, tanh), so no numerical differentiation enters the
 * generator computations. Difference operators are evaluated by shifting the
 * per-field sums, which is exact and O(#fields) instead of O(N).
 */
#pragma once

#include <vector>

#include "pointdyn/geometry.hpp"

namespace pointdyn {

/* Smooth scalar field on the torus: a sum of C-infinity bumps
 *   A * exp(1 - 1/(1 - |x-c|^2/r^2))   for |x-c| < r, else 0.
 * Bump radii must be < L/2 so the support never touches the minimum-image cut
 * locus (keeps the field genuinely smooth on the torus). */
struct FieldBump {
    Point center{0.0, 0.0, 0.0};
    double radius = 1.0;
    double amplitude = 1.0;
};

struct TestField {
    std::vector<FieldBump> bumps;

    double value(const Point& x, const TorusBox& box) const;
    Point gradient(const Point& x, const TorusBox& box) const;
    double laplacian(const Point& x, const TorusBox& box) const;

    // <psi, gamma> = sum over configuration points.
    double sumOver(const Configuration& cfg, const TorusBox& box) const;

    void validate(const TorusBox& box) const; // radius/box constraint
};

enum class OuterKind { Exponential, Polynomial, Tanh };

/* Scalar outer function g(t) with analytic first and second derivatives.
 * Exponential: e^t. Tanh: tanh(t). Polynomial: sum p_k t^k, degree <= 4. */
struct OuterFn {
    OuterKind kind = OuterKind::Polynomial;
    std::vector<double> coeffs; // Polynomial only: p_0 .. p_4

    static OuterFn exponential() { return {OuterKind::Exponential, {}}; }
    static OuterFn tanh() { return {OuterKind::Tanh, {}}; }
    static OuterFn polynomial(std::vector<double> p);

    double value(double t) const;
    double d1(double t) const;
    double d2(double t) const;
};

/* One additive term: weight * g(sum_i fieldCoeffs[i] * t_i), where t_i is the
 * configuration sum of field i. A functional is a list of such terms over a
 * shared field list, which makes the family closed under linear combination. */
struct CylinderTerm {
    double weight = 1.0;
    OuterFn outer;
    std::vector<double> fieldCoeffs;
};

class CylinderFunctional {
  public:
    CylinderFunctional() = default;
    CylinderFunctional(std::vector<TestField> fields, std::vector<CylinderTerm> terms);

    // Convenience: F = g(<psi, gamma>) with a single field and unit weight.
    static CylinderFunctional single(TestField psi, OuterFn g);

    const std::vector<TestField>& fields() const { return fields_; }
    const std::vector<CylinderTerm>& terms() const { return terms_; }

    double evaluate(const Configuration& cfg, const TorusBox& box) const;

    // Per-field configuration sums t_i, and evaluation from given sums. These
    // are the building blocks the generator quadratures use to amortize work.
    std::vector<double> fieldSums(const Configuration& cfg, const TorusBox& box) const;
    double valueFromSums(const std::vector<double>& sums) const;
    std::vector<double> fieldValuesAt(const Point& x, const TorusBox& box) const;

    // F(gamma \ x u y) - F(gamma), x a point of gamma.
    double dMinusPlus(const Point& x, const Point& y, const Configuration& cfg,
                      const TorusBox& box) const;
    // F(gamma \ x) - F(gamma), x a point of gamma.
    double dMinus(const Point& x, const Configuration& cfg, const TorusBox& box) const;
    // F(gamma u x) - F(gamma), x not in gamma.
    double dPlus(const Point& x, const Configuration& cfg, const TorusBox& box) const;

    // Derivatives of F with respect to the position of the particle at x
    // (chain rule through the outer functions; exact).
    Point pointGradient(const Point& x, const Configuration& cfg, const TorusBox& box) const;
    double pointLaplacian(const Point& x, const Configuration& cfg, const TorusBox& box) const;

    void validate(const TorusBox& box) const;

  private:
    std::vector<TestField> fields_;
    std::vector<CylinderTerm> terms_;
};

// a*F + b*G as one functional (fields concatenated, coefficients reindexed).
CylinderFunctional linearCombination(double a, const CylinderFunctional& F, double b,
                                     const CylinderFunctional& G);

} // namespace pointdyn
