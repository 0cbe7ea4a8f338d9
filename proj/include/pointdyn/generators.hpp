/* Pointwise generator evaluations on cylinder functionals: the hop generator
 * (outer particle sum exact, inner target integral by midpoint tensor
 * quadrature over the kernel support), the birth-death generator (whole-box
 * birth quadrature, exact death sum), and the limiting diffusion operator
 * (exact finite sum; no quadrature). Quadrature error estimates come from
 * halving the per-axis resolution.
 */
#pragma once

#include <functional>
#include <vector>

#include "pointdyn/functionals.hpp"
#include "pointdyn/rates.hpp"
#include "pointdyn/stats.hpp"

namespace pointdyn {

struct GeneratorEvaluation {
    double value = 0.0;
    double quadError = 0.0; // |value(n) - value(n/2)|
};

struct DiffusionOperatorParams {
    double s = 0.5;
    double c = 1.0;
};

/* -2 z sum_x integral c~(x,y,gamma) [F(gamma\x u y) - F(gamma)] dy with the
 * y-integral on the kernel-support cube around each particle (midpoint,
 * quadGrid points per axis, quadGrid even). `symmetrized` selects c~ =
 * symmetrize(spec) (for the s-family this equals c_s and is evaluated
 * directly); false evaluates the bare spec rate — that breaks the symmetry of
 * the operator for u != v rates, which is exactly the negative control the
 * self-adjointness test needs. Throws QuadratureFailure on a non-finite
 * integrand and std::invalid_argument when the kernel support exceeds half
 * the box. */
GeneratorEvaluation applyKawasaki(const CylinderFunctional& F, const Configuration& cfg,
                                  const RateSpec& spec, const PairPotential& pot,
                                  const TorusBox& box, int quadGrid, bool symmetrized = true);

/* -z integral b_s(x,gamma) [F(gamma u x) - F(gamma)] dx  -  sum_x d_s(x,gamma)
 * [F(gamma\x) - F(gamma)], birth integral over the whole box (midpoint,
 * quadGrid per axis); the death sum is exact, so the error estimate covers
 * the birth part only. */
GeneratorEvaluation applyGlauber(const CylinderFunctional& F, const Configuration& cfg,
                                 const GlauberSpec& spec, const PairPotential& pot,
                                 const TorusBox& box, int quadGrid);

/* The limiting diffusion operator
 *   c sum_x e^{(2s-1)E(x,gamma\x)} ( -Laplacian_x F + 2(1-s) <grad E_x, grad_x F> ),
 * an exact finite sum via the functional's analytic derivatives and the
 * analytic potential gradient. Its negative is the Markov generator the EM
 * integrator discretizes. Throws NotSmooth for non-C^2 potentials. */
double applyDiffusion(const CylinderFunctional& F, const Configuration& cfg,
                      const DiffusionOperatorParams& params, const PairPotential& pot,
                      const TorusBox& box);

using OperatorFn = std::function<double(const CylinderFunctional&, const Configuration&)>;

/* Monte Carlo symmetry defect of an operator in L^2 of the sampled measure:
 * per-snapshot paired difference (A F) G - F (A G), batch-means error bars.
 * Symmetric operators give |mean| within noise of 0. */
EstimateWithError selfAdjointnessResidual(const OperatorFn& apply, const CylinderFunctional& F,
                                          const CylinderFunctional& G,
                                          const std::vector<Snapshot>& snaps,
                                          const TorusBox& box);

} // namespace pointdyn
