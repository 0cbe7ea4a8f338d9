/* Statistical plumbing: Monte Carlo error bars via batch means, and the
 * chi-square goodness-of-fit machinery (regularized incomplete gamma). */
#pragma once

#include <cstddef>
#include <vector>

#include "pointdyn/errors.hpp"

namespace pointdyn {

/* A Monte Carlo estimate with an autocorrelation-robust standard error and an
 * effective sample size; the unit of all statistical verification output. */
struct EstimateWithError {
    double mean = 0.0;
    double se = 0.0;  // batch-means standard error of the mean
    double ess = 0.0; // effective sample size implied by se vs naive variance
    std::size_t n = 0;
};

// Batch-means estimate over a (possibly autocorrelated) series. Throws
// InsufficientSamples if there are fewer values than batches.
EstimateWithError batchMeans(const std::vector<double>& xs, int nBatches = 20);

// Regularized incomplete gamma functions P(a,x) and Q(a,x) = 1 - P(a,x),
// via the standard series / continued-fraction split at x = a+1.
double regularizedGammaP(double a, double x);
double regularizedGammaQ(double a, double x);

struct ChiSquareResult {
    double statistic = 0.0;
    int dof = 0;
    double pValue = 1.0;
    int bins = 0;
};

// Pearson chi-square of integer samples against Poisson(lambda). Tail bins are
// merged until every expected count is at least minExpected.
ChiSquareResult poissonChiSquare(const std::vector<long>& samples, double lambda,
                                 double minExpected = 5.0);

} // namespace pointdyn
