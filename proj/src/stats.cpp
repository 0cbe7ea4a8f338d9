#include "pointdyn/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pointdyn {

EstimateWithError batchMeans(const std::vector<double>& xs, int nBatches) {
    const std::size_t n = xs.size();
    if (nBatches < 2) nBatches = 2;
    if (n < static_cast<std::size_t>(nBatches))
        throw InsufficientSamples("batchMeans: fewer samples than batches");

    EstimateWithError est;
    est.n = n;
    double total = 0.0;
    for (double x : xs) total += x;
    est.mean = total / static_cast<double>(n);

    // Equal-size batches; a short tail (n % nBatches values) is folded into the
    // last batch so every value contributes.
    const std::size_t base = n / static_cast<std::size_t>(nBatches);
    std::vector<double> batchMean(static_cast<std::size_t>(nBatches), 0.0);
    std::size_t pos = 0;
    for (int b = 0; b < nBatches; ++b) {
        const std::size_t len = (b == nBatches - 1) ? (n - pos) : base;
        double s = 0.0;
        for (std::size_t k = 0; k < len; ++k) s += xs[pos + k];
        batchMean[static_cast<std::size_t>(b)] = s / static_cast<double>(len);
        pos += len;
    }
    double var = 0.0;
    for (double m : batchMean) var += (m - est.mean) * (m - est.mean);
    var /= static_cast<double>(nBatches - 1);
    est.se = std::sqrt(var / static_cast<double>(nBatches));

    // ESS: naive iid variance over the batch-means variance of the mean.
    double naive = 0.0;
    for (double x : xs) naive += (x - est.mean) * (x - est.mean);
    naive /= static_cast<double>(n > 1 ? n - 1 : 1);
    est.ess = (est.se > 0.0) ? naive / (est.se * est.se) : static_cast<double>(n);
    return est;
}

namespace {

// ln Gamma(a), Lanczos approximation (g=5, n=6), |error| < 2e-10.
double lnGamma(double a) {
    static const double cof[6] = {76.18009172947146,  -86.50532032941677, 24.01409824083091,
                                  -1.231739572450155, 0.1208650973866179e-2, -0.5395239384953e-5};
    double x = a;
    double y = a;
    double tmp = x + 5.5;
    tmp -= (x + 0.5) * std::log(tmp);
    double ser = 1.000000000190015;
    for (double c : cof) ser += c / ++y;
    return -tmp + std::log(2.5066282746310005 * ser / x);
}

// Series representation of P(a,x), valid for x < a+1.
double gammaPSeries(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ++ap;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - lnGamma(a));
}

// Continued fraction (modified Lentz) for Q(a,x), valid for x >= a+1.
double gammaQContinued(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - lnGamma(a)) * h;
}

} // namespace

double regularizedGammaP(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::invalid_argument("regularizedGammaP: bad arguments");
    if (x == 0.0) return 0.0;
    return (x < a + 1.0) ? gammaPSeries(a, x) : 1.0 - gammaQContinued(a, x);
}

double regularizedGammaQ(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::invalid_argument("regularizedGammaQ: bad arguments");
    if (x == 0.0) return 1.0;
    return (x < a + 1.0) ? 1.0 - gammaPSeries(a, x) : gammaQContinued(a, x);
}

ChiSquareResult poissonChiSquare(const std::vector<long>& samples, double lambda,
                                 double minExpected) {
    if (samples.empty()) throw InsufficientSamples("poissonChiSquare: no samples");
    const double n = static_cast<double>(samples.size());

    long maxVal = 0;
    for (long s : samples) maxVal = std::max(maxVal, s);

    // Expected counts for N = 0..maxVal plus an overflow bin for N > maxVal.
    std::vector<double> expected;
    std::vector<double> observed;
    double pk = std::exp(-lambda); // P(N=0)
    double cum = 0.0;
    std::vector<long> histo(static_cast<std::size_t>(maxVal) + 1, 0);
    for (long s : samples) ++histo[static_cast<std::size_t>(s)];
    for (long k = 0; k <= maxVal; ++k) {
        expected.push_back(n * pk);
        observed.push_back(static_cast<double>(histo[static_cast<std::size_t>(k)]));
        cum += pk;
        pk *= lambda / static_cast<double>(k + 1);
    }
    expected.push_back(n * std::max(0.0, 1.0 - cum));
    observed.push_back(0.0);

    // Merge adjacent bins (left to right) until every merged bin has expected
    // count >= minExpected; the final fragment is folded into the last bin.
    std::vector<double> expM, obsM;
    double eAcc = 0.0, oAcc = 0.0;
    for (std::size_t k = 0; k < expected.size(); ++k) {
        eAcc += expected[k];
        oAcc += observed[k];
        if (eAcc >= minExpected) {
            expM.push_back(eAcc);
            obsM.push_back(oAcc);
            eAcc = oAcc = 0.0;
        }
    }
    if (eAcc > 0.0 || oAcc > 0.0) {
        if (expM.empty()) {
            expM.push_back(eAcc);
            obsM.push_back(oAcc);
        } else {
            expM.back() += eAcc;
            obsM.back() += oAcc;
        }
    }

    ChiSquareResult res;
    res.bins = static_cast<int>(expM.size());
    if (res.bins < 2) throw InsufficientSamples("poissonChiSquare: fewer than two usable bins");
    for (std::size_t k = 0; k < expM.size(); ++k) {
        const double diff = obsM[k] - expM[k];
        res.statistic += diff * diff / expM[k];
    }
    res.dof = res.bins - 1; // lambda is specified, not fitted
    res.pValue = regularizedGammaQ(0.5 * static_cast<double>(res.dof), 0.5 * res.statistic);
    return res;
}

} // namespace pointdyn
