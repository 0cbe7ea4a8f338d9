#pragma once

// JSON run configuration: one file drives every subcommand; unknown keys are
// rejected so typos fail loudly, and all violations are reported in one shot.

#include <cstdint>
#include <string>
#include <vector>

#include "pointdyn/functionals.hpp"
#include "pointdyn/geometry.hpp"
#include "pointdyn/potentials.hpp"
#include "pointdyn/rates.hpp"

namespace pointdyn {

struct SamplerConfig {
    long sweeps = 2000;
    long burnIn = 200;
    long thinning = 1;
    double pBirth = 0.25;
    double pDeath = 0.25;
    double pMove = 0.5;
    double moveRadius = 0.0; // 0: derived from the potential range
};

struct KawasakiConfig {
    std::string family = "s"; // "s" or "uv"
    double s = 0.5;
    double u = 0.0;
    double v = 1.0;
};

struct GlauberConfig {
    double s = 0.0;
    double alpha = 1.0;
};

struct DiffusionConfig {
    double s = 0.5;
    double c = 0.0; // 0: derived as z * m2(kernel)
    double dt = 0.01;
    double blowUpGuard = 50.0;
};

struct RunBlockConfig {
    double horizon = 10.0;
    long samples = 100;
    long replicas = 200;
    bool eventLog = false;
};

struct VerifyConfig {
    int mcPoints = 64;
    int nCases = 1000;
    int bins = 40;
    std::vector<double> deltaGrid; // empty: subcommand default
    int quadGrid = 128;
};

struct RunConfig {
    TorusBox box{1, 10.0};
    PairPotential pot = PairPotential::none();
    HopKernel kernel;
    double activity = 1.0;
    SamplerConfig sampler;
    KawasakiConfig kawasaki;
    GlauberConfig glauber;
    DiffusionConfig diffusion;
    RunBlockConfig run;
    VerifyConfig verify;
    std::vector<FieldBump> fields;
    std::string outer = "exp"; // outer function for the test functional
    std::vector<double> outerCoeffs;
    std::uint64_t seed = 1;
    std::string outputDir = ".";
};

// Parse + validate; throws SchemaError listing every violation.
RunConfig parseConfig(const std::string& jsonText);
RunConfig loadConfig(const std::string& path);

// Canonical echo of the effective configuration (defaults filled in, keys
// sorted). This is what gets hashed into the provenance record.
std::string effectiveConfigJson(const RunConfig& cfg);

// Helpers assembled from the config blocks.
RateSpec rateSpecFrom(const RunConfig& cfg);
TestField fieldFrom(const RunConfig& cfg);           // union of the fields block
CylinderFunctional functionalFrom(const RunConfig& cfg);
OuterFn outerFrom(const RunConfig& cfg);

} // namespace pointdyn
