// Command-line driver: sampling, the three dynamics, the verification
// battery, the two limit experiments, and a constants readout. Exit code 0
// on success / verification pass, 2 on a verification failure, 1 on errors.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pointdyn/config.hpp"
#include "pointdyn/diffusion.hpp"
#include "pointdyn/errors.hpp"
#include "pointdyn/generators.hpp"
#include "pointdyn/gibbs.hpp"
#include "pointdyn/glauber.hpp"
#include "pointdyn/io.hpp"
#include "pointdyn/kawasaki.hpp"
#include "pointdyn/verify.hpp"

namespace {

using namespace pointdyn;

std::string resolveOutdir(const std::string& flag, const RunConfig& cfg) {
    if (!flag.empty())
        return flag;
    if (const char* env = std::getenv("POINTDYN_OUTDIR"); env && *env)
        return env;
    return cfg.outputDir;
}

// Provenance goes to stdout and to a side file; the data artifacts carry
// nothing but their own schema.
void emitProvenance(const RunConfig& cfg, const std::string& outdir) {
    std::filesystem::create_directories(outdir);
    const std::string echo = effectiveConfigJson(cfg);
    const std::string hash = hashHex(fnv1aHash(echo));
    std::printf("version %s\nconfigHash %s\nseed %llu\n", kVersion, hash.c_str(),
                static_cast<unsigned long long>(cfg.seed));
    writeProvenance(outdir + "/provenance.txt", hash, cfg.seed);
}

GibbsParams gibbsFrom(const RunConfig& cfg) {
    GibbsParams p;
    p.activity = cfg.activity;
    p.pot = cfg.pot;
    p.box = cfg.box;
    p.pBirth = cfg.sampler.pBirth;
    p.pDeath = cfg.sampler.pDeath;
    p.pMove = cfg.sampler.pMove;
    p.moveRadius = cfg.sampler.moveRadius;
    p.sweeps = cfg.sampler.sweeps;
    p.burnIn = cfg.sampler.burnIn;
    p.thinning = cfg.sampler.thinning;
    p.seed = cfg.seed;
    return p;
}

std::vector<Snapshot> equilibriumSnapshots(const RunConfig& cfg, long count) {
    GibbsParams p = gibbsFrom(cfg);
    p.sweeps = count * p.thinning;
    return sampleEquilibrium(p);
}

Configuration initialConfig(const RunConfig& cfg, const std::string& initPath) {
    if (!initPath.empty()) {
        TorusBox box{1, 1.0};
        const std::vector<Snapshot> snaps = readSnapshots(initPath, box);
        if (box.dim != cfg.box.dim || std::abs(box.side - cfg.box.side) > 1e-12 * cfg.box.side)
            throw std::runtime_error("--init snapshots were recorded in a different box");
        return snaps.back().cfg;
    }
    GibbsParams p = gibbsFrom(cfg);
    p.sweeps = 1;
    p.thinning = 1;
    return sampleEquilibrium(p).back().cfg;
}

std::vector<Observable> defaultObservables(const RunConfig& cfg) {
    std::vector<Observable> obs;
    obs.push_back(observableCount());
    obs.push_back(observableFieldSum(fieldFrom(cfg)));
    obs.push_back(observablePairCount(cfg.pot.range > 0.0 ? cfg.pot.range : 1.0));
    return obs;
}

void printReport(const VerificationReport& rep) {
    std::printf("[%s] %s  statistic=%.4g threshold=%.4g%s%s  (%.2fs)\n",
                rep.pass ? "PASS" : "FAIL", rep.name.c_str(), rep.statistic, rep.threshold,
                rep.note.empty() ? "" : "  ", rep.note.c_str(), rep.runtimeSeconds);
}

int cmdSample(const RunConfig& cfg, const std::string& outdir) {
    std::vector<Snapshot> snaps = sampleEquilibrium(gibbsFrom(cfg));
    writeSnapshots(outdir + "/snapshots.txt", snaps, cfg.box);
    double meanN = 0.0;
    for (const auto& s : snaps) meanN += static_cast<double>(s.cfg.size());
    meanN /= static_cast<double>(snaps.size());
    std::printf("wrote %zu snapshots, mean N = %.3f\n", snaps.size(), meanN);
    if (snaps.size() >= 100) {
        const CorrelationEstimate est =
            estimateCorrelations(snaps, 1, cfg.verify.bins, cfg.box);
        std::printf("k1 = %.6g +- %.2g (ess %.0f)\n", est.k1.mean, est.k1.se, est.ess);
    }
    return 0;
}

int cmdRunKawasaki(const RunConfig& cfg, const std::string& outdir, const std::string& init) {
    KawasakiEngine eng(rateSpecFrom(cfg), cfg.pot, cfg.box, initialConfig(cfg, init), cfg.seed);
    std::vector<EventRecord> log;
    const TimeSeries series =
        eng.run(cfg.run.horizon, defaultObservables(cfg), static_cast<int>(cfg.run.samples),
                cfg.run.eventLog ? &log : nullptr);
    writeSeries(outdir + "/series.jsonl", series);
    if (cfg.run.eventLog)
        writeEventLog(outdir + "/events.txt", log, cfg.box.dim);
    std::printf("hops %llu / proposals %llu (null fraction %.3f), N = %zu\n",
                static_cast<unsigned long long>(eng.acceptedHops()),
                static_cast<unsigned long long>(eng.proposed()), eng.nullFraction(),
                eng.config().size());
    return 0;
}

int cmdRunGlauber(const RunConfig& cfg, const std::string& outdir, const std::string& init) {
    const GlauberSpec spec = GlauberSpec::make(cfg.glauber.s, cfg.activity, cfg.glauber.alpha);
    GlauberEngine eng(spec, cfg.pot, cfg.box, initialConfig(cfg, init), cfg.seed);
    std::vector<EventRecord> log;
    const TimeSeries series =
        eng.run(cfg.run.horizon, defaultObservables(cfg), static_cast<int>(cfg.run.samples),
                cfg.run.eventLog ? &log : nullptr);
    writeSeries(outdir + "/series.jsonl", series);
    if (cfg.run.eventLog)
        writeEventLog(outdir + "/events.txt", log, cfg.box.dim);
    std::printf("births %llu, deaths %llu, nulls %llu, final N = %zu\n",
                static_cast<unsigned long long>(eng.births()),
                static_cast<unsigned long long>(eng.deaths()),
                static_cast<unsigned long long>(eng.nullEvents()), eng.config().size());
    return 0;
}

int cmdRunDiffusion(const RunConfig& cfg, const std::string& outdir, const std::string& init) {
    DiffusionParams par;
    par.s = cfg.diffusion.s;
    par.c = cfg.diffusion.c > 0.0 ? cfg.diffusion.c : cfg.activity * cfg.kernel.secondMoment();
    par.dt = cfg.diffusion.dt;
    par.blowUpGuard = cfg.diffusion.blowUpGuard;
    par.seed = cfg.seed;
    DiffusionEngine eng(par, cfg.pot, cfg.box, initialConfig(cfg, init));
    const TimeSeries series =
        eng.run(cfg.run.horizon, defaultObservables(cfg), static_cast<int>(cfg.run.samples));
    writeSeries(outdir + "/series.jsonl", series);
    std::printf("steps %ld, c = %.6g, msd = %.6g\n", eng.steps(), par.c,
                eng.meanSquaredDisplacement());
    return 0;
}

int cmdVerifyGnz(const RunConfig& cfg, const std::string& outdir) {
    const std::vector<Snapshot> snaps = sampleEquilibrium(gibbsFrom(cfg));
    const VerificationReport rep =
        gnzTest(snaps, cfg.activity, cfg.pot, cfg.box, defaultGnzFamily(cfg.box, cfg.seed),
                cfg.verify.mcPoints, cfg.seed);
    writeReports(outdir + "/report_gnz.json", {rep});
    printReport(rep);
    return rep.pass ? 0 : 2;
}

int cmdVerifyBalance(const RunConfig& cfg, const std::string& outdir) {
    const VerificationReport rep =
        detailedBalanceSuite(cfg.pot, cfg.box, cfg.verify.nCases, cfg.seed);
    writeReports(outdir + "/report_balance.json", {rep});
    printReport(rep);
    return rep.pass ? 0 : 2;
}

int cmdVerifyInvariance(const RunConfig& cfg, const std::string& outdir,
                        const std::string& engine) {
    InvarianceSetup setup;
    if (engine == "kawasaki")
        setup.kind = EngineKind::Kawasaki;
    else if (engine == "glauber")
        setup.kind = EngineKind::Glauber;
    else if (engine == "diffusion")
        setup.kind = EngineKind::Diffusion;
    else
        throw std::runtime_error("--engine must be kawasaki, glauber or diffusion");
    setup.rate = rateSpecFrom(cfg);
    setup.glauber = GlauberSpec::make(cfg.glauber.s, cfg.activity, cfg.glauber.alpha);
    setup.diffusion.s = cfg.diffusion.s;
    setup.diffusion.c =
        cfg.diffusion.c > 0.0 ? cfg.diffusion.c : cfg.activity * cfg.kernel.secondMoment();
    setup.diffusion.dt = cfg.diffusion.dt;
    setup.diffusion.blowUpGuard = cfg.diffusion.blowUpGuard;
    setup.pot = cfg.pot;
    setup.box = cfg.box;
    setup.horizon = cfg.run.horizon;
    setup.seed = cfg.seed;

    const std::vector<Snapshot> starts = equilibriumSnapshots(cfg, cfg.run.replicas);
    VerificationReport rep = invarianceTest(setup, starts, defaultObservables(cfg));
    rep.name = "stationarity-" + engine;
    writeReports(outdir + "/report_invariance_" + engine + ".json", {rep});
    printReport(rep);
    return rep.pass ? 0 : 2;
}

void printCurve(const LimitCurve& curve) {
    for (const auto& p : curve.points)
        std::printf("  delta=%-7g l2err=%.6g +- %.2g\n", p.delta, p.l2err, p.se);
}

int cmdLimitGlauber(const RunConfig& cfg, const std::string& outdir) {
    std::vector<double> grid = cfg.verify.deltaGrid;
    if (grid.empty())
        grid = {4.0, 2.0, 1.0, 0.5, 0.25};
    const std::vector<Snapshot> snaps = sampleEquilibrium(gibbsFrom(cfg));
    const LimitCurve curve = glauberLimitExperiment(grid, cfg.pot, cfg.box, cfg.activity,
                                                    cfg.kernel, fieldFrom(cfg), snaps,
                                                    cfg.verify.quadGrid);
    writeLimitCurveCsv(outdir + "/limit_glauber.csv", curve);
    std::printf("matched speed alpha = %.6g\n", curve.alpha);
    printCurve(curve);
    std::printf("%s nonincreasing=%d finalQuarter=%d\n", curve.pass ? "[PASS]" : "[FAIL]",
                curve.nonincreasing ? 1 : 0, curve.finalQuarter ? 1 : 0);
    return curve.pass ? 0 : 2;
}

int cmdLimitDiffusion(const RunConfig& cfg, const std::string& outdir) {
    std::vector<double> grid = cfg.verify.deltaGrid;
    if (grid.empty())
        grid = {1.0, 2.0, 4.0, 8.0};
    const std::vector<Snapshot> snaps = sampleEquilibrium(gibbsFrom(cfg));
    const LimitCurve curve =
        diffusionLimitExperiment(grid, cfg.diffusion.s, cfg.pot, cfg.box, cfg.activity,
                                 cfg.kernel, functionalFrom(cfg), snaps, cfg.verify.quadGrid);
    writeLimitCurveCsv(outdir + "/limit_diffusion.csv", curve);
    printCurve(curve);
    std::printf("%s nonincreasing=%d finalQuarter=%d\n", curve.pass ? "[PASS]" : "[FAIL]",
                curve.nonincreasing ? 1 : 0, curve.finalQuarter ? 1 : 0);
    return curve.pass ? 0 : 2;
}

int cmdConstants(const RunConfig& cfg) {
    const PotentialConstants pc = computeConstants(cfg.pot, cfg.box.dim);
    std::printf("B            %s\n", formatDouble(pc.B).c_str());
    std::printf("C            %s\n", formatDouble(pc.C).c_str());
    std::printf("zThreshold1  %s\n", formatDouble(pc.zThreshold1).c_str());
    std::printf("zThreshold2  %s\n", formatDouble(pc.zThreshold2).c_str());
    std::printf("kernelMass   %s\n", formatDouble(cfg.kernel.l1Norm()).c_str());
    std::printf("kernelM2     %s\n", formatDouble(cfg.kernel.secondMoment()).c_str());
    std::printf("kernelM2Scaled %s\n", formatDouble(cfg.kernel.secondMomentScaled()).c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"equilibrium hop / birth-death / diffusion dynamics laboratory"};
    app.require_subcommand(1);

    std::string configPath, outdirFlag, initPath, engineName = "kawasaki";

    auto addCommon = [&](CLI::App* sub) {
        sub->add_option("-c,--config", configPath, "JSON config file")->required();
        sub->add_option("-o,--outdir", outdirFlag, "output directory (overrides config/env)");
        return sub;
    };

    addCommon(app.add_subcommand("sample", "draw equilibrium snapshots"));
    auto* runK = addCommon(app.add_subcommand("run-kawasaki", "simulate the hop dynamics"));
    auto* runG = addCommon(app.add_subcommand("run-glauber", "simulate the birth-death dynamics"));
    auto* runD = addCommon(app.add_subcommand("run-diffusion", "integrate the diffusion limit"));
    for (auto* sub : {runK, runG, runD})
        sub->add_option("--init", initPath, "snapshot file; the last record seeds the run");
    addCommon(app.add_subcommand("verify-gnz", "insertion-identity check on samples"));
    addCommon(app.add_subcommand("verify-balance", "exact detailed-balance identities"));
    auto* vInv = addCommon(app.add_subcommand("verify-invariance", "stationarity under a dynamics"));
    vInv->add_option("--engine", engineName, "kawasaki | glauber | diffusion");
    addCommon(app.add_subcommand("limit-glauber", "hop-to-birth-death error curve"));
    addCommon(app.add_subcommand("limit-diffusion", "hop-to-diffusion error curve"));
    addCommon(app.add_subcommand("constants", "potential and kernel constants"));

    CLI11_PARSE(app, argc, argv);

    try {
        const RunConfig cfg = loadConfig(configPath);
        const std::string sub = app.get_subcommands().front()->get_name();
        if (sub == "constants")
            return cmdConstants(cfg);

        const std::string outdir = resolveOutdir(outdirFlag, cfg);
        emitProvenance(cfg, outdir);
        if (sub == "sample")
            return cmdSample(cfg, outdir);
        if (sub == "run-kawasaki")
            return cmdRunKawasaki(cfg, outdir, initPath);
        if (sub == "run-glauber")
            return cmdRunGlauber(cfg, outdir, initPath);
        if (sub == "run-diffusion")
            return cmdRunDiffusion(cfg, outdir, initPath);
        if (sub == "verify-gnz")
            return cmdVerifyGnz(cfg, outdir);
        if (sub == "verify-balance")
            return cmdVerifyBalance(cfg, outdir);
        if (sub == "verify-invariance")
            return cmdVerifyInvariance(cfg, outdir, engineName);
        if (sub == "limit-glauber")
            return cmdLimitGlauber(cfg, outdir);
        if (sub == "limit-diffusion")
            return cmdLimitDiffusion(cfg, outdir);
        std::fprintf(stderr, "error: unknown subcommand %s\n", sub.c_str());
        return 1;
    } catch (const SchemaError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
