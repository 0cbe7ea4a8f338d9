#include "pointdyn/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "pointdyn/errors.hpp"

namespace pointdyn {

using nlohmann::json;

namespace {

// Collects violations so the user sees every problem at once.
struct Checker {
    std::vector<std::string> bad;

    void complain(const std::string& path, const std::string& what) {
        bad.push_back(path + ": " + what);
    }

    void rejectUnknown(const json& obj, const std::string& path,
                       const std::set<std::string>& allowed) {
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            if (!allowed.count(it.key()))
                complain(path.empty() ? it.key() : path + "." + it.key(), "unknown key");
        }
    }

    double num(const json& obj, const char* key, const std::string& path, double dflt) {
        if (!obj.contains(key))
            return dflt;
        const json& v = obj.at(key);
        if (!v.is_number()) {
            complain(path, "must be a number");
            return dflt;
        }
        return v.get<double>();
    }

    long integer(const json& obj, const char* key, const std::string& path, long dflt) {
        if (!obj.contains(key))
            return dflt;
        const json& v = obj.at(key);
        if (!v.is_number_integer()) {
            complain(path, "must be an integer");
            return dflt;
        }
        return v.get<long>();
    }

    bool boolean(const json& obj, const char* key, const std::string& path, bool dflt) {
        if (!obj.contains(key))
            return dflt;
        const json& v = obj.at(key);
        if (!v.is_boolean()) {
            complain(path, "must be a boolean");
            return dflt;
        }
        return v.get<bool>();
    }

    std::string str(const json& obj, const char* key, const std::string& path,
                    const std::string& dflt) {
        if (!obj.contains(key))
            return dflt;
        const json& v = obj.at(key);
        if (!v.is_string()) {
            complain(path, "must be a string");
            return dflt;
        }
        return v.get<std::string>();
    }
};

} // namespace

RunConfig parseConfig(const std::string& jsonText) {
    json root;
    try {
        root = json::parse(jsonText);
    } catch (const json::parse_error& e) {
        throw SchemaError({std::string("not valid JSON: ") + e.what()});
    }
    if (!root.is_object())
        throw SchemaError({"top level must be a JSON object"});

    Checker ck;
    RunConfig cfg;

    ck.rejectUnknown(root, "",
                     {"box", "potential", "kernel", "activity", "sampler", "kawasaki", "glauber",
                      "diffusion", "run", "verify", "fields", "functional", "seed", "outputDir"});

    // box
    int dim = 1;
    double side = 10.0;
    if (root.contains("box")) {
        const json& b = root.at("box");
        if (!b.is_object()) {
            ck.complain("box", "must be an object");
        } else {
            ck.rejectUnknown(b, "box", {"d", "L"});
            dim = static_cast<int>(ck.integer(b, "d", "box.d", 1));
            side = ck.num(b, "L", "box.L", 10.0);
        }
    }
    if (dim < 1 || dim > 3)
        ck.complain("box.d", "must be 1, 2 or 3");
    if (!(side > 0.0))
        ck.complain("box.L", "must be positive");
    if (ck.bad.empty())
        cfg.box = TorusBox(dim, side);

    // potential
    if (root.contains("potential")) {
        const json& p = root.at("potential");
        if (!p.is_object()) {
            ck.complain("potential", "must be an object");
        } else {
            ck.rejectUnknown(p, "potential",
                             {"shape", "hardCore", "range", "depth", "amplitude", "neighborCap"});
            const std::string shape = ck.str(p, "shape", "potential.shape", "none");
            const double rhc = ck.num(p, "hardCore", "potential.hardCore", 0.0);
            const double range = ck.num(p, "range", "potential.range", 1.0);
            const double depth = ck.num(p, "depth", "potential.depth", 0.0);
            const double amp = ck.num(p, "amplitude", "potential.amplitude", 0.0);
            const long ncap = ck.integer(p, "neighborCap", "potential.neighborCap", 0);
            if (ncap < 0)
                ck.complain("potential.neighborCap", "must be nonnegative");
            try {
                if (shape == "none") {
                    cfg.pot = PairPotential::none();
                } else if (shape == "squareWell") {
                    cfg.pot = PairPotential::squareWell(depth, rhc, range);
                } else if (shape == "smoothBump") {
                    cfg.pot = PairPotential::smoothBump(amp, range, rhc);
                } else if (shape == "softRepulsive") {
                    cfg.pot = PairPotential::softRepulsive(amp, range);
                } else {
                    ck.complain("potential.shape",
                                "must be none, squareWell, smoothBump or softRepulsive");
                }
                cfg.pot.neighborCap = static_cast<int>(ncap);
            } catch (const std::invalid_argument& e) {
                ck.complain("potential", e.what());
            }
        }
    }

    // kernel
    cfg.kernel.shape = KernelShape::Ball;
    cfg.kernel.amplitude = 1.0;
    cfg.kernel.radius = 1.0;
    cfg.kernel.delta = 1.0;
    cfg.kernel.dim = dim;
    if (root.contains("kernel")) {
        const json& k = root.at("kernel");
        if (!k.is_object()) {
            ck.complain("kernel", "must be an object");
        } else {
            ck.rejectUnknown(k, "kernel", {"shape", "amplitude", "radius", "delta"});
            const std::string shape = ck.str(k, "shape", "kernel.shape", "ball");
            if (shape == "ball")
                cfg.kernel.shape = KernelShape::Ball;
            else if (shape == "triangle")
                cfg.kernel.shape = KernelShape::Triangle;
            else
                ck.complain("kernel.shape", "must be ball or triangle");
            cfg.kernel.amplitude = ck.num(k, "amplitude", "kernel.amplitude", 1.0);
            cfg.kernel.radius = ck.num(k, "radius", "kernel.radius", 1.0);
            cfg.kernel.delta = ck.num(k, "delta", "kernel.delta", 1.0);
        }
    }
    if (!(cfg.kernel.amplitude > 0.0))
        ck.complain("kernel.amplitude", "must be positive");
    if (!(cfg.kernel.radius > 0.0))
        ck.complain("kernel.radius", "must be positive");
    if (!(cfg.kernel.delta > 0.0))
        ck.complain("kernel.delta", "must be positive");
    if (cfg.kernel.radius > 0.0 && cfg.kernel.delta > 0.0 && side > 0.0 &&
        cfg.kernel.supportRadius() > side / 2.0 * (1.0 + 1e-12))
        ck.complain("kernel", "support radius exceeds half the box side");

    // activity
    if (root.contains("activity")) {
        if (!root.at("activity").is_number())
            ck.complain("activity", "must be a number");
        else
            cfg.activity = root.at("activity").get<double>();
    }
    if (!(cfg.activity > 0.0))
        ck.complain("activity", "must be positive");

    // sampler
    if (root.contains("sampler")) {
        const json& s = root.at("sampler");
        if (!s.is_object()) {
            ck.complain("sampler", "must be an object");
        } else {
            ck.rejectUnknown(s, "sampler",
                             {"sweeps", "burnIn", "thinning", "pBirth", "pDeath", "pMove",
                              "moveRadius"});
            cfg.sampler.sweeps = ck.integer(s, "sweeps", "sampler.sweeps", cfg.sampler.sweeps);
            cfg.sampler.burnIn = ck.integer(s, "burnIn", "sampler.burnIn", cfg.sampler.burnIn);
            cfg.sampler.thinning = ck.integer(s, "thinning", "sampler.thinning", cfg.sampler.thinning);
            cfg.sampler.pBirth = ck.num(s, "pBirth", "sampler.pBirth", cfg.sampler.pBirth);
            cfg.sampler.pDeath = ck.num(s, "pDeath", "sampler.pDeath", cfg.sampler.pDeath);
            cfg.sampler.pMove = ck.num(s, "pMove", "sampler.pMove", cfg.sampler.pMove);
            cfg.sampler.moveRadius = ck.num(s, "moveRadius", "sampler.moveRadius", 0.0);
        }
    }
    if (cfg.sampler.sweeps < 1)
        ck.complain("sampler.sweeps", "must be positive");
    if (cfg.sampler.burnIn < 0)
        ck.complain("sampler.burnIn", "must be nonnegative");
    if (cfg.sampler.thinning < 1)
        ck.complain("sampler.thinning", "must be positive");
    {
        const double sum = cfg.sampler.pBirth + cfg.sampler.pDeath + cfg.sampler.pMove;
        if (cfg.sampler.pBirth < 0.0 || cfg.sampler.pDeath < 0.0 || cfg.sampler.pMove < 0.0 ||
            std::abs(sum - 1.0) > 1e-12)
            ck.complain("sampler", "pBirth, pDeath, pMove must be nonnegative and sum to 1");
        if (std::abs(cfg.sampler.pBirth - cfg.sampler.pDeath) > 1e-12)
            ck.complain("sampler", "pBirth and pDeath must be equal (reversibility)");
    }
    if (cfg.sampler.moveRadius < 0.0)
        ck.complain("sampler.moveRadius", "must be nonnegative");

    // kawasaki family
    if (root.contains("kawasaki")) {
        const json& k = root.at("kawasaki");
        if (!k.is_object()) {
            ck.complain("kawasaki", "must be an object");
        } else {
            ck.rejectUnknown(k, "kawasaki", {"family", "s", "u", "v"});
            cfg.kawasaki.family = ck.str(k, "family", "kawasaki.family", "s");
            cfg.kawasaki.s = ck.num(k, "s", "kawasaki.s", 0.5);
            cfg.kawasaki.u = ck.num(k, "u", "kawasaki.u", 0.0);
            cfg.kawasaki.v = ck.num(k, "v", "kawasaki.v", 1.0);
        }
    }
    if (cfg.kawasaki.family != "s" && cfg.kawasaki.family != "uv")
        ck.complain("kawasaki.family", "must be s or uv");
    for (auto [val, name] : {std::pair{cfg.kawasaki.s, "kawasaki.s"},
                             std::pair{cfg.kawasaki.u, "kawasaki.u"},
                             std::pair{cfg.kawasaki.v, "kawasaki.v"}}) {
        if (val < 0.0 || val > 1.0)
            ck.complain(name, "must lie in [0,1]");
    }

    // glauber
    if (root.contains("glauber")) {
        const json& g = root.at("glauber");
        if (!g.is_object()) {
            ck.complain("glauber", "must be an object");
        } else {
            ck.rejectUnknown(g, "glauber", {"s", "alpha"});
            cfg.glauber.s = ck.num(g, "s", "glauber.s", 0.0);
            cfg.glauber.alpha = ck.num(g, "alpha", "glauber.alpha", 1.0);
        }
    }
    if (cfg.glauber.s < 0.0 || cfg.glauber.s > 1.0)
        ck.complain("glauber.s", "must lie in [0,1]");
    if (!(cfg.glauber.alpha > 0.0))
        ck.complain("glauber.alpha", "must be positive");

    // diffusion
    if (root.contains("diffusion")) {
        const json& d = root.at("diffusion");
        if (!d.is_object()) {
            ck.complain("diffusion", "must be an object");
        } else {
            ck.rejectUnknown(d, "diffusion", {"s", "c", "dt", "blowUpGuard"});
            cfg.diffusion.s = ck.num(d, "s", "diffusion.s", 0.5);
            cfg.diffusion.c = ck.num(d, "c", "diffusion.c", 0.0);
            cfg.diffusion.dt = ck.num(d, "dt", "diffusion.dt", 0.01);
            cfg.diffusion.blowUpGuard = ck.num(d, "blowUpGuard", "diffusion.blowUpGuard", 50.0);
        }
    }
    if (cfg.diffusion.s < 0.0 || cfg.diffusion.s > 1.0)
        ck.complain("diffusion.s", "must lie in [0,1]");
    if (cfg.diffusion.c < 0.0)
        ck.complain("diffusion.c", "must be nonnegative (0 = derive from the kernel)");
    if (!(cfg.diffusion.dt > 0.0))
        ck.complain("diffusion.dt", "must be positive");
    if (!(cfg.diffusion.blowUpGuard > 0.0))
        ck.complain("diffusion.blowUpGuard", "must be positive");

    // run
    if (root.contains("run")) {
        const json& r = root.at("run");
        if (!r.is_object()) {
            ck.complain("run", "must be an object");
        } else {
            ck.rejectUnknown(r, "run", {"horizon", "samples", "replicas", "eventLog"});
            cfg.run.horizon = ck.num(r, "horizon", "run.horizon", 10.0);
            cfg.run.samples = ck.integer(r, "samples", "run.samples", 100);
            cfg.run.replicas = ck.integer(r, "replicas", "run.replicas", 200);
            cfg.run.eventLog = ck.boolean(r, "eventLog", "run.eventLog", false);
        }
    }
    if (!(cfg.run.horizon > 0.0))
        ck.complain("run.horizon", "must be positive");
    if (cfg.run.samples < 1)
        ck.complain("run.samples", "must be positive");
    if (cfg.run.replicas < 8)
        ck.complain("run.replicas", "must be at least 8");

    // verify
    if (root.contains("verify")) {
        const json& v = root.at("verify");
        if (!v.is_object()) {
            ck.complain("verify", "must be an object");
        } else {
            ck.rejectUnknown(v, "verify", {"mcPoints", "nCases", "bins", "deltaGrid", "quadGrid"});
            cfg.verify.mcPoints = static_cast<int>(ck.integer(v, "mcPoints", "verify.mcPoints", 64));
            cfg.verify.nCases = static_cast<int>(ck.integer(v, "nCases", "verify.nCases", 1000));
            cfg.verify.bins = static_cast<int>(ck.integer(v, "bins", "verify.bins", 40));
            cfg.verify.quadGrid = static_cast<int>(ck.integer(v, "quadGrid", "verify.quadGrid", 128));
            if (v.contains("deltaGrid")) {
                const json& g = v.at("deltaGrid");
                if (!g.is_array()) {
                    ck.complain("verify.deltaGrid", "must be an array of numbers");
                } else {
                    for (const auto& e : g) {
                        if (!e.is_number()) {
                            ck.complain("verify.deltaGrid", "must be an array of numbers");
                            break;
                        }
                        cfg.verify.deltaGrid.push_back(e.get<double>());
                    }
                }
            }
        }
    }
    if (cfg.verify.mcPoints < 1)
        ck.complain("verify.mcPoints", "must be positive");
    if (cfg.verify.nCases < 1)
        ck.complain("verify.nCases", "must be positive");
    if (cfg.verify.bins < 1)
        ck.complain("verify.bins", "must be positive");
    if (cfg.verify.quadGrid < 2 || cfg.verify.quadGrid % 2 != 0)
        ck.complain("verify.quadGrid", "must be even and at least 2");
    for (double dlt : cfg.verify.deltaGrid)
        if (!(dlt > 0.0))
            ck.complain("verify.deltaGrid", "entries must be positive");

    // fields
    if (root.contains("fields")) {
        const json& f = root.at("fields");
        if (!f.is_array()) {
            ck.complain("fields", "must be an array");
        } else {
            int idx = 0;
            for (const auto& e : f) {
                const std::string path = "fields[" + std::to_string(idx++) + "]";
                if (!e.is_object()) {
                    ck.complain(path, "must be an object");
                    continue;
                }
                ck.rejectUnknown(e, path, {"center", "radius", "amplitude"});
                FieldBump b;
                b.radius = ck.num(e, "radius", path + ".radius", 1.0);
                b.amplitude = ck.num(e, "amplitude", path + ".amplitude", 1.0);
                if (e.contains("center")) {
                    const json& c = e.at("center");
                    if (!c.is_array() || c.size() != static_cast<std::size_t>(dim)) {
                        ck.complain(path + ".center", "must be an array of box.d numbers");
                    } else {
                        for (std::size_t a = 0; a < c.size(); ++a) {
                            if (!c[a].is_number()) {
                                ck.complain(path + ".center", "must be an array of numbers");
                                break;
                            }
                            b.center[a] = c[a].get<double>();
                        }
                    }
                }
                if (!(b.radius > 0.0))
                    ck.complain(path + ".radius", "must be positive");
                else if (side > 0.0 && b.radius >= side / 2.0)
                    ck.complain(path + ".radius", "must be smaller than half the box side");
                cfg.fields.push_back(b);
            }
        }
    }

    // functional
    if (root.contains("functional")) {
        const json& fn = root.at("functional");
        if (!fn.is_object()) {
            ck.complain("functional", "must be an object");
        } else {
            ck.rejectUnknown(fn, "functional", {"outer", "coeffs"});
            cfg.outer = ck.str(fn, "outer", "functional.outer", "exp");
            if (fn.contains("coeffs")) {
                const json& c = fn.at("coeffs");
                if (!c.is_array()) {
                    ck.complain("functional.coeffs", "must be an array of numbers");
                } else {
                    for (const auto& e : c) {
                        if (!e.is_number()) {
                            ck.complain("functional.coeffs", "must be an array of numbers");
                            break;
                        }
                        cfg.outerCoeffs.push_back(e.get<double>());
                    }
                }
            }
        }
    }
    if (cfg.outer != "exp" && cfg.outer != "tanh" && cfg.outer != "poly")
        ck.complain("functional.outer", "must be exp, tanh or poly");
    if (cfg.outer == "poly" && (cfg.outerCoeffs.empty() || cfg.outerCoeffs.size() > 5))
        ck.complain("functional.coeffs", "poly needs 1 to 5 coefficients");

    // seed / outputDir
    if (root.contains("seed")) {
        const json& s = root.at("seed");
        if (!s.is_number_unsigned())
            ck.complain("seed", "must be a nonnegative integer");
        else
            cfg.seed = s.get<std::uint64_t>();
    }
    if (root.contains("outputDir")) {
        if (!root.at("outputDir").is_string() || root.at("outputDir").get<std::string>().empty())
            ck.complain("outputDir", "must be a nonempty string");
        else
            cfg.outputDir = root.at("outputDir").get<std::string>();
    }

    if (!ck.bad.empty())
        throw SchemaError(std::move(ck.bad));
    return cfg;
}

RunConfig loadConfig(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw SchemaError({"cannot open config file: " + path});
    std::ostringstream ss;
    ss << in.rdbuf();
    return parseConfig(ss.str());
}

std::string effectiveConfigJson(const RunConfig& cfg) {
    json j;
    j["box"] = {{"d", cfg.box.dim}, {"L", cfg.box.side}};
    const char* shape = "none";
    switch (cfg.pot.shape) {
    case PotentialShape::None: shape = "none"; break;
    case PotentialShape::SquareWell: shape = "squareWell"; break;
    case PotentialShape::SmoothBump: shape = "smoothBump"; break;
    case PotentialShape::SoftRepulsive: shape = "softRepulsive"; break;
    }
    j["potential"] = {{"shape", shape},
                      {"hardCore", cfg.pot.hardCore},
                      {"range", cfg.pot.range},
                      {"depth", cfg.pot.depth},
                      {"amplitude", cfg.pot.amplitude},
                      {"neighborCap", cfg.pot.neighborCap}};
    j["kernel"] = {{"shape", cfg.kernel.shape == KernelShape::Ball ? "ball" : "triangle"},
                   {"amplitude", cfg.kernel.amplitude},
                   {"radius", cfg.kernel.radius},
                   {"delta", cfg.kernel.delta}};
    j["activity"] = cfg.activity;
    j["sampler"] = {{"sweeps", cfg.sampler.sweeps},     {"burnIn", cfg.sampler.burnIn},
                    {"thinning", cfg.sampler.thinning}, {"pBirth", cfg.sampler.pBirth},
                    {"pDeath", cfg.sampler.pDeath},     {"pMove", cfg.sampler.pMove},
                    {"moveRadius", cfg.sampler.moveRadius}};
    j["kawasaki"] = {{"family", cfg.kawasaki.family},
                     {"s", cfg.kawasaki.s},
                     {"u", cfg.kawasaki.u},
                     {"v", cfg.kawasaki.v}};
    j["glauber"] = {{"s", cfg.glauber.s}, {"alpha", cfg.glauber.alpha}};
    j["diffusion"] = {{"s", cfg.diffusion.s},
                      {"c", cfg.diffusion.c},
                      {"dt", cfg.diffusion.dt},
                      {"blowUpGuard", cfg.diffusion.blowUpGuard}};
    j["run"] = {{"horizon", cfg.run.horizon},
                {"samples", cfg.run.samples},
                {"replicas", cfg.run.replicas},
                {"eventLog", cfg.run.eventLog}};
    j["verify"] = {{"mcPoints", cfg.verify.mcPoints},
                   {"nCases", cfg.verify.nCases},
                   {"bins", cfg.verify.bins},
                   {"deltaGrid", cfg.verify.deltaGrid},
                   {"quadGrid", cfg.verify.quadGrid}};
    json fields = json::array();
    for (const auto& b : cfg.fields) {
        std::vector<double> center(b.center.begin(), b.center.begin() + cfg.box.dim);
        fields.push_back({{"center", center}, {"radius", b.radius}, {"amplitude", b.amplitude}});
    }
    j["fields"] = fields;
    j["functional"] = {{"outer", cfg.outer}, {"coeffs", cfg.outerCoeffs}};
    j["seed"] = cfg.seed;
    j["outputDir"] = cfg.outputDir;
    return j.dump(2) + "\n";
}

RateSpec rateSpecFrom(const RunConfig& cfg) {
    HopKernel k = cfg.kernel;
    k.dim = cfg.box.dim;
    if (cfg.kawasaki.family == "uv")
        return RateSpec::kawasakiUV(cfg.kawasaki.u, cfg.kawasaki.v, k, cfg.activity);
    return RateSpec::kawasakiS(cfg.kawasaki.s, k, cfg.activity);
}

TestField fieldFrom(const RunConfig& cfg) {
    TestField psi;
    if (cfg.fields.empty()) {
        FieldBump b;
        for (int a = 0; a < cfg.box.dim; ++a) b.center[static_cast<std::size_t>(a)] = cfg.box.side / 2.0;
        b.radius = 0.2 * cfg.box.side;
        b.amplitude = 1.0;
        psi.bumps = {b};
    } else {
        psi.bumps = cfg.fields;
    }
    psi.validate(cfg.box);
    return psi;
}

OuterFn outerFrom(const RunConfig& cfg) {
    if (cfg.outer == "exp")
        return OuterFn::exponential();
    if (cfg.outer == "tanh")
        return OuterFn::tanh();
    return OuterFn::polynomial(cfg.outerCoeffs);
}

CylinderFunctional functionalFrom(const RunConfig& cfg) {
    return CylinderFunctional::single(fieldFrom(cfg), outerFrom(cfg));
}

} // namespace pointdyn
