#include "pointdyn/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace pointdyn {

namespace {

std::ofstream openOut(const std::string& path) {
    std::ofstream out(path, std::ios::binary); // binary: keep \n on every platform
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

std::string escapeJson(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        if (c == '"' || c == '\\')
            out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

} // namespace

std::string formatDouble(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void writeSnapshots(const std::string& path, const std::vector<Snapshot>& snaps,
                    const TorusBox& box) {
    std::ofstream out = openOut(path);
    bool first = true;
    for (const auto& snap : snaps) {
        if (!first)
            out << "\n";
        first = false;
        out << box.dim << " " << formatDouble(box.side) << " " << snap.cfg.size() << " "
            << snap.seed << " " << snap.sweepIndex << "\n";
        for (const auto& p : snap.cfg.pts) {
            for (int a = 0; a < box.dim; ++a)
                out << (a ? " " : "") << formatDouble(p[static_cast<std::size_t>(a)]);
            out << "\n";
        }
    }
}

std::vector<Snapshot> readSnapshots(const std::string& path, TorusBox& boxOut) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open for reading: " + path);
    std::vector<Snapshot> snaps;
    std::string line;
    bool haveBox = false;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::istringstream head(line);
        int d = 0;
        double L = 0.0;
        long n = 0;
        std::uint64_t seed = 0;
        long sweep = 0;
        if (!(head >> d >> L >> n >> seed >> sweep))
            throw std::runtime_error(path + ": malformed snapshot header: " + line);
        if (d < 1 || d > 3 || L <= 0.0 || n < 0)
            throw std::runtime_error(path + ": invalid snapshot header: " + line);
        if (!haveBox) {
            boxOut = TorusBox(d, L);
            haveBox = true;
        } else if (d != boxOut.dim || L != boxOut.side) {
            throw std::runtime_error(path + ": snapshot records disagree on the box");
        }
        Snapshot snap;
        snap.seed = seed;
        snap.sweepIndex = sweep;
        for (long k = 0; k < n; ++k) {
            if (!std::getline(in, line))
                throw std::runtime_error(path + ": truncated snapshot record");
            std::istringstream row(line);
            Point p{0.0, 0.0, 0.0};
            for (int a = 0; a < d; ++a)
                if (!(row >> p[static_cast<std::size_t>(a)]))
                    throw std::runtime_error(path + ": bad coordinate line: " + line);
            snap.cfg.addPoint(p);
        }
        snaps.push_back(std::move(snap));
    }
    if (!haveBox)
        throw std::runtime_error(path + ": no snapshots found");
    return snaps;
}

void writeEventLog(const std::string& path, const std::vector<EventRecord>& events, int dim) {
    std::ofstream out = openOut(path);
    for (const auto& ev : events) {
        out << formatDouble(ev.time) << " " << eventKindName(ev.kind) << " " << ev.xIndex;
        for (int a = 0; a < dim; ++a) out << " " << formatDouble(ev.y[static_cast<std::size_t>(a)]);
        out << "\n";
    }
}

void writeSeries(const std::string& path, const TimeSeries& series) {
    std::ofstream out = openOut(path);
    for (const auto& pt : series) {
        out << "{\"t\": " << formatDouble(pt.t) << ", \"name\": \"" << escapeJson(pt.name)
            << "\", \"value\": " << formatDouble(pt.value) << "}\n";
    }
}

void writeLimitCurveCsv(const std::string& path, const LimitCurve& curve) {
    std::ofstream out = openOut(path);
    out << "delta,l2err,stderr,nSnapshots,quadResolution\n";
    for (const auto& p : curve.points) {
        out << formatDouble(p.delta) << "," << formatDouble(p.l2err) << ","
            << formatDouble(p.se) << "," << p.nSnapshots << "," << p.quadResolution << "\n";
    }
}

std::string reportsToJson(const std::vector<VerificationReport>& reps) {
    // runtimeSeconds is deliberately left out: artifacts must be
    // byte-identical across reruns, and wall time is not.
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reps) {
        nlohmann::json j;
        j["name"] = r.name;
        j["pass"] = r.pass;
        j["statistic"] = r.statistic;
        j["threshold"] = r.threshold;
        j["se"] = r.se;
        j["sampleSizes"] = r.sampleSizes;
        j["seed"] = r.seed;
        j["note"] = r.note;
        arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
}

void writeReports(const std::string& path, const std::vector<VerificationReport>& reps) {
    std::ofstream out = openOut(path);
    out << reportsToJson(reps);
}

std::uint64_t fnv1aHash(const std::string& data) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hashHex(std::uint64_t h) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void writeProvenance(const std::string& path, const std::string& configHash,
                     std::uint64_t seed) {
    std::ofstream out = openOut(path);
    out << "version " << kVersion << "\n"
        << "configHash " << configHash << "\n"
        << "seed " << seed << "\n";
}

} // namespace pointdyn
