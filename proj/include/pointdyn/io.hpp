#pragma once

// Plain-text artifact formats. Everything is written with %.17g so that
// doubles round-trip exactly and reruns with the same seed produce
// byte-identical files. Provenance (version, config hash, seed) goes to a
// separate side file so the data formats stay free of headers beyond their
// own schema.

#include <cstdint>
#include <string>
#include <vector>

#include "pointdyn/geometry.hpp"
#include "pointdyn/simulation.hpp"
#include "pointdyn/verify.hpp"

namespace pointdyn {

inline constexpr const char* kVersion = "0.1.0";

// %.17g: exact round-trip, trailing zeros stripped.
std::string formatDouble(double v);

/* Snapshot file: records separated by blank lines, each record
 *   d L N seed sweepIndex
 * followed by N lines of d coordinates. */
void writeSnapshots(const std::string& path, const std::vector<Snapshot>& snaps,
                    const TorusBox& box);
std::vector<Snapshot> readSnapshots(const std::string& path, TorusBox& boxOut);

// Event log: one line per event, "t kind xIndex y...", kind spelled out.
void writeEventLog(const std::string& path, const std::vector<EventRecord>& events, int dim);

// Observable series: JSON lines {"t": ..., "name": ..., "value": ...}.
void writeSeries(const std::string& path, const TimeSeries& series);

// Limit-curve table: CSV with header delta,l2err,stderr,nSnapshots,quadResolution.
void writeLimitCurveCsv(const std::string& path, const LimitCurve& curve);

// Verification reports: a JSON array of report objects.
void writeReports(const std::string& path, const std::vector<VerificationReport>& reps);
std::string reportsToJson(const std::vector<VerificationReport>& reps);

// FNV-1a over bytes; used to fingerprint the effective configuration.
std::uint64_t fnv1aHash(const std::string& data);
std::string hashHex(std::uint64_t h);

// provenance.txt: version, config hash, seed; one "key value" per line.
void writeProvenance(const std::string& path, const std::string& configHash,
                     std::uint64_t seed);

} // namespace pointdyn
