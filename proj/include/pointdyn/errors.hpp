/* Error types shared across the library. All are exceptions: the conditions they
 * signal are contract violations or invalid inputs, never ordinary rejections. */
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pointdyn {

// Cell list queried against a configuration that changed since the last sync.
struct StaleCellList : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Neighbor query radius exceeds the cell-list cutoff.
struct CutoffExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A thinning acceptance probability exceeded 1: the envelope rate is not a
// valid upper bound, so the simulated law would be wrong. Aborts the run.
struct MajorantViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An operation needed derivatives the potential or functional does not have.
struct NotSmooth : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An integrator step moved the system further than the configured guard allows
// (usually means the time step is too large).
struct BlowUp : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical quadrature hit a non-finite integrand.
struct QuadratureFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A statistical estimator was asked to run on fewer samples than it needs.
struct InsufficientSamples : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Config file failed validation; carries every violation, not just the first.
struct SchemaError : std::runtime_error {
    std::vector<std::string> violations;

    explicit SchemaError(std::vector<std::string> v)
        : std::runtime_error(join(v)), violations(std::move(v)) {}

  private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out = "config validation failed:";
        for (const auto& s : v) {
            out += "\n  - ";
            out += s;
        }
        return out;
    }
};

} // namespace pointdyn
