/* Shared simulation plumbing: event records, named observables, and the
 * generic sampling loop that turns an event-driven engine into a time series
 * on a uniform grid.
 *
 * Engines expose a two-phase step so the loop can sample the state between
 * events: nextEventTime(horizon) draws the next tentative event time (and
 * idles to the horizon when nothing can fire), fireEvent() executes it. The
 * recorded trajectory is right-continuous: a grid time coinciding with an
 * event sees the post-event state.
 */
#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pointdyn/geometry.hpp"

namespace pointdyn {

struct EventRecord {
    enum class Kind { Hop, Birth, Death, Null };
    double time = 0.0;
    Kind kind = Kind::Null;
    int xIndex = -1; // hopping/dying particle (pre-event indexing); -1 if n/a
    Point y{};       // hop target / birth location / removed position
};

inline const char* eventKindName(EventRecord::Kind k) {
    switch (k) {
    case EventRecord::Kind::Hop: return "hop";
    case EventRecord::Kind::Birth: return "birth";
    case EventRecord::Kind::Death: return "death";
    default: return "null";
    }
}

struct Observable {
    std::string name;
    std::function<double(const Configuration&, const TorusBox&)> fn;
};

struct SeriesPoint {
    double t;
    std::string name;
    double value;
};

using TimeSeries = std::vector<SeriesPoint>;

// N
Observable observableCount();
// <psi, gamma> = sum of the field over the configuration
class TestField; // functionals.hpp
Observable observableFieldSum(const TestField& psi, std::string name = "fieldSum");
// number of unordered pairs closer than r (brute force; observables run at
// sample times only, so O(N^2) is irrelevant)
Observable observablePairCount(double r, std::string name = "pairCount");

/* Uniform-grid sampling of an engine trajectory up to the horizon. Emits all
 * observables at t = 0 and at k*horizon/nSamples, k = 1..nSamples; appends
 * fired events to *log when given. horizon == 0 emits the initial values
 * only.
 *
 * Engine contract: nextEventTime(horizon) either returns the pending event
 * time (<= horizon), or idles the clock to the horizon and returns +infinity
 * when nothing fires in time. */
template <class Engine>
TimeSeries runEngine(Engine& eng, double horizon, const std::vector<Observable>& obs,
                     int nSamples, std::vector<EventRecord>* log = nullptr) {
    if (horizon < 0.0)
        throw std::invalid_argument("runEngine: horizon must be nonnegative");
    if (nSamples < 1)
        throw std::invalid_argument("runEngine: nSamples must be positive");
    TimeSeries out;
    auto emitAt = [&](double t) {
        for (const auto& o : obs) out.push_back(SeriesPoint{t, o.name, o.fn(eng.config(), eng.box())});
    };
    emitAt(0.0);
    if (horizon == 0.0)
        return out;
    const double h = horizon / nSamples;
    int nextK = 1;
    for (;;) {
        const double tNext = eng.nextEventTime(horizon);
        while (nextK <= nSamples && nextK * h < tNext) {
            emitAt(nextK * h);
            ++nextK;
        }
        if (tNext > horizon) // no pending event: clock idled to the horizon
            break;
        const EventRecord ev = eng.fireEvent();
        if (log)
            log->push_back(ev);
    }
    while (nextK <= nSamples) {
        emitAt(nextK * h);
        ++nextK;
    }
    return out;
}

} // namespace pointdyn
