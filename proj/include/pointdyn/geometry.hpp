/* Periodic box geometry: wrapping, minimum-image metric, and a cell list for
 * finite-range neighbor queries.
 *
 * The simulation domain is the flat torus [0,L)^d, d in {1,2,3}. Points are
 * std::array<double,3>; only the first d components are used, the rest stay 0.
 */
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "pointdyn/errors.hpp"

namespace pointdyn {

using Point = std::array<double, 3>;

struct TorusBox {
    int dim;     // 1, 2 or 3
    double side; // L > 0

    TorusBox(int d, double L);

    double volume() const;

    // Canonical representative in [0,L)^dim; idempotent.
    Point wrap(const Point& p) const;

    // Minimum-image displacement x - y, each component in [-L/2, L/2].
    Point delta(const Point& x, const Point& y) const;

    double dist2(const Point& x, const Point& y) const;
    double dist(const Point& x, const Point& y) const;
};

/* A finite point configuration in the box. `generation` increments on every
 * mutation so that acceleration structures can detect staleness. Removal is
 * swap-with-last so indices stay dense (the index of the former last particle
 * changes; the cell list mirrors that rename). */
struct Configuration {
    std::vector<Point> pts;
    std::uint64_t generation = 0;

    std::size_t size() const { return pts.size(); }

    void addPoint(const Point& p) {
        pts.push_back(p);
        ++generation;
    }

    // Removes index i by swapping the last particle into slot i.
    void removePointSwap(int i) {
        pts[static_cast<std::size_t>(i)] = pts.back();
        pts.pop_back();
        ++generation;
    }

    void movePoint(int i, const Point& p) {
        pts[static_cast<std::size_t>(i)] = p;
        ++generation;
    }
};

struct Neighbor {
    int index;
    Point point;
    double distance;
};

// A recorded configuration together with the provenance fields the snapshot
// file format carries (`d L N seed sweepIndex`).
struct Snapshot {
    Configuration cfg;
    std::uint64_t seed = 0;
    long sweepIndex = 0;
};

/* Uniform-grid cell list. Cell size >= cutoff, so scanning the 3^d block of
 * cells around a query point covers every candidate within the cutoff. For
 * boxes narrower than three cells per axis the scan wraps onto the same cell
 * more than once; duplicates are skipped so the query stays exact. */
class CellList {
  public:
    CellList(const TorusBox& box, double cutoff);

    double cutoff() const { return cutoff_; }
    std::uint64_t generation() const { return generation_; }

    // Full rebuild from the configuration; synchronizes the generation.
    void build(const Configuration& cfg);

    // Incremental maintenance. Call *after* the corresponding Configuration
    // mutation; each re-synchronizes the generation.
    void onInsert(const Configuration& cfg);                       // last point was appended
    void onRemoveSwap(const Configuration& cfg, int removedIndex); // removePointSwap(removedIndex)
    void onMove(const Configuration& cfg, int index, const Point& oldPos);

    // All points with dist(x, y) < r, each exactly once. Throws CutoffExceeded
    // if r > cutoff and StaleCellList if the configuration has moved on.
    std::vector<Neighbor> neighbors(const Point& x, double r, const Configuration& cfg) const;

    // Callback form used by the hot paths; same contract as neighbors().
    template <typename Fn>
    void forNeighbors(const Point& x, double r, const Configuration& cfg, Fn&& fn) const {
        checkQuery(r, cfg);
        const double r2 = r * r;
        scanCandidates(x, [&](int j) {
            const double d2 = box_.dist2(x, cfg.pts[static_cast<std::size_t>(j)]);
            if (d2 < r2) fn(j, std::sqrt(d2));
        });
    }

  private:
    void checkQuery(double r, const Configuration& cfg) const;
    int cellIndexOf(const Point& p) const;
    int axisCell(double coord) const;

    // Invokes fn(particleIndex) for every particle in the 3^dim cell block
    // around x, visiting each cell at most once.
    template <typename Fn>
    void scanCandidates(const Point& x, Fn&& fn) const;

    TorusBox box_;
    double cutoff_;
    int nPerAxis_;
    double cellSize_;
    std::vector<std::vector<int>> buckets_;
    std::vector<int> cellOf_; // cell index per particle
    std::uint64_t generation_ = 0;
};

template <typename Fn>
void CellList::scanCandidates(const Point& x, Fn&& fn) const {
    std::array<int, 3> c{0, 0, 0};
    for (int a = 0; a < box_.dim; ++a) c[static_cast<std::size_t>(a)] = axisCell(x[static_cast<std::size_t>(a)]);

    // Collect the (up to 27) wrapped cell ids, deduplicated for tiny grids.
    std::array<int, 27> cells{};
    int nCells = 0;
    const int lo = (box_.dim >= 1) ? -1 : 0;
    auto pushCell = [&](int id) {
        for (int k = 0; k < nCells; ++k)
            if (cells[static_cast<std::size_t>(k)] == id) return;
        cells[static_cast<std::size_t>(nCells++)] = id;
    };
    auto wrapCell = [&](int v) {
        v %= nPerAxis_;
        return v < 0 ? v + nPerAxis_ : v;
    };
    for (int dx = lo; dx <= 1; ++dx) {
        const int cx = wrapCell(c[0] + dx);
        if (box_.dim == 1) {
            pushCell(cx);
            continue;
        }
        for (int dy = -1; dy <= 1; ++dy) {
            const int cy = wrapCell(c[1] + dy);
            if (box_.dim == 2) {
                pushCell(cx + nPerAxis_ * cy);
                continue;
            }
            for (int dz = -1; dz <= 1; ++dz) {
                const int cz = wrapCell(c[2] + dz);
                pushCell(cx + nPerAxis_ * (cy + nPerAxis_ * cz));
            }
        }
    }
    for (int k = 0; k < nCells; ++k)
        for (int j : buckets_[static_cast<std::size_t>(cells[static_cast<std::size_t>(k)])]) fn(j);
}

} // namespace pointdyn
