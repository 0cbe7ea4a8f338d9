#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include "pointdyn/errors.hpp"
#include "pointdyn/geometry.hpp"
#include "pointdyn/rng.hpp"

using namespace pointdyn;

namespace {

Point randomPoint(Rng& rng, const TorusBox& box) {
    Point p{0.0, 0.0, 0.0};
    // Sample wider than the box on purpose: wrap() must canonicalize.
    for (int a = 0; a < box.dim; ++a)
        p[static_cast<std::size_t>(a)] = rng.uniformReal(-2.0 * box.side, 3.0 * box.side);
    return box.wrap(p);
}

// Reference distance: explicit minimum over all 3^d image offsets.
double imageDistance(const Point& x, const Point& y, const TorusBox& box) {
    double best = std::numeric_limits<double>::infinity();
    const int lo = -1, hi = 1;
    for (int mx = lo; mx <= hi; ++mx) {
        for (int my = (box.dim >= 2 ? lo : 0); my <= (box.dim >= 2 ? hi : 0); ++my) {
            for (int mz = (box.dim >= 3 ? lo : 0); mz <= (box.dim >= 3 ? hi : 0); ++mz) {
                const double dx = x[0] - y[0] + mx * box.side;
                const double dy = box.dim >= 2 ? x[1] - y[1] + my * box.side : 0.0;
                const double dz = box.dim >= 3 ? x[2] - y[2] + mz * box.side : 0.0;
                best = std::min(best, std::sqrt(dx * dx + dy * dy + dz * dz));
            }
        }
    }
    return best;
}

std::multiset<int> bruteNeighbors(const Point& x, double r, const Configuration& cfg,
                                  const TorusBox& box) {
    std::multiset<int> out;
    for (std::size_t j = 0; j < cfg.size(); ++j)
        if (box.dist(x, cfg.pts[j]) < r)
            out.insert(static_cast<int>(j));
    return out;
}

std::multiset<int> listNeighbors(const CellList& cells, const Point& x, double r,
                                 const Configuration& cfg) {
    std::multiset<int> out;
    for (const auto& nb : cells.neighbors(x, r, cfg)) out.insert(nb.index);
    return out;
}

} // namespace

TEST_CASE("torus wrap is idempotent and lands in [0,L)") {
    Rng rng(7);
    for (int d = 1; d <= 3; ++d) {
        const TorusBox box(d, 5.0);
        for (int k = 0; k < 200; ++k) {
            Point p{rng.uniformReal(-20.0, 20.0), rng.uniformReal(-20.0, 20.0),
                    rng.uniformReal(-20.0, 20.0)};
            for (int a = d; a < 3; ++a) p[static_cast<std::size_t>(a)] = 0.0;
            const Point w = box.wrap(p);
            for (int a = 0; a < d; ++a) {
                CHECK(w[static_cast<std::size_t>(a)] >= 0.0);
                CHECK(w[static_cast<std::size_t>(a)] < box.side);
            }
            const Point w2 = box.wrap(w);
            for (int a = 0; a < 3; ++a) CHECK(w2[static_cast<std::size_t>(a)] == w[static_cast<std::size_t>(a)]);
        }
    }
}

TEST_CASE("minimum-image distance matches the explicit image minimum") {
    Rng rng(11);
    for (int d = 1; d <= 3; ++d) {
        const TorusBox box(d, 4.0);
        for (int k = 0; k < 500; ++k) {
            const Point x = randomPoint(rng, box);
            const Point y = randomPoint(rng, box);
            CHECK(box.dist(x, y) == doctest::Approx(imageDistance(x, y, box)).epsilon(1e-12));
            // symmetry and the delta components' range
            CHECK(box.dist(x, y) == doctest::Approx(box.dist(y, x)));
            const Point del = box.delta(x, y);
            for (int a = 0; a < d; ++a) {
                CHECK(del[static_cast<std::size_t>(a)] >= -box.side / 2.0 - 1e-12);
                CHECK(del[static_cast<std::size_t>(a)] <= box.side / 2.0 + 1e-12);
            }
        }
    }
}

TEST_CASE("distance is a metric on random triples (triangle inequality)") {
    Rng rng(13);
    const TorusBox box(2, 6.0);
    for (int k = 0; k < 300; ++k) {
        const Point a = randomPoint(rng, box);
        const Point b = randomPoint(rng, box);
        const Point c = randomPoint(rng, box);
        CHECK(box.dist(a, c) <= box.dist(a, b) + box.dist(b, c) + 1e-12);
        CHECK(box.dist(a, a) == 0.0);
    }
}

TEST_CASE("cell list reproduces brute-force neighbor queries") {
    Rng rng(17);
    for (int d = 1; d <= 3; ++d) {
        // Side/cutoff chosen so some boxes have fewer than three cells per
        // axis, which exercises the duplicate-cell wrap path.
        for (double cutoff : {0.7, 1.9}) {
            const TorusBox box(d, 4.0);
            for (int rep = 0; rep < 30; ++rep) {
                Configuration cfg;
                const int n = 1 + static_cast<int>(rng.uniformBelow(40));
                for (int i = 0; i < n; ++i) cfg.addPoint(randomPoint(rng, box));
                CellList cells(box, cutoff);
                cells.build(cfg);
                for (int q = 0; q < 10; ++q) {
                    const Point x = randomPoint(rng, box);
                    const double r = rng.uniformReal(0.0, cutoff);
                    CHECK(listNeighbors(cells, x, r, cfg) == bruteNeighbors(x, r, cfg, box));
                }
            }
        }
    }
}

TEST_CASE("cell list incremental maintenance tracks insert, move and swap-removal") {
    Rng rng(19);
    const TorusBox box(2, 5.0);
    const double cutoff = 1.1;
    Configuration cfg;
    for (int i = 0; i < 12; ++i) cfg.addPoint(randomPoint(rng, box));
    CellList cells(box, cutoff);
    cells.build(cfg);

    for (int step = 0; step < 400; ++step) {
        const double u = rng.uniform01();
        if (u < 0.3) {
            cfg.addPoint(randomPoint(rng, box));
            cells.onInsert(cfg);
        } else if (u < 0.6 && cfg.size() > 1) {
            const int i = static_cast<int>(rng.uniformBelow(cfg.size()));
            cfg.removePointSwap(i);
            cells.onRemoveSwap(cfg, i);
        } else if (cfg.size() > 0) {
            const int i = static_cast<int>(rng.uniformBelow(cfg.size()));
            const Point old = cfg.pts[static_cast<std::size_t>(i)];
            cfg.movePoint(i, randomPoint(rng, box));
            cells.onMove(cfg, i, old);
        }
        const Point x = randomPoint(rng, box);
        const double r = rng.uniformReal(0.0, cutoff);
        CHECK(listNeighbors(cells, x, r, cfg) == bruteNeighbors(x, r, cfg, box));
    }
}

TEST_CASE("cell list rejects stale configurations and oversized query radii") {
    const TorusBox box(1, 5.0);
    Configuration cfg;
    cfg.addPoint(Point{1.0, 0.0, 0.0});
    CellList cells(box, 1.0);
    cells.build(cfg);
    CHECK_THROWS_AS((void)cells.neighbors(Point{0.0, 0.0, 0.0}, 2.0, cfg), CutoffExceeded);
    cfg.addPoint(Point{2.0, 0.0, 0.0}); // mutated without telling the cell list
    CHECK_THROWS_AS((void)cells.neighbors(Point{0.0, 0.0, 0.0}, 0.5, cfg), StaleCellList);
}

TEST_CASE("box constructor validates its arguments") {
    CHECK_THROWS_AS(TorusBox(0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(TorusBox(4, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(TorusBox(2, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(TorusBox(2, -3.0), std::invalid_argument);
}
