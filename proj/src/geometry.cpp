#include "pointdyn/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace pointdyn {

TorusBox::TorusBox(int d, double L) : dim(d), side(L) {
    if (d < 1 || d > 3) throw std::invalid_argument("TorusBox: dim must be 1, 2 or 3");
    if (!(L > 0.0)) throw std::invalid_argument("TorusBox: side must be positive");
}

double TorusBox::volume() const {
    double v = 1.0;
    for (int a = 0; a < dim; ++a) v *= side;
    return v;
}

Point TorusBox::wrap(const Point& p) const {
    Point out{0.0, 0.0, 0.0};
    for (int a = 0; a < dim; ++a) {
        double v = std::fmod(p[static_cast<std::size_t>(a)], side);
        if (v < 0.0) v += side;
        if (v >= side) v = 0.0; // fmod can land exactly on side after the += above
        out[static_cast<std::size_t>(a)] = v;
    }
    return out;
}

Point TorusBox::delta(const Point& x, const Point& y) const {
    Point out{0.0, 0.0, 0.0};
    for (int a = 0; a < dim; ++a) {
        double d = x[static_cast<std::size_t>(a)] - y[static_cast<std::size_t>(a)];
        d -= side * std::nearbyint(d / side);
        out[static_cast<std::size_t>(a)] = d;
    }
    return out;
}

double TorusBox::dist2(const Point& x, const Point& y) const {
    double s = 0.0;
    for (int a = 0; a < dim; ++a) {
        double d = x[static_cast<std::size_t>(a)] - y[static_cast<std::size_t>(a)];
        d -= side * std::nearbyint(d / side);
        s += d * d;
    }
    return s;
}

double TorusBox::dist(const Point& x, const Point& y) const { return std::sqrt(dist2(x, y)); }

CellList::CellList(const TorusBox& box, double cutoff) : box_(box), cutoff_(cutoff) {
    if (!(cutoff > 0.0)) throw std::invalid_argument("CellList: cutoff must be positive");
    nPerAxis_ = std::max(1, static_cast<int>(std::floor(box.side / cutoff)));
    cellSize_ = box.side / nPerAxis_; // >= cutoff by construction
    int total = 1;
    for (int a = 0; a < box.dim; ++a) total *= nPerAxis_;
    buckets_.assign(static_cast<std::size_t>(total), {});
}

int CellList::axisCell(double coord) const {
    int c = static_cast<int>(std::floor(coord / cellSize_));
    if (c >= nPerAxis_) c = nPerAxis_ - 1; // coord == side due to rounding
    if (c < 0) c = 0;
    return c;
}

int CellList::cellIndexOf(const Point& p) const {
    int id = axisCell(p[0]);
    if (box_.dim >= 2) id += nPerAxis_ * axisCell(p[1]);
    if (box_.dim >= 3) id += nPerAxis_ * nPerAxis_ * axisCell(p[2]);
    return id;
}

void CellList::build(const Configuration& cfg) {
    for (auto& b : buckets_) b.clear();
    cellOf_.assign(cfg.pts.size(), -1);
    for (std::size_t i = 0; i < cfg.pts.size(); ++i) {
        const int id = cellIndexOf(cfg.pts[i]);
        cellOf_[i] = id;
        buckets_[static_cast<std::size_t>(id)].push_back(static_cast<int>(i));
    }
    generation_ = cfg.generation;
}

void CellList::onInsert(const Configuration& cfg) {
    const int i = static_cast<int>(cfg.pts.size()) - 1;
    const int id = cellIndexOf(cfg.pts[static_cast<std::size_t>(i)]);
    cellOf_.push_back(id);
    buckets_[static_cast<std::size_t>(id)].push_back(i);
    generation_ = cfg.generation;
}

void CellList::onRemoveSwap(const Configuration& cfg, int removedIndex) {
    const int last = static_cast<int>(cfg.pts.size()); // index the last particle had before the swap
    auto eraseFrom = [&](int cell, int idx) {
        auto& b = buckets_[static_cast<std::size_t>(cell)];
        for (std::size_t k = 0; k < b.size(); ++k) {
            if (b[k] == idx) {
                b[k] = b.back();
                b.pop_back();
                return;
            }
        }
        throw std::logic_error("CellList: bucket bookkeeping out of sync");
    };

    eraseFrom(cellOf_[static_cast<std::size_t>(removedIndex)], removedIndex);
    if (removedIndex != last) {
        // The former last particle now lives in slot removedIndex.
        const int cell = cellOf_[static_cast<std::size_t>(last)];
        eraseFrom(cell, last);
        buckets_[static_cast<std::size_t>(cell)].push_back(removedIndex);
        cellOf_[static_cast<std::size_t>(removedIndex)] = cell;
    }
    cellOf_.pop_back();
    generation_ = cfg.generation;
}

void CellList::onMove(const Configuration& cfg, int index, const Point& oldPos) {
    const int oldCell = cellIndexOf(oldPos);
    const int newCell = cellIndexOf(cfg.pts[static_cast<std::size_t>(index)]);
    if (oldCell != newCell) {
        auto& b = buckets_[static_cast<std::size_t>(oldCell)];
        for (std::size_t k = 0; k < b.size(); ++k) {
            if (b[k] == index) {
                b[k] = b.back();
                b.pop_back();
                break;
            }
        }
        buckets_[static_cast<std::size_t>(newCell)].push_back(index);
        cellOf_[static_cast<std::size_t>(index)] = newCell;
    }
    generation_ = cfg.generation;
}

void CellList::checkQuery(double r, const Configuration& cfg) const {
    if (r > cutoff_) throw CutoffExceeded("neighbor query radius exceeds cell-list cutoff");
    if (generation_ != cfg.generation) throw StaleCellList("cell list out of date with configuration");
}

std::vector<Neighbor> CellList::neighbors(const Point& x, double r, const Configuration& cfg) const {
    std::vector<Neighbor> out;
    forNeighbors(x, r, cfg, [&](int j, double d) {
        out.push_back(Neighbor{j, cfg.pts[static_cast<std::size_t>(j)], d});
    });
    return out;
}

} // namespace pointdyn
