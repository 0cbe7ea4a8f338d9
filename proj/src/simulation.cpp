#include "pointdyn/simulation.hpp"

#include "pointdyn/functionals.hpp"

namespace pointdyn {

Observable observableCount() {
    return Observable{"count", [](const Configuration& cfg, const TorusBox&) {
                          return static_cast<double>(cfg.size());
                      }};
}

Observable observableFieldSum(const TestField& psi, std::string name) {
    return Observable{std::move(name), [psi](const Configuration& cfg, const TorusBox& box) {
                          return psi.sumOver(cfg, box);
                      }};
}

Observable observablePairCount(double r, std::string name) {
    return Observable{std::move(name), [r](const Configuration& cfg, const TorusBox& box) {
                          double n = 0.0;
                          for (std::size_t i = 0; i < cfg.pts.size(); ++i)
                              for (std::size_t j = i + 1; j < cfg.pts.size(); ++j)
                                  if (box.dist(cfg.pts[i], cfg.pts[j]) < r)
                                      n += 1.0;
                          return n;
                      }};
}

} // namespace pointdyn
