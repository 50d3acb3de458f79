#pragma once

#include <cstddef>
#include <queue>
#include <vector>

#include "eyecontact/errors.hpp"

namespace eyecontact {

constexpr int kNoiseLabel = -1;

// Density-based clustering of 2D points, O(n^2) neighbor search. A point
// is core when its eps-neighborhood (including itself) holds at least
// min_pts points; clusters are the connected components of core points,
// border points join the first core cluster that reaches them. Iteration
// is in index order, so output is deterministic for a fixed input order.
//
// Returns one label per point: 0-based cluster id in discovery order, or
// kNoiseLabel.
inline std::vector<int> dbscan_2d(const std::vector<double>& xs, const std::vector<double>& ys,
                                  double eps, std::size_t min_pts) {
    if (xs.size() != ys.size()) throw DimensionMismatchError("dbscan_2d: coordinate size mismatch");
    if (!(eps > 0.0) || min_pts == 0) throw InvalidConfigError("dbscan_2d: eps > 0 and min_pts >= 1 required");

    const std::size_t n = xs.size();
    const double eps2 = eps * eps;

    auto neighbors_of = [&](std::size_t i) {
        std::vector<std::size_t> nb;
        for (std::size_t j = 0; j < n; ++j) {
            const double dx = xs[i] - xs[j];
            const double dy = ys[i] - ys[j];
            if (dx * dx + dy * dy <= eps2) nb.push_back(j);
        }
        return nb;
    };

    std::vector<int> labels(n, kNoiseLabel);
    std::vector<bool> visited(n, false);
    int next_cluster = 0;

    for (std::size_t i = 0; i < n; ++i) {
        if (visited[i]) continue;
        visited[i] = true;
        std::vector<std::size_t> nb = neighbors_of(i);
        if (nb.size() < min_pts) continue;  // not core; may become border later

        const int cluster = next_cluster++;
        labels[i] = cluster;
        std::queue<std::size_t> frontier;
        for (std::size_t j : nb) frontier.push(j);

        while (!frontier.empty()) {
            const std::size_t j = frontier.front();
            frontier.pop();
            if (labels[j] == kNoiseLabel) labels[j] = cluster;
            if (visited[j]) continue;
            visited[j] = true;
            std::vector<std::size_t> nb_j = neighbors_of(j);
            if (nb_j.size() >= min_pts) {
                for (std::size_t k : nb_j) frontier.push(k);
            }
        }
    }
    return labels;
}

}  // namespace eyecontact
