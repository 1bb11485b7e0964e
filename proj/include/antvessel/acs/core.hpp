#pragma once

// Ant Colony System state transition and local pheromone update, shared by
// the TSP and pixel-walk front-ends.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "antvessel/acs/params.hpp"
#include "antvessel/rng.hpp"

namespace antvessel::acs {

/// Local update: tau <- (1 - phi) tau + phi tau0, floored at kTauMin.
inline double local_update(double tau, const AcsParams& p) noexcept {
    return std::max(kTauMin, (1.0 - p.phi) * tau + p.phi * p.tau0);
}

/// Global update toward a deposit value: tau <- (1 - rho) tau + rho deposit.
inline double global_update(double tau, double deposit, const AcsParams& p) noexcept {
    return std::max(kTauMin, (1.0 - p.rho) * tau + p.rho * deposit);
}

/// Pheromone storage addressed by candidate id. `Pheromone` must provide
/// `double get(id) const` and `void set(id, double)`; `eta(id)` returns the
/// heuristic desirability.
///
/// Pseudo-random proportional rule: with probability q0 take the candidate
/// maximizing tau * eta^beta (ties: lowest id), otherwise draw one with
/// probability proportional to that weight. If every weight is zero the draw
/// is uniform. The chosen candidate then receives the local update.
template <class Pheromone, class Eta>
std::size_t acs_step(std::span<const std::size_t> candidates, Pheromone& tau, Eta&& eta, const AcsParams& p, Rng& rng) {
    if (candidates.empty()) throw UsageError("acs_step: no candidates");
    thread_local std::vector<double> weight;
    weight.resize(candidates.size());
    double total = 0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const double e = eta(candidates[i]);
        weight[i] = tau.get(candidates[i]) * (p.beta == 0.0 ? 1.0 : std::pow(e, p.beta));
        total += weight[i];
    }
    const double q = uniform01(rng);
    std::size_t pick = 0;
    if (!(total > 0) || !std::isfinite(total)) {
        std::uniform_int_distribution<std::size_t> uni(0, candidates.size() - 1);
        pick = uni(rng);
    } else if (q < p.q0) {
        for (std::size_t i = 1; i < candidates.size(); ++i)
            if (weight[i] > weight[pick] || (weight[i] == weight[pick] && candidates[i] < candidates[pick])) pick = i;
    } else {
        const double r = uniform01(rng) * total;
        double acc = 0;
        pick = candidates.size() - 1;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            acc += weight[i];
            if (r < acc && weight[i] > 0) {
                pick = i;
                break;
            }
        }
        while (weight[pick] == 0 && pick > 0) --pick;
    }
    const std::size_t chosen = candidates[pick];
    tau.set(chosen, local_update(tau.get(chosen), p));
    return chosen;
}

/// Node-indexed pheromone over a flat vector.
struct NodePheromone {
    std::vector<double>& tau;
    double get(std::size_t i) const { return tau[i]; }
    void set(std::size_t i, double v) { tau[i] = v; }
};

}  // namespace antvessel::acs
