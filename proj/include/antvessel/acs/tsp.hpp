#pragma once

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "antvessel/acs/core.hpp"
#include "antvessel/file_util.hpp"

namespace antvessel::acs {

struct City {
    std::string id;
    double x = 0, y = 0;
};

struct TspInstance {
    std::vector<City> cities;
    std::vector<std::vector<double>> dist;

    std::size_t size() const noexcept { return cities.size(); }

    static TspInstance from_cities(std::vector<City> cities) {
        TspInstance t;
        t.cities = std::move(cities);
        const auto n = t.cities.size();
        t.dist.assign(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                t.dist[i][j] = std::hypot(t.cities[i].x - t.cities[j].x, t.cities[i].y - t.cities[j].y);
        return t;
    }

    /// Whitespace-separated `id x y` lines; blank lines and '#' comments skipped.
    static TspInstance parse(const std::string& text) {
        std::vector<City> cities;
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line.resize(hash);
            std::istringstream ls(line);
            City c;
            if (!(ls >> c.id)) continue;
            if (!(ls >> c.x >> c.y)) throw DataError("TSP line " + std::to_string(lineno) + ": expected `id x y`");
            cities.push_back(c);
        }
        return from_cities(std::move(cities));
    }

    static TspInstance read(const fs::path& path) { return parse(read_file(path)); }

    double tour_length(const std::vector<std::size_t>& tour) const {
        double len = 0;
        for (std::size_t i = 0; i < tour.size(); ++i) len += dist[tour[i]][tour[(i + 1) % tour.size()]];
        return len;
    }
};

/// Greedy nearest-neighbor tour length from city 0; the usual basis for tau0.
inline double nearest_neighbor_length(const TspInstance& t) {
    const auto n = t.size();
    std::vector<char> seen(n, 0);
    std::size_t cur = 0;
    seen[0] = 1;
    double len = 0;
    for (std::size_t step = 1; step < n; ++step) {
        std::size_t next = n;
        for (std::size_t j = 0; j < n; ++j)
            if (!seen[j] && (next == n || t.dist[cur][j] < t.dist[cur][next])) next = j;
        len += t.dist[cur][next];
        seen[next] = 1;
        cur = next;
    }
    return len + t.dist[cur][0];
}

/// Classic TSP settings: 10 ants, tau0 = 1 / (n * L_nn).
inline AcsParams tsp_default_params(const TspInstance& t, std::uint64_t seed = 0) {
    AcsParams p;
    p.n_ants = 10;
    p.n_iterations = 100;
    p.tau0 = 1.0 / (static_cast<double>(t.size()) * nearest_neighbor_length(t));
    p.seed = seed;
    return p;
}

struct TspResult {
    std::vector<std::size_t> tour;
    double length = 0;
    /// Best-so-far length after each iteration.
    std::vector<double> history;
};

namespace detail {
struct EdgePheromone {
    std::vector<std::vector<double>>& tau;
    std::size_t from;
    double get(std::size_t j) const { return tau[from][j]; }
    void set(std::size_t j, double v) { tau[from][j] = tau[j][from] = v; }
};
}  // namespace detail

/// Ants build tours with the ACS transition rule (eta = 1 / distance), each
/// traversed edge gets the local update, and after every iteration the
/// best-so-far tour's edges get the global update with deposit 1 / L_best.
inline TspResult acs_tsp(const TspInstance& inst, const AcsParams& p) {
    p.validate();
    const auto n = inst.size();
    if (n < 3) throw UsageError("TSP needs at least 3 cities");
    std::vector<std::vector<double>> tau(n, std::vector<double>(n, p.tau0));
    auto eta_from = [&](std::size_t from) {
        return [&inst, from](std::size_t j) {
            const double d = inst.dist[from][j];
            return d > 0 ? 1.0 / d : 1e12;
        };
    };

    TspResult best;
    best.length = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> cand;
    for (int it = 0; it < p.n_iterations; ++it) {
        for (int a = 0; a < p.n_ants; ++a) {
            Rng rng(derive_seed({p.seed, static_cast<std::uint64_t>(it), static_cast<std::uint64_t>(a)}));
            std::uniform_int_distribution<std::size_t> start_pick(0, n - 1);
            std::vector<std::size_t> tour{start_pick(rng)};
            std::vector<char> seen(n, 0);
            seen[tour[0]] = 1;
            while (tour.size() < n) {
                cand.clear();
                for (std::size_t j = 0; j < n; ++j)
                    if (!seen[j]) cand.push_back(j);
                detail::EdgePheromone ph{tau, tour.back()};
                const auto next = acs_step(std::span<const std::size_t>(cand), ph, eta_from(tour.back()), p, rng);
                seen[next] = 1;
                tour.push_back(next);
            }
            detail::EdgePheromone closing{tau, tour.back()};
            closing.set(tour.front(), local_update(closing.get(tour.front()), p));
            const double len = inst.tour_length(tour);
            if (len < best.length) {
                best.length = len;
                best.tour = tour;
            }
        }
        const double deposit = 1.0 / best.length;
        for (std::size_t i = 0; i < n; ++i) {
            const auto u = best.tour[i], v = best.tour[(i + 1) % n];
            tau[u][v] = tau[v][u] = global_update(tau[u][v], deposit, p);
        }
        best.history.push_back(best.length);
    }
    if (best.tour.empty()) {
        best.tour.resize(n);
        std::iota(best.tour.begin(), best.tour.end(), 0);
        best.length = inst.tour_length(best.tour);
    }
    return best;
}

}  // namespace antvessel::acs
