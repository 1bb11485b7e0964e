#pragma once

#include <cstdint>
#include <string>

#include "antvessel/error.hpp"

namespace antvessel::acs {

inline constexpr double kTauMin = 1e-12;

struct AcsParams {
    int n_ants = 64;
    int n_iterations = 30;
    double beta = 2.0;
    double q0 = 0.9;
    double rho = 0.1;
    double phi = 0.1;
    double tau0 = 0.1;
    /// Maximum steps per ant walk (segmentation mode).
    int walk_length = 50;
    std::uint64_t seed = 0;

    void validate() const {
        auto bad = [](const std::string& what) { throw UsageError("ACS parameter out of range: " + what); };
        if (n_ants < 1) bad("n_ants >= 1");
        if (n_iterations < 0) bad("n_iterations >= 0");
        if (!(beta >= 0)) bad("beta >= 0");
        if (!(q0 >= 0 && q0 <= 1)) bad("q0 in [0,1]");
        if (!(rho > 0 && rho < 1)) bad("rho in (0,1)");
        if (!(phi > 0 && phi < 1)) bad("phi in (0,1)");
        if (!(tau0 > 0)) bad("tau0 > 0");
        if (walk_length < 1) bad("walk_length >= 1");
    }
};

}  // namespace antvessel::acs
