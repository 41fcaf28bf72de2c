#pragma once

#include "bgl/bridge.hpp"
#include "bgl/chain.hpp"
#include "bgl/gauge.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bgl {

struct SolveConfig {
    int n_starts = 64;
    double tol = 1e-10;
    int max_iter = 100;
    double damping = 1.0;
    std::uint64_t seed = 7;
    double dedup_tol = 1e-6;

    void validate() const;
};

struct BetheSolution {
    BetheRoots roots;
    double residual;  // max_i |LHS_i - 1|
};

struct BetheSolveResult {
    std::vector<BetheSolution> solutions;
    int converged_starts = 0;
    int degenerate_starts = 0;
    int asymptotic_starts = 0;  // converged where the Jacobian is flat (roots drifting to infinity)
    std::vector<std::string> diagnostics;
};

BetheSolveResult solve_bethe(const ChainSpec& chain, const SolveConfig& cfg);

struct VacuumSolution {
    std::vector<double> sigma;
    double residual;  // max_j |LHS_j - branch|
};

struct VacuumSolveResult {
    std::vector<VacuumSolution> solutions;
    bool underdetermined = false;
    int converged_starts = 0;
    int other_branch_starts = 0;
    int degenerate_starts = 0;
    std::vector<std::string> diagnostics;
};

VacuumSolveResult solve_vacuum(const GaugeTheorySpec& gauge, Branch branch, const SolveConfig& cfg);

// Distance between root sets modulo magnon permutations, the period (XXZ) and u -> -u (open chains).
double root_set_distance(const ChainSpec& chain, const BetheRoots& a, const BetheRoots& b);

// Distance between vacua modulo the Weyl group images and sigma_j -> sigma_j + pi.
double vacuum_distance(const GaugeTheorySpec& gauge, const std::vector<double>& a, const std::vector<double>& b);

struct CrossCheckReport {
    VerificationReport report;
    int bethe_solutions = 0;
    std::vector<double> residuals;  // per Bethe solution, max over vacuum equations
};

// Solves the chain side, maps roots to sigma = scale * u and evaluates the vacuum equations.
CrossCheckReport cross_check(const GaugeTheorySpec& gauge, const DictionaryPreset& preset, const SolveConfig& cfg,
                             double tol = 1e-6);

}  // namespace bgl
