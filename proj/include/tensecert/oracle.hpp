#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/Dense>

#include "tensecert/framework.hpp"
#include "tensecert/linalg.hpp"

namespace tensecert {

/// Knobs for the falsification search. Deterministic given the seed:
/// restart k draws from its own derived stream and the lowest successful
/// restart index wins.
struct SearchBudget {
    int restarts = 64;
    int iterations = 2000;
    double initial_step = 0.1;
    std::uint64_t seed = 0;
};

/// True iff all pairwise squared distances agree within tol * (1 + |p|^2).
/// The configurations may live in different dimensions.
bool is_congruent(const Eigen::MatrixXd& p, const Eigen::MatrixXd& q, double tol);

/// Multi-start penalty descent looking for a configuration dominated by the
/// framework but not congruent to it, in the given target dimension.
/// nullopt means "not found within budget" and never claims nonexistence.
std::optional<Eigen::MatrixXd> search_dominated_noncongruent(const TensegrityFramework& fw,
                                                             int target_dim,
                                                             const SearchBudget& budget = {},
                                                             const Tolerances& tol = {});

}  // namespace tensecert
