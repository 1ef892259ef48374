#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "tensecert/framework.hpp"
#include "tensecert/linalg.hpp"
#include "tensecert/stress.hpp"

namespace tensecert {

/// An n x (n-r-1) matrix whose columns span the null space of [P e]^T.
/// Row i is the Gale transform of point i.
struct GaleMatrix {
    Eigen::MatrixXd basis;

    int bar_dim() const { return static_cast<int>(basis.cols()); }
};

/// A Gale matrix extracted from linearly independent columns of a rank
/// n-r-1 stress matrix. Entries vanish at missing-edge positions: row i of
/// column k is zero whenever {i, column_nodes[k]} is a missing edge.
struct SpecialGaleMatrix {
    Eigen::MatrixXd basis;
    std::vector<int> column_nodes;  ///< 0-based node indices of the chosen columns
};

struct NodeSpanEntry {
    int node = 0;                ///< 0-based
    std::vector<int> point_set;  ///< the node plus its stressed/bar neighbors
    int span_dim = 0;
    bool pass = false;
};

/// Per-node check that {p_i} + {p_j : {i,j} carries a bar or nonzero stress}
/// affinely spans the ambient space.
struct NodeSpanReport {
    std::vector<NodeSpanEntry> nodes;

    bool all_pass() const;
};

struct GeneralPositionReport {
    bool in_general_position = false;
    bool exhaustive = true;
    long subsets_checked = 0;
    std::uint64_t seed = 0;            ///< RNG seed when sampled
    std::vector<int> witness_subset;   ///< an affinely dependent (r+1)-subset, if found
};

/// Orthonormal Gale matrix of a centered framework. For n == r+1 the result
/// has zero columns (certification entry points reject that case earlier).
GaleMatrix gale_matrix(const TensegrityFramework& fw, const Tolerances& tol = {});

/// Extract the special Gale matrix of a rank n-r-1 stress matrix from a
/// pivoted-QR column selection. Throws when rank(stress) < n-r-1 or when
/// the zero-pattern or kernel conditions fail to verify.
SpecialGaleMatrix special_gale_from_stress(const TensegrityFramework& fw,
                                           const Eigen::MatrixXd& stress,
                                           const Tolerances& tol = {});

NodeSpanReport node_span_condition(const TensegrityFramework& fw, const EdgePartition& partition,
                                   const Tolerances& tol = {});

/// True iff every (r+1)-subset of the given points is affinely independent.
/// Exhaustive up to 16 points; above that a seeded random sample is drawn
/// and the report says so.
GeneralPositionReport general_position_check(const Eigen::MatrixXd& points,
                                             const std::vector<int>& subset,
                                             const Tolerances& tol = {}, std::uint64_t seed = 0);

/// True iff the Gale rows indexed by the complement of J are linearly
/// independent.
bool gale_independence(const GaleMatrix& gale, const std::vector<int>& j_set,
                       const Tolerances& tol = {});

}  // namespace tensecert
