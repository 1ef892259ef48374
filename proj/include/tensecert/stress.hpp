#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "tensecert/framework.hpp"
#include "tensecert/linalg.hpp"

namespace tensecert {

struct GaleMatrix;  // gale.hpp

/// Equilibrium edge weights, stored in the framework's canonical edge order.
struct StressAssignment {
    std::vector<double> weights;

    double infinity_norm() const;
};

/// The n x n symmetric matrix of an equilibrium stress: -w_ij off the
/// diagonal on edges, zero on missing edges, row sums zero. Its kernel
/// contains e and the columns of the (centered) configuration.
struct StressMatrix {
    Eigen::MatrixXd matrix;
    StressAssignment source;
};

/// Representation of a stress matrix in a Gale basis: matrix = Z psi Z^T.
struct StressDecomposition {
    Eigen::MatrixXd psi;  ///< (n-r-1) x (n-r-1) symmetric
};

/// Cables/struts split by whether they carry stress (|w| > feas_tol).
struct EdgePartition {
    std::vector<int> cables_stressed;   ///< indices into fw.edges
    std::vector<int> struts_stressed;
    std::vector<int> cables_slack;
    std::vector<int> struts_slack;
};

struct ProperReport {
    bool proper = true;
    std::vector<int> violations;  ///< offending edge indices
};

struct StressSearchBudget {
    int restarts = 32;
    int iterations = 200;
    std::uint64_t seed = 0;
};

struct StressSearchResult {
    StressAssignment stress;
    StressMatrix matrix;
    int rank = 0;
    double min_restricted_eigenvalue = 0.0;  ///< smallest eigenvalue in the Gale frame
};

/// Orthonormal basis of the linear space of equilibrium stresses (no sign
/// constraints). Empty when only the zero stress balances the configuration.
std::vector<StressAssignment> stress_space_basis(const TensegrityFramework& fw,
                                                 const Tolerances& tol = {});

/// Max node residual of sum_j w_ij (p_i - p_j).
double equilibrium_residual(const TensegrityFramework& fw, const StressAssignment& w);

/// Assemble and check the stress matrix; throws if the weights do not
/// balance the configuration within tolerance.
StressMatrix assemble_stress_matrix(const TensegrityFramework& fw, const StressAssignment& w,
                                    const Tolerances& tol = {});

/// Proper means w >= 0 on cables and w <= 0 on struts (within feas_tol).
ProperReport is_proper(const TensegrityFramework& fw, const StressAssignment& w,
                       const Tolerances& tol = {});

EdgePartition edge_partition(const TensegrityFramework& fw, const StressAssignment& w,
                             const Tolerances& tol = {});

/// Search for a proper positive semidefinite stress matrix of maximal rank.
/// A one-dimensional stress space is decided directly by testing both signs
/// of the basis vector; otherwise a seeded projected eigenvalue-ascent
/// heuristic runs over the properness cone. Returning nullopt means "not
/// found within budget", never "does not exist". Any returned candidate has
/// already passed is_proper and psd_check.
std::optional<StressSearchResult> find_proper_psd_stress(const TensegrityFramework& fw,
                                                         const Tolerances& tol = {},
                                                         const StressSearchBudget& budget = {});

/// Factor stress = Z psi Z^T through a Gale matrix. Throws when the residual
/// shows the input is not a stress matrix of this framework.
StressDecomposition psi_factor(const StressMatrix& stress, const GaleMatrix& gale,
                               const Tolerances& tol = {});

/// Parse the stress file format {"stresses":[{"i":1,"j":2,"w":-1.0},...]}.
/// Indices are 1-based, every pair must be an edge of the framework, and
/// omitted edges default to weight zero.
StressAssignment parse_stress_file(const std::string& text, const TensegrityFramework& fw);

}  // namespace tensecert
