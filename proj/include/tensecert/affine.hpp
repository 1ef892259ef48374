#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "tensecert/framework.hpp"
#include "tensecert/gale.hpp"
#include "tensecert/linalg.hpp"
#include "tensecert/stress.hpp"

namespace tensecert {

enum class SignClass { Free, NonNeg, NonPos };

struct SupportEntry {
    int i = 0;  ///< 0-based, i < j
    int j = 0;
    SignClass sign = SignClass::Free;
};

/// The index set a candidate affine flex lives on: missing edges are free,
/// cables want nonnegative weights, struts nonpositive. With a stress in
/// hand only the slack cables/struts take part.
struct EdgeSupport {
    std::vector<SupportEntry> entries;

    int size() const { return static_cast<int>(entries.size()); }
};

/// Support without stress information: all missing edges, cables, struts.
EdgeSupport edge_support(const TensegrityFramework& fw);

/// Support given an edge partition: missing edges plus slack cables/struts.
EdgeSupport edge_support(const TensegrityFramework& fw, const EdgePartition& partition);

/// Assemble the symmetric matrix sum_k y_k (e_i e_j^T + e_j e_i^T) over the
/// support entries.
Eigen::MatrixXd support_matrix(int n, const EdgeSupport& support, const Eigen::VectorXd& y);

/// General: solve E(y) Z = e xi^T. RankFull: xi is forced to zero and the
/// system is E(y) Z = 0 (valid when a proper PSD stress of rank n-r-1
/// backs the support).
enum class FlexRegime { General, RankFull };

struct ReducedConstraintTerm {
    int support_index = 0;
    double coeff = 0.0;
};

/// What the feasibility decision looked at; embedded in certificates so a
/// verifier can re-run the same reduced system.
struct FeasibilityTranscript {
    FlexRegime regime = FlexRegime::General;
    bool empty_support = false;
    std::vector<std::vector<ReducedConstraintTerm>> reduced_constraints;
    int free_probe_dim = 0;
    double lp_objective = 0.0;
    int lp_iterations = 0;
    bool feasible = false;
};

struct FlexSolution {
    Eigen::VectorXd y;   ///< indexed by support entries, |y|_inf = 1
    Eigen::VectorXd xi;  ///< zero in the RankFull regime
};

/// Decide sign-constrained feasibility of the affine-flex system. Returns a
/// nonzero normalized solution when one exists (up to tolerance). The
/// decision runs in two steps: a kernel probe over the free (missing-edge)
/// coordinates, then a box-bounded LP whose positive objective detects
/// nonzero cone points.
std::optional<FlexSolution> affine_flex_feasibility(const TensegrityFramework& fw,
                                                    const GaleMatrix& gale,
                                                    const EdgeSupport& support, FlexRegime regime,
                                                    const Tolerances& tol = {},
                                                    FeasibilityTranscript* transcript = nullptr);

/// The translation part forced by centering:
/// x = -(1/n) E(y) e + (1/(2 n^2)) (e^T E(y) e) e.
Eigen::VectorXd x_from_y(const TensegrityFramework& fw, const EdgeSupport& support,
                         const Eigen::VectorXd& y);

/// Recover the symmetric r x r matrix with P Phi P^T = E(y) + x e^T + e x^T.
/// Requires a centered framework; throws when the residual shows y was not
/// actually feasible.
Eigen::MatrixXd phi_from_y(const TensegrityFramework& fw, const EdgeSupport& support,
                           const Eigen::VectorXd& y, const Eigen::VectorXd& x,
                           const Tolerances& tol = {});

struct DominatedBuild {
    double epsilon = 0.0;
    Eigen::MatrixXd transform;      ///< symmetric square root of I + epsilon * Phi
    Eigen::MatrixXd configuration;  ///< rows are the dominated points
};

/// Scale Phi down until I + epsilon Phi is positive definite and apply the
/// symmetric square root to the configuration. The result is verified to be
/// dominated and non-congruent before return.
DominatedBuild build_dominated_framework(const TensegrityFramework& fw, const Eigen::MatrixXd& phi,
                                         const Tolerances& tol = {});

struct EdgeResidualEntry {
    int i = 0;
    int j = 0;
    MemberKind kind = MemberKind::Bar;
    double residual = 0.0;  ///< |q_i - q_j|^2 - |p_i - p_j|^2
    bool ok = false;
};

struct DominationReport {
    std::vector<EdgeResidualEntry> edges;
    bool dominated = false;
};

/// Classify per-edge squared-length residuals: bars must hold exactly,
/// cables may only shrink, struts may only grow. The candidate configuration
/// may live in any dimension.
DominationReport domination_check(const TensegrityFramework& fw, const Eigen::MatrixXd& q,
                                  const Tolerances& tol = {});

/// Everything needed to re-verify a negative certificate independently.
struct AffineFlexWitness {
    EdgeSupport support;
    Eigen::VectorXd y;
    Eigen::VectorXd xi;
    Eigen::VectorXd x;
    Eigen::MatrixXd phi;
    double epsilon = 0.0;
    Eigen::MatrixXd transform;
    Eigen::MatrixXd configuration;
};

/// Chain x_from_y, phi_from_y and build_dominated_framework on a feasible
/// solution. The framework must be centered.
AffineFlexWitness build_flex_witness(const TensegrityFramework& fw, const EdgeSupport& support,
                                     const FlexSolution& solution, const Tolerances& tol = {});

}  // namespace tensecert
