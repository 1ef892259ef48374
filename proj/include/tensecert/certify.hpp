#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tensecert/affine.hpp"
#include "tensecert/framework.hpp"
#include "tensecert/gale.hpp"
#include "tensecert/linalg.hpp"
#include "tensecert/oracle.hpp"
#include "tensecert/stress.hpp"

namespace tensecert {

inline constexpr const char* kToolName = "tensecert";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kCertificateSchemaVersion = 1;

enum class Verdict { UniversallyRigid, NotUniversallyRigid, DimensionallyRigid, Inconclusive };

/// Which argument closed the case. The wire labels (see to_string) are a
/// stable contract: "Thm2.1-span", "Thm1.1-direct", "Cor2.2-genpos",
/// "Thm2.3-bar", "affine-witness", "oracle-witness", "Thm4.3-rank".
enum class CertPath {
    SpanCondition,            ///< stress of full kernel rank + every node spans
    DirectInfeasibility,      ///< stress of full kernel rank + affine flex system infeasible
    GeneralPositionFallback,  ///< span borderline but per-node sets in general position
    BarSpan,                  ///< accepted on input, never emitted by this version
    AffineWitness,            ///< explicit affinely-dominated non-congruent configuration
    OracleWitness,            ///< dominated non-congruent configuration found by search
    RankCertificate,          ///< dimensional rigidity from stress rank
};

const char* to_string(Verdict v);
const char* to_string(CertPath p);
Verdict verdict_from_string(const std::string& s);
CertPath path_from_string(const std::string& s);

struct StressEvidence {
    StressAssignment stress;
    Eigen::MatrixXd matrix;
    std::vector<double> eigenvalues;
    int rank = 0;
    bool proper = false;
    bool psd = false;
    std::string origin;  ///< "searched" or "supplied"
};

struct NodeGeneralPositionEvidence {
    int node = 0;  ///< 0-based
    bool pass = false;
    bool exhaustive = true;
    long subsets_checked = 0;
};

struct OracleEvidence {
    Eigen::MatrixXd configuration;
    int dimension = 0;
    std::uint64_t seed = 0;
};

/// A self-contained, re-verifiable record of a rigidity decision. Everything
/// numeric that the verdict rests on is embedded so `verify` can recompute
/// residuals, eigenvalues and span dimensions independently.
struct RigidityCertificate {
    int schema_version = kCertificateSchemaVersion;
    std::string tool_name = kToolName;
    std::string tool_version = kToolVersion;
    Verdict verdict = Verdict::Inconclusive;
    std::optional<CertPath> path;  ///< absent when no theorem route concluded
    Tolerances tol;
    std::uint64_t seed = 0;
    TensegrityFramework framework;   ///< as given (original coordinates)
    Eigen::MatrixXd centered_points; ///< the configuration analysis ran on
    int kernel_dim = 0;              ///< n - r - 1
    std::string note;

    std::optional<StressEvidence> stress;
    std::optional<Eigen::MatrixXd> gale_basis;
    std::optional<NodeSpanReport> span_report;
    std::optional<std::vector<NodeGeneralPositionEvidence>> genpos_report;
    std::optional<EdgeSupport> support;
    std::optional<FeasibilityTranscript> feasibility;
    std::optional<AffineFlexWitness> witness;
    std::optional<OracleEvidence> oracle_witness;
};

struct CertifyOptions {
    Tolerances tol;
    std::uint64_t seed = 0;
    StressSearchBudget stress_budget;
    std::optional<StressAssignment> supplied_stress;
    bool use_oracle = false;
    SearchBudget oracle_budget;
};

/// Decide universal rigidity:
///  1. obtain a proper PSD stress matrix (supplied or searched);
///  2. with one of full kernel rank, check the per-node span condition, and
///     on failure decide the sign-constrained affine-flex system over the
///     slack support: infeasible certifies rigidity, feasible yields a
///     counterexample witness;
///  3. without one, decide the general affine-flex system: feasible yields a
///     witness, infeasible leaves the verdict Inconclusive.
/// Throws std::invalid_argument when validation fails.
RigidityCertificate certify_universal_rigidity(const TensegrityFramework& fw,
                                               const CertifyOptions& opts = {});

/// Dimensional rigidity from a stress matrix: rank n-r-1 decides, anything
/// less is Inconclusive. Throws when the weights are not an equilibrium
/// stress of the framework.
RigidityCertificate certify_dimensional_rigidity(const TensegrityFramework& fw,
                                                 const StressAssignment& stress,
                                                 const Tolerances& tol = {});

struct VerifyResult {
    bool ok = true;
    std::vector<std::string> discrepancies;
};

/// Recompute every numeric claim in the certificate from its embedded
/// evidence against the given framework.
VerifyResult verify_certificate(const RigidityCertificate& cert, const TensegrityFramework& fw,
                                const Tolerances* tol_override = nullptr);

std::string certificate_to_json(const RigidityCertificate& cert);
RigidityCertificate certificate_from_json(const std::string& text);

/// The standalone witness file format: y edge-indexed, xi, x, Phi row-major,
/// epsilon, A, q.
std::string witness_to_json(const AffineFlexWitness& witness);

}  // namespace tensecert
