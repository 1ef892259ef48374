#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tensecert/linalg.hpp"

namespace tensecert {

enum class MemberKind { Bar, Cable, Strut };

const char* to_string(MemberKind k);
MemberKind member_kind_from_string(const std::string& s);

/// A labelled edge, stored with i < j, node indices 0-based.
struct Edge {
    int i = 0;
    int j = 0;
    MemberKind kind = MemberKind::Bar;
};

/// A tensegrity framework: a simple connected graph with bar/cable/strut
/// labels plus an n x r configuration matrix (one point per row).
/// Values are immutable after construction; all operations are pure.
struct TensegrityFramework {
    int n = 0;                ///< node count
    int r = 0;                ///< declared ambient dimension
    std::vector<Edge> edges;  ///< canonical: i < j, sorted lexicographically
    Eigen::MatrixXd points;   ///< n x r configuration

    int bar_bound() const { return n - r - 1; }  ///< kernel dimension n - r - 1

    bool has_edge(int i, int j) const;
    const Edge* find_edge(int i, int j) const;
    std::vector<int> neighbors(int node) const;
    std::vector<std::pair<int, int>> missing_edges() const;
    int count(MemberKind k) const;
    bool pure_bar() const { return count(MemberKind::Cable) == 0 && count(MemberKind::Strut) == 0; }
};

struct Finding {
    enum class Severity { Error, Warning };
    Severity severity = Severity::Error;
    std::string code;
    std::string message;
    std::string location;  ///< e.g. "edges[3]" or "nodes[2]"
};

/// Outcome of structural validation; a framework is accepted by the
/// certification entry points iff the error list is empty.
struct ValidationReport {
    std::vector<Finding> findings;

    bool ok() const;
    std::size_t error_count() const;
};

/// Thrown on malformed framework or stress files.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parse the JSON framework format:
///   {"dimension": r, "nodes": [[x,y],...], "edges": [{"i":1,"j":2,"kind":"cable"},...]}
/// Node indices in files are 1-based. Unknown keys are rejected by name.
/// Coordinates are kept as given; centering happens separately.
TensegrityFramework parse_framework(const std::string& text);

/// Canonical JSON serialization; parse(serialize(fw)) reproduces fw.
std::string serialize_framework(const TensegrityFramework& fw);

/// Translate so the centroid sits at the origin. Distances are unchanged.
TensegrityFramework center_configuration(const TensegrityFramework& fw);

/// Structural checks: connectivity, affine dimension == r, n >= r+2.
/// Coincident points are reported as a warning only.
ValidationReport validate(const TensegrityFramework& fw, const Tolerances& tol = {});

/// Dimension of the affine hull of the rows of P.
int affine_dimension(const Eigen::MatrixXd& points, const Tolerances& tol = {});

}  // namespace tensecert
