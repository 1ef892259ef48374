#pragma once

#include <Eigen/Dense>

namespace tensecert {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Numeric cutoffs used by every rank / definiteness / feasibility decision.
/// Rank and eigenvalue cutoffs are relative to the largest singular value or
/// eigenvalue, with an absolute floor of 1e-12.
struct Tolerances {
    double rank_rtol = 1e-9;  ///< relative singular-value cutoff
    double psd_rtol = 1e-9;   ///< relative eigenvalue cutoff
    double feas_tol = 1e-8;   ///< feasibility slack for sign/LP decisions

    void require_valid() const;
};

/// Result of a semidefiniteness test on a symmetric matrix.
struct PsdReport {
    bool is_psd = false;
    double min_eigenvalue = 0.0;
    double max_eigenvalue = 0.0;
    int rank = 0;  ///< eigenvalues above the relative cutoff
};

/// The three families of symmetric indicator matrices used throughout:
/// the single-edge Laplacian (e_i - e_j)(e_i - e_j)^T, the off-diagonal
/// pair indicator e_i e_j^T + e_j e_i^T, and the node border matrix
/// e_i e^T + e e_i^T.
enum class IndicatorKind { PairLaplacian, PairSymmetric, NodeBorder };

/// Single-edge Laplacian. Indices 0-based, i != j.
template <typename Scalar>
MatrixX<Scalar> pair_laplacian(int n, int i, int j) {
    MatrixX<Scalar> m = MatrixX<Scalar>::Zero(n, n);
    m(i, i) = Scalar(1);
    m(j, j) = Scalar(1);
    m(i, j) = Scalar(-1);
    m(j, i) = Scalar(-1);
    return m;
}

/// Symmetric off-diagonal pair indicator. Indices 0-based, i != j.
template <typename Scalar>
MatrixX<Scalar> pair_symmetric(int n, int i, int j) {
    MatrixX<Scalar> m = MatrixX<Scalar>::Zero(n, n);
    m(i, j) = Scalar(1);
    m(j, i) = Scalar(1);
    return m;
}

/// Node border matrix: ones along row i and column i, 2 at (i,i).
template <typename Scalar>
MatrixX<Scalar> node_border(int n, int i) {
    MatrixX<Scalar> m = MatrixX<Scalar>::Zero(n, n);
    m.row(i).setOnes();
    m.col(i).setOnes();
    m(i, i) = Scalar(2);
    return m;
}

/// Dispatch on kind; j is ignored for NodeBorder. Throws on bad indices.
template <typename Scalar>
MatrixX<Scalar> indicator_matrix(IndicatorKind kind, int n, int i, int j = -1);

/// Orthonormal basis of ker(M) as columns. Column count equals
/// cols(M) - numeric_rank(M); the basis satisfies ||M K|| <= rank_rtol ||M||.
Eigen::MatrixXd kernel_basis(const Eigen::MatrixXd& m, const Tolerances& tol = {});

/// Count of singular values above max(rank_rtol * sigma_max, 1e-12).
int numeric_rank(const Eigen::MatrixXd& m, const Tolerances& tol = {});

/// Eigen-decomposition based semidefiniteness test. The input must be
/// symmetric to within 1e-12 relative; larger asymmetry is rejected rather
/// than silently averaged away.
PsdReport psd_check(const Eigen::MatrixXd& m, const Tolerances& tol = {});

}  // namespace tensecert
