#include "tensecert/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace tensecert {

namespace {
constexpr double kAbsFloor = 1e-12;
}

void Tolerances::require_valid() const {
    if (!(rank_rtol > 0.0) || !(psd_rtol > 0.0) || !(feas_tol > 0.0)) {
        throw std::invalid_argument("tolerances must be strictly positive");
    }
}

template <typename Scalar>
MatrixX<Scalar> indicator_matrix(IndicatorKind kind, int n, int i, int j) {
    if (i < 0 || i >= n) throw std::invalid_argument("indicator_matrix: node index out of range");
    if (kind == IndicatorKind::NodeBorder) return node_border<Scalar>(n, i);
    if (j < 0 || j >= n || j == i) throw std::invalid_argument("indicator_matrix: pair index out of range");
    return kind == IndicatorKind::PairLaplacian ? pair_laplacian<Scalar>(n, i, j)
                                                : pair_symmetric<Scalar>(n, i, j);
}

template MatrixX<double> indicator_matrix<double>(IndicatorKind, int, int, int);
template MatrixX<long long> indicator_matrix<long long>(IndicatorKind, int, int, int);

Eigen::MatrixXd kernel_basis(const Eigen::MatrixXd& m, const Tolerances& tol) {
    tol.require_valid();
    if (m.size() == 0) return Eigen::MatrixXd::Identity(m.cols(), m.cols());
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cut = std::max(tol.rank_rtol * (sv.size() ? sv(0) : 0.0), kAbsFloor);
    int rank = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv(k) > cut) ++rank;
    return svd.matrixV().rightCols(m.cols() - rank);
}

int numeric_rank(const Eigen::MatrixXd& m, const Tolerances& tol) {
    tol.require_valid();
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& sv = svd.singularValues();
    const double cut = std::max(tol.rank_rtol * (sv.size() ? sv(0) : 0.0), kAbsFloor);
    int rank = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv(k) > cut) ++rank;
    return rank;
}

PsdReport psd_check(const Eigen::MatrixXd& m, const Tolerances& tol) {
    tol.require_valid();
    if (m.rows() != m.cols()) throw std::invalid_argument("psd_check: matrix not square");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * scale) {
        throw std::invalid_argument("psd_check: input not symmetric");
    }
    const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();  // ascending

    PsdReport rep;
    rep.min_eigenvalue = ev(0);
    rep.max_eigenvalue = ev(ev.size() - 1);
    rep.is_psd = rep.min_eigenvalue >= -tol.psd_rtol * std::max(1.0, std::abs(rep.max_eigenvalue));
    const double cut = std::max(tol.psd_rtol * std::max(1.0, rep.max_eigenvalue), kAbsFloor);
    for (Eigen::Index k = 0; k < ev.size(); ++k)
        if (ev(k) > cut) ++rep.rank;
    return rep;
}

}  // namespace tensecert
