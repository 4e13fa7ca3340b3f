#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "beamspace/types.hpp"

namespace beamspace {

/// Relative singular-value cutoff below which a least-squares system is
/// treated as rank deficient.
inline constexpr double kSingularValueRatio = 1e-10;

/// Extracts the columns of a real matrix selected by 1-based indices.
template <typename Scalar>
RealMatrix<Scalar> select_columns(const RealMatrix<Scalar>& m, const std::vector<Index>& indices) {
    RealMatrix<Scalar> out(m.rows(), static_cast<Index>(indices.size()));
    for (Index j = 0; j < out.cols(); ++j) {
        out.col(j) = m.col(indices[static_cast<std::size_t>(j)] - 1);
    }
    return out;
}

/// Solves min_x || A x - b ||_2 for real A and complex b via SVD.
/// Throws std::runtime_error when the smallest singular value of A falls
/// below kSingularValueRatio times the largest.
template <typename Scalar>
Vector<Scalar> solve_least_squares(const RealMatrix<Scalar>& a, const Vector<Scalar>& b) {
    if (a.rows() != b.size()) {
        throw std::invalid_argument("solve_least_squares: dimension mismatch");
    }
    Eigen::JacobiSVD<RealMatrix<Scalar>> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(sv.size() - 1) < Scalar(kSingularValueRatio) * sv(0)) {
        throw std::runtime_error("solve_least_squares: singular system");
    }
    RealMatrix<Scalar> rhs(b.size(), 2);
    rhs.col(0) = b.real();
    rhs.col(1) = b.imag();
    RealMatrix<Scalar> x = svd.solve(rhs);
    Vector<Scalar> out(a.cols());
    out.real() = x.col(0);
    out.imag() = x.col(1);
    return out;
}

} // namespace beamspace
