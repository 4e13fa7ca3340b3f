#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "beamspace/linalg.hpp"
#include "beamspace/measurement.hpp"
#include "beamspace/rng.hpp"
#include "beamspace/types.hpp"

namespace beamspace {

/// Set of 1-based beam indices.
struct SupportSet {
    std::vector<Index> indices;

    Index size() const { return static_cast<Index>(indices.size()); }
};

/// Sparse channel estimate: nonzero only on `support`; for the support
/// detection estimator, per_component_peaks records the detected peak beam
/// of each path component in order.
template <typename Scalar>
struct ChannelEstimate {
    Vector<Scalar> vector;
    SupportSet support;
    std::vector<Index> per_component_peaks;
};

namespace detail {

/// 1-based argmax of |values| with lowest index winning ties.
template <typename Scalar>
Index argmax_magnitude(const Vector<Scalar>& values) {
    Index best = 0;
    Scalar best_mag = Scalar(-1);
    for (Index i = 0; i < values.size(); ++i) {
        const Scalar mag = std::abs(values(i));
        if (mag > best_mag) {
            best_mag = mag;
            best = i;
        }
    }
    return best + 1;
}

} // namespace detail

/// Contiguous modulo-N window of V beams around a detected peak, mapped to
/// 1-based indices. Even V spans [n* - V/2, n* + (V-2)/2]; odd V is the
/// symmetric window [n* - (V-1)/2, n* + (V-1)/2].
inline SupportSet detect_support(Index n_star, Index window, Index num_beams) {
    if (num_beams < 1 || n_star < 1 || n_star > num_beams) {
        throw std::invalid_argument("detect_support: peak index out of range");
    }
    if (window < 1 || window > num_beams) {
        throw std::invalid_argument("detect_support: window size out of range");
    }
    const Index lo = (window % 2 == 0) ? n_star - window / 2 : n_star - (window - 1) / 2;
    SupportSet support;
    support.indices.reserve(static_cast<std::size_t>(window));
    for (Index i = 0; i < window; ++i) {
        const Index wrapped = ((lo + i - 1) % num_beams + num_beams) % num_beams + 1;
        support.indices.push_back(wrapped);
    }
    return support;
}

/// Support-detection channel estimation. For each of the (L+1) path
/// components: detect the strongest beam by matched correlation, expand it
/// into its modulo-N window, least-squares fit the window, and subtract the
/// fitted contribution from the running residual. The reported estimate is
/// a single least-squares solve of the original measurement on the union of
/// all windows; the per-component fits only steer the peak detection.
template <typename Scalar>
ChannelEstimate<Scalar> sd_estimate(const Vector<Scalar>& z, const Combiner<Scalar>& w,
                                    Index num_nlos, Index window) {
    const Index n = w.antennas();
    const Index q = w.measurements();
    if (z.size() != q) {
        throw std::invalid_argument("sd_estimate: measurement length mismatch");
    }
    if (num_nlos < 0) {
        throw std::invalid_argument("sd_estimate: negative path count");
    }
    if (window < 1 || window * (num_nlos + 1) > n) {
        throw std::invalid_argument("sd_estimate: window too large");
    }

    Vector<Scalar> residual = z;
    std::vector<Index> peaks;
    std::vector<Index> support_union;
    for (Index i = 0; i <= num_nlos; ++i) {
        const Vector<Scalar> correlation = w.matrix.transpose() * residual;
        const Index peak = detail::argmax_magnitude(correlation);
        peaks.push_back(peak);
        const SupportSet window_support = detect_support(peak, window, n);
        const RealMatrix<Scalar> columns = select_columns(w.matrix, window_support.indices);
        const Vector<Scalar> fit = solve_least_squares(columns, residual);
        residual -= columns * fit;
        support_union.insert(support_union.end(), window_support.indices.begin(),
                             window_support.indices.end());
    }

    std::sort(support_union.begin(), support_union.end());
    support_union.erase(std::unique(support_union.begin(), support_union.end()),
                        support_union.end());
    if (static_cast<Index>(support_union.size()) > q) {
        throw std::runtime_error("sd_estimate: support larger than measurement count");
    }

    const RealMatrix<Scalar> columns = select_columns(w.matrix, support_union);
    const Vector<Scalar> coefficients = solve_least_squares(columns, z);

    ChannelEstimate<Scalar> estimate;
    estimate.vector = Vector<Scalar>::Zero(n);
    for (std::size_t i = 0; i < support_union.size(); ++i) {
        estimate.vector(support_union[i] - 1) = coefficients(static_cast<Index>(i));
    }
    estimate.support.indices = std::move(support_union);
    estimate.per_component_peaks = std::move(peaks);
    return estimate;
}

/// Orthogonal matching pursuit: greedily select the column most correlated
/// with the residual, re-fit all selected columns by least squares, and
/// update the residual, for `sparsity` iterations (stopping early once the
/// residual is numerically zero).
template <typename Scalar>
ChannelEstimate<Scalar> omp_estimate(const Vector<Scalar>& z, const Combiner<Scalar>& w,
                                     Index sparsity) {
    const Index n = w.antennas();
    const Index q = w.measurements();
    if (z.size() != q) {
        throw std::invalid_argument("omp_estimate: measurement length mismatch");
    }
    if (sparsity < 0 || sparsity > q || sparsity > n) {
        throw std::invalid_argument("omp_estimate: invalid sparsity level");
    }

    const Scalar stop_norm = Scalar(1e-14) * z.norm();
    Vector<Scalar> residual = z;
    std::vector<Index> selected;
    std::vector<char> in_set(static_cast<std::size_t>(n), 0);
    Vector<Scalar> coefficients;
    for (Index t = 0; t < sparsity; ++t) {
        if (residual.norm() <= stop_norm) {
            break;
        }
        Vector<Scalar> correlation = w.matrix.transpose() * residual;
        Index best = 0;
        Scalar best_mag = Scalar(-1);
        for (Index i = 0; i < n; ++i) {
            if (in_set[static_cast<std::size_t>(i)]) {
                continue;
            }
            const Scalar mag = std::abs(correlation(i));
            if (mag > best_mag) {
                best_mag = mag;
                best = i;
            }
        }
        selected.push_back(best + 1);
        in_set[static_cast<std::size_t>(best)] = 1;
        const RealMatrix<Scalar> columns = select_columns(w.matrix, selected);
        coefficients = solve_least_squares(columns, z);
        residual = z - columns * coefficients;
    }

    ChannelEstimate<Scalar> estimate;
    estimate.vector = Vector<Scalar>::Zero(n);
    for (std::size_t i = 0; i < selected.size(); ++i) {
        estimate.vector(selected[i] - 1) = coefficients(static_cast<Index>(i));
    }
    estimate.per_component_peaks = selected;
    std::sort(selected.begin(), selected.end());
    estimate.support.indices = std::move(selected);
    return estimate;
}

/// Sparsity-mask-detection baseline: observe every beam once through noise
/// (N pilot instants), keep the `keep` strongest observations as the mask,
/// and return the observed values on the mask.
template <typename Scalar>
ChannelEstimate<Scalar> smd_estimate(const BeamspaceChannel<Scalar>& channel, Scalar sigma2_ul,
                                     Index keep, Rng& rng) {
    const Index n = channel.vector.size();
    if (keep < 1 || keep > n) {
        throw std::invalid_argument("smd_estimate: keep count out of range");
    }
    if (sigma2_ul < Scalar(0)) {
        throw std::invalid_argument("smd_estimate: negative noise variance");
    }
    Vector<Scalar> observed = channel.vector;
    if (sigma2_ul > Scalar(0)) {
        for (Index i = 0; i < n; ++i) {
            const std::complex<double> g = rng.complex_gaussian(static_cast<double>(sigma2_ul));
            observed(i) += Complex<Scalar>(Scalar(g.real()), Scalar(g.imag()));
        }
    }
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index(0));
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
        const Scalar ma = std::abs(observed(a));
        const Scalar mb = std::abs(observed(b));
        return ma != mb ? ma > mb : a < b;
    });

    ChannelEstimate<Scalar> estimate;
    estimate.vector = Vector<Scalar>::Zero(n);
    std::vector<Index> mask(order.begin(), order.begin() + keep);
    std::sort(mask.begin(), mask.end());
    for (Index idx : mask) {
        estimate.vector(idx) = observed(idx);
    }
    for (Index& idx : mask) {
        idx += 1;
    }
    estimate.support.indices = std::move(mask);
    return estimate;
}

/// Normalized mean square error ||estimate - truth||^2 / ||truth||^2.
template <typename Scalar>
Scalar nmse(const Vector<Scalar>& estimate, const Vector<Scalar>& truth) {
    if (estimate.size() != truth.size()) {
        throw std::invalid_argument("nmse: dimension mismatch");
    }
    const Scalar denom = truth.squaredNorm();
    if (!(denom > Scalar(0))) {
        throw std::invalid_argument("nmse: zero-norm reference");
    }
    return (estimate - truth).squaredNorm() / denom;
}

} // namespace beamspace
