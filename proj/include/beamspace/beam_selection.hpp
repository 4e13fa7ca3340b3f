#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "beamspace/linalg.hpp"
#include "beamspace/types.hpp"

namespace beamspace {

enum class UserKind {
    NIU, ///< non-interference user: its strongest beam is unshared
    IU   ///< interference user: strongest beam conflicts with another user
};

/// Outcome of beam selection: exactly N_RF distinct 1-based beam indices
/// (ascending) plus the interference classification of every user.
struct BeamSelection {
    std::vector<Index> beams;
    std::vector<UserKind> per_user_flag;
};

/// Dimension-reduced digital precoder with its transmit power budget.
template <typename Scalar>
struct PrecodingResult {
    Matrix<Scalar> precoder;
    Scalar power_budget = Scalar(0);
};

/// Zero-forcing precoder on the reduced channel (selected beams x users),
/// scaled by one scalar so that tr(P P^H) equals the power budget.
/// Throws std::runtime_error when the reduced channel is column-rank
/// deficient.
template <typename Scalar>
PrecodingResult<Scalar> zf_precoder(const Matrix<Scalar>& reduced_channel, Scalar rho) {
    const Index num_users = reduced_channel.cols();
    if (reduced_channel.rows() < num_users || num_users < 1) {
        throw std::runtime_error("zf_precoder: rank-deficient reduced channel");
    }
    if (!(rho > Scalar(0))) {
        throw std::invalid_argument("zf_precoder: power budget must be positive");
    }
    Eigen::JacobiSVD<Matrix<Scalar>> svd(reduced_channel,
                                         Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) < Scalar(kSingularValueRatio) * sv(0)) {
        throw std::runtime_error("zf_precoder: rank-deficient reduced channel");
    }
    // H (H^H H)^{-1} = U S^{-1} V^H
    Matrix<Scalar> raw = svd.matrixU() * sv.cwiseInverse().asDiagonal() *
                         svd.matrixV().adjoint();
    const Scalar unscaled_power = raw.squaredNorm();
    PrecodingResult<Scalar> out;
    out.precoder = raw * std::sqrt(rho / unscaled_power);
    out.power_budget = rho;
    return out;
}

/// Shannon sum rate over per-user SINRs of the reduced downlink
/// y = H_r^H P s + n, evaluated with the true reduced channel.
template <typename Scalar>
Scalar sum_rate(const Matrix<Scalar>& true_reduced_channel, const PrecodingResult<Scalar>& p,
                Scalar sigma2_dl) {
    if (true_reduced_channel.rows() != p.precoder.rows() ||
        true_reduced_channel.cols() != p.precoder.cols()) {
        throw std::invalid_argument("sum_rate: dimension mismatch");
    }
    if (!(sigma2_dl > Scalar(0))) {
        throw std::invalid_argument("sum_rate: noise power must be positive");
    }
    const Matrix<Scalar> gains = true_reduced_channel.adjoint() * p.precoder;
    const Index num_users = gains.rows();
    Scalar rate = Scalar(0);
    for (Index k = 0; k < num_users; ++k) {
        Scalar interference = Scalar(0);
        for (Index j = 0; j < num_users; ++j) {
            if (j != k) {
                interference += std::norm(gains(k, j));
            }
        }
        rate += std::log2(Scalar(1) + std::norm(gains(k, k)) / (interference + sigma2_dl));
    }
    return rate;
}

namespace detail {

/// Greedy selection metric: sum rate of a pseudo-inverse zero-forcing
/// precoder on the candidate reduced channel. The pseudo-inverse keeps the
/// metric defined while fewer beams than users are selected.
template <typename Scalar>
Scalar incremental_rate_metric(const Matrix<Scalar>& reduced_estimates) {
    const Index num_users = reduced_estimates.cols();
    Eigen::CompleteOrthogonalDecomposition<Matrix<Scalar>> cod(reduced_estimates.adjoint());
    Matrix<Scalar> raw = cod.pseudoInverse();
    const Scalar unscaled_power = raw.squaredNorm();
    if (!(unscaled_power > Scalar(0))) {
        return Scalar(0);
    }
    PrecodingResult<Scalar> p;
    p.precoder = raw * std::sqrt(Scalar(num_users) / unscaled_power);
    p.power_budget = Scalar(num_users);
    return sum_rate(reduced_estimates, p, Scalar(1));
}

} // namespace detail

/// Interference-aware beam selection on estimated beamspace channels.
/// Users whose strongest beam is unshared (NIU) contribute that beam
/// directly. Interference users are then served one at a time in user
/// order: each receives the beam from its own nonzero-energy candidates
/// that maximizes the incremental sum-rate metric of the partial selection,
/// so every user ends up covered by a beam it actually radiates on. Any
/// slots still open afterwards are filled greedily from the remaining
/// nonzero-energy beams, then by lowest-index unused beams, so the
/// selection always has exactly N_RF distinct beams.
template <typename Scalar>
BeamSelection ia_beam_select(const std::vector<Vector<Scalar>>& estimates, Index num_rf) {
    const auto num_users = static_cast<Index>(estimates.size());
    if (num_users < 1) {
        throw std::invalid_argument("ia_beam_select: need at least one user");
    }
    if (num_rf != num_users) {
        throw std::invalid_argument("ia_beam_select: selection assumes N_RF == K");
    }
    const Index num_beams = estimates[0].size();
    if (num_rf > num_beams) {
        throw std::invalid_argument("ia_beam_select: more RF chains than beams");
    }

    Matrix<Scalar> all(num_beams, num_users);
    std::vector<Index> top(static_cast<std::size_t>(num_users));
    for (Index k = 0; k < num_users; ++k) {
        const auto& est = estimates[static_cast<std::size_t>(k)];
        if (est.size() != num_beams) {
            throw std::invalid_argument("ia_beam_select: estimate dimension mismatch");
        }
        if (!(est.norm() > Scalar(0))) {
            throw std::invalid_argument("ia_beam_select: zero estimate");
        }
        all.col(k) = est;
        Index best = 0;
        Scalar best_mag = Scalar(-1);
        for (Index b = 0; b < num_beams; ++b) {
            const Scalar mag = std::abs(est(b));
            if (mag > best_mag) {
                best_mag = mag;
                best = b;
            }
        }
        top[static_cast<std::size_t>(k)] = best + 1;
    }

    BeamSelection selection;
    selection.per_user_flag.resize(static_cast<std::size_t>(num_users), UserKind::NIU);
    std::vector<char> selected(static_cast<std::size_t>(num_beams) + 1, 0);
    for (Index k = 0; k < num_users; ++k) {
        bool shared = false;
        for (Index j = 0; j < num_users; ++j) {
            if (j != k && top[static_cast<std::size_t>(j)] == top[static_cast<std::size_t>(k)]) {
                shared = true;
                break;
            }
        }
        selection.per_user_flag[static_cast<std::size_t>(k)] = shared ? UserKind::IU
                                                                      : UserKind::NIU;
        if (!shared && !selected[static_cast<std::size_t>(top[static_cast<std::size_t>(k)])]) {
            selection.beams.push_back(top[static_cast<std::size_t>(k)]);
            selected[static_cast<std::size_t>(top[static_cast<std::size_t>(k)])] = 1;
        }
    }

    auto reduced = [&](const std::vector<Index>& beams, Index extra) {
        Matrix<Scalar> r(static_cast<Index>(beams.size()) + 1, num_users);
        for (std::size_t i = 0; i < beams.size(); ++i) {
            r.row(static_cast<Index>(i)) = all.row(beams[i] - 1);
        }
        r.row(static_cast<Index>(beams.size())) = all.row(extra - 1);
        return r;
    };
    auto pick_best = [&](const std::vector<Index>& candidates) {
        Scalar best_metric = Scalar(-1);
        Index best_beam = 0;
        for (Index b : candidates) {
            const Scalar metric = detail::incremental_rate_metric(reduced(selection.beams, b));
            if (metric > best_metric) {
                best_metric = metric;
                best_beam = b;
            }
        }
        return best_beam;
    };

    for (Index k = 0; k < num_users && static_cast<Index>(selection.beams.size()) < num_rf;
         ++k) {
        if (selection.per_user_flag[static_cast<std::size_t>(k)] != UserKind::IU) {
            continue;
        }
        std::vector<Index> candidates;
        for (Index b = 1; b <= num_beams; ++b) {
            if (!selected[static_cast<std::size_t>(b)] && std::abs(all(b - 1, k)) > Scalar(0)) {
                candidates.push_back(b);
            }
        }
        if (candidates.empty()) {
            continue; // all of this user's beams are already serving others
        }
        const Index chosen = pick_best(candidates);
        selection.beams.push_back(chosen);
        selected[static_cast<std::size_t>(chosen)] = 1;
    }

    while (static_cast<Index>(selection.beams.size()) < num_rf) {
        std::vector<Index> pool;
        for (Index b = 1; b <= num_beams; ++b) {
            if (!selected[static_cast<std::size_t>(b)] &&
                all.row(b - 1).cwiseAbs().maxCoeff() > Scalar(0)) {
                pool.push_back(b);
            }
        }
        if (pool.empty()) {
            break;
        }
        const Index chosen = pick_best(pool);
        selection.beams.push_back(chosen);
        selected[static_cast<std::size_t>(chosen)] = 1;
    }
    for (Index b = 1; static_cast<Index>(selection.beams.size()) < num_rf && b <= num_beams;
         ++b) {
        if (!selected[static_cast<std::size_t>(b)]) {
            selection.beams.push_back(b);
            selected[static_cast<std::size_t>(b)] = 1;
        }
    }

    std::sort(selection.beams.begin(), selection.beams.end());
    return selection;
}

/// Extracts the reduced channel (selected beams x users) from per-user
/// full-dimension vectors.
template <typename Scalar>
Matrix<Scalar> reduce_to_beams(const std::vector<Vector<Scalar>>& channels,
                               const std::vector<Index>& beams) {
    const auto num_users = static_cast<Index>(channels.size());
    Matrix<Scalar> r(static_cast<Index>(beams.size()), num_users);
    for (Index k = 0; k < num_users; ++k) {
        for (std::size_t i = 0; i < beams.size(); ++i) {
            r(static_cast<Index>(i), k) = channels[static_cast<std::size_t>(k)](beams[i] - 1);
        }
    }
    return r;
}

} // namespace beamspace
