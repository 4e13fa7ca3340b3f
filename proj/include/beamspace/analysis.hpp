#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "beamspace/types.hpp"

namespace beamspace {

/// Lower bound on the fraction of a path component's power captured by its
/// V strongest beams (V even).
template <typename Scalar>
Scalar power_ratio_lower_bound(Index num_antennas, Index retained) {
    if (num_antennas < 1) {
        throw std::invalid_argument("power_ratio_lower_bound: need at least one antenna");
    }
    if (retained % 2 != 0 || retained < 2 || retained > num_antennas) {
        throw std::invalid_argument("power_ratio_lower_bound: retained count must be even and "
                                    "within [2, N]");
    }
    const Scalar pi = Scalar(EIGEN_PI);
    Scalar sum = Scalar(0);
    for (Index i = 1; i <= retained / 2; ++i) {
        const Scalar s = std::sin(Scalar(2 * i - 1) * pi / (Scalar(2) * Scalar(num_antennas)));
        sum += Scalar(1) / (s * s);
    }
    return Scalar(2) * sum / (Scalar(num_antennas) * Scalar(num_antennas));
}

/// Fraction of total power carried by the V largest-magnitude entries.
template <typename Scalar>
Scalar empirical_power_ratio(const Vector<Scalar>& c, Index retained) {
    const Index n = c.size();
    if (retained < 1 || retained > n) {
        throw std::invalid_argument("empirical_power_ratio: retained count out of range");
    }
    const Scalar total = c.squaredNorm();
    if (!(total > Scalar(0))) {
        throw std::invalid_argument("empirical_power_ratio: zero vector");
    }
    std::vector<Scalar> powers(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        powers[static_cast<std::size_t>(i)] = std::norm(c(i));
    }
    std::nth_element(powers.begin(), powers.begin() + static_cast<std::ptrdiff_t>(n - retained),
                     powers.end());
    Scalar kept = Scalar(0);
    for (Index i = n - retained; i < n; ++i) {
        kept += powers[static_cast<std::size_t>(i)];
    }
    return kept / total;
}

/// Ratio of the aggregate side-beam amplitude to the peak amplitude in the
/// worst-case off-grid response.
template <typename Scalar>
Scalar eta(Index num_antennas) {
    if (num_antennas < 2) {
        throw std::invalid_argument("eta: need at least two antennas");
    }
    const Scalar pi = Scalar(EIGEN_PI);
    Scalar sum = Scalar(0);
    for (Index n = 1; n <= num_antennas; ++n) {
        sum += std::abs(Scalar(1) /
                        std::sin(Scalar(2 * n - 1) * pi / (Scalar(2) * Scalar(num_antennas))));
    }
    const Scalar peak = std::abs(Scalar(1) / std::sin(pi / (Scalar(2) * Scalar(num_antennas))));
    return (sum - peak) / peak;
}

/// Worst-case amplitude ratio between the second strongest and strongest
/// beams of an off-grid response; tends to 1/3 for large arrays.
template <typename Scalar>
Scalar kappa(Index num_antennas) {
    if (num_antennas < 2) {
        throw std::invalid_argument("kappa: need at least two antennas");
    }
    const Scalar pi = Scalar(EIGEN_PI);
    return std::abs(std::sin(pi / (Scalar(2) * Scalar(num_antennas))) /
                    std::sin(Scalar(3) * pi / (Scalar(2) * Scalar(num_antennas))));
}

/// Peak-amplitude threshold above which the detection probability bound
/// applies. Returns std::nullopt when the denominator is non-positive, i.e.
/// the bound is vacuous for this mutual coherence.
template <typename Scalar>
std::optional<Scalar> amplitude_threshold(Scalar sigma2_ul, Scalar alpha, Scalar mu,
                                          Index num_antennas) {
    if (!(alpha > Scalar(0))) {
        throw std::invalid_argument("amplitude_threshold: alpha must be positive");
    }
    if (sigma2_ul < Scalar(0)) {
        throw std::invalid_argument("amplitude_threshold: negative noise variance");
    }
    if (num_antennas < 2) {
        throw std::invalid_argument("amplitude_threshold: need at least two antennas");
    }
    const Scalar denom = (Scalar(1) - mu) * (Scalar(1) - kappa<Scalar>(num_antennas)) -
                         Scalar(2) * mu * eta<Scalar>(num_antennas);
    if (!(denom > Scalar(0))) {
        return std::nullopt;
    }
    const Scalar numer = std::sqrt(Scalar(8) * sigma2_ul * (Scalar(1) + alpha) *
                                   std::log(Scalar(num_antennas)));
    return numer / denom;
}

/// Lower bound on the probability that the strongest beam is correctly
/// detected when the peak amplitude satisfies the threshold.
template <typename Scalar>
Scalar detection_probability_lower_bound(Index num_antennas, Scalar alpha) {
    if (num_antennas < 2) {
        throw std::invalid_argument("detection_probability_lower_bound: need N >= 2");
    }
    if (!(alpha > Scalar(0))) {
        throw std::invalid_argument("detection_probability_lower_bound: alpha must be positive");
    }
    const Scalar n = Scalar(num_antennas);
    const Scalar log_n = std::log(n);
    const Scalar deficit =
        Scalar(1) / (std::pow(n, alpha + Scalar(1)) *
                     std::sqrt(Scalar(EIGEN_PI) * (Scalar(1) + alpha) * log_n));
    return std::pow(Scalar(1) - deficit, n);
}

/// |c_i^H c_j| / (||c_i|| ||c_j||), the normalized cross-correlation of two
/// beam-domain path components.
template <typename Scalar>
Scalar orthogonality_defect(const Vector<Scalar>& c_i, const Vector<Scalar>& c_j) {
    if (c_i.size() != c_j.size()) {
        throw std::invalid_argument("orthogonality_defect: dimension mismatch");
    }
    const Scalar ni = c_i.norm();
    const Scalar nj = c_j.norm();
    if (!(ni > Scalar(0)) || !(nj > Scalar(0))) {
        throw std::invalid_argument("orthogonality_defect: zero vector");
    }
    return std::abs(c_i.dot(c_j)) / (ni * nj);
}

/// Named closed-form bounds for one (N, V, alpha, mu, sigma2) operating
/// point. `amplitude_threshold` is absent when vacuous.
template <typename Scalar>
struct BoundReport {
    Index num_antennas = 0;
    Index retained = 0;
    Scalar alpha = Scalar(0);
    Scalar mu = Scalar(0);
    Scalar sigma2_ul = Scalar(0);
    std::map<std::string, std::optional<Scalar>> values;
};

template <typename Scalar>
BoundReport<Scalar> make_bound_report(Index num_antennas, Index retained, Scalar alpha,
                                      Scalar mu, Scalar sigma2_ul) {
    BoundReport<Scalar> report;
    report.num_antennas = num_antennas;
    report.retained = retained;
    report.alpha = alpha;
    report.mu = mu;
    report.sigma2_ul = sigma2_ul;
    report.values["power_ratio_lb"] = power_ratio_lower_bound<Scalar>(num_antennas, retained);
    report.values["eta"] = eta<Scalar>(num_antennas);
    report.values["kappa"] = kappa<Scalar>(num_antennas);
    report.values["amplitude_threshold"] =
        amplitude_threshold<Scalar>(sigma2_ul, alpha, mu, num_antennas);
    report.values["prob_lb"] = detection_probability_lower_bound<Scalar>(num_antennas, alpha);
    return report;
}

} // namespace beamspace
