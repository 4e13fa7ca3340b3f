#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "beamspace/rng.hpp"
#include "beamspace/types.hpp"

namespace beamspace {

enum class PathKind { LoS, NLoS };

/// One propagation path: complex gain and normalized spatial direction
/// psi = (d/lambda) sin(theta) in [-0.5, 0.5) for half-wavelength spacing.
template <typename Scalar>
struct PathComponent {
    Complex<Scalar> gain;
    Scalar spatial_direction;
    PathKind kind;
};

/// Multipath channel of one user in the antenna (spatial) domain.
/// paths[0] is the line-of-sight component, the rest are non-line-of-sight.
template <typename Scalar>
struct SpatialChannel {
    std::vector<PathComponent<Scalar>> paths;
    Vector<Scalar> vector;
    Index num_antennas = 0;
};

/// Unitary lens transform: row n is the conjugated steering vector of the
/// n-th grid direction, so multiplication maps antenna space to beam space.
template <typename Scalar>
struct BeamspaceTransform {
    Matrix<Scalar> matrix;
    RealVector<Scalar> grid_directions;
};

/// Beam-domain channel together with its per-path components.
template <typename Scalar>
struct BeamspaceChannel {
    Vector<Scalar> vector;
    std::vector<Vector<Scalar>> components;
};

template <typename Scalar>
struct ChannelGenConfig {
    Index num_antennas = 0;
    Index num_nlos = 0;
    Scalar los_gain_variance = Scalar(1);
    Scalar nlos_gain_variance = Scalar(0.31622776601683794); // 10^(-1/2)
};

/// Uniform-linear-array steering vector with the symmetric index set
/// {p - (N-1)/2 : p = 0..N-1}; entries (1/sqrt(N)) exp(-j 2 pi psi m).
template <typename Scalar>
Vector<Scalar> steering_vector(Scalar psi, Index num_antennas) {
    if (num_antennas < 1) {
        throw std::invalid_argument("steering_vector: need at least one antenna");
    }
    const Scalar scale = Scalar(1) / std::sqrt(Scalar(num_antennas));
    const Scalar two_pi = Scalar(2) * Scalar(EIGEN_PI);
    Vector<Scalar> a(num_antennas);
    for (Index p = 0; p < num_antennas; ++p) {
        const Scalar m = Scalar(p) - Scalar(num_antennas - 1) / Scalar(2);
        const Scalar phase = -two_pi * psi * m;
        a(p) = scale * Complex<Scalar>(std::cos(phase), std::sin(phase));
    }
    return a;
}

/// Normalized Dirichlet kernel sin(N pi x) / (N sin(pi x)); the removable
/// singularities at integer x evaluate to the analytic limit of +/-1.
template <typename Scalar>
Scalar dirichlet_kernel(Scalar x, Index num_antennas) {
    if (num_antennas < 1) {
        throw std::invalid_argument("dirichlet_kernel: need at least one antenna");
    }
    const Scalar pi = Scalar(EIGEN_PI);
    const Scalar denom = std::sin(pi * x);
    if (std::abs(denom) < Scalar(1e-12)) {
        const auto p = static_cast<long long>(std::llround(x));
        return ((num_antennas - 1) * p) % 2 == 0 ? Scalar(1) : Scalar(-1);
    }
    return std::sin(Scalar(num_antennas) * pi * x) / (Scalar(num_antennas) * denom);
}

/// Draws a Saleh-Valenzuela channel: one LoS path plus cfg.num_nlos NLoS
/// paths with complex Gaussian gains and directions uniform on [-0.5, 0.5).
template <typename Scalar>
SpatialChannel<Scalar> generate_spatial_channel(const ChannelGenConfig<Scalar>& cfg, Rng& rng) {
    if (cfg.num_antennas < 1) {
        throw std::invalid_argument("generate_spatial_channel: need at least one antenna");
    }
    if (cfg.num_nlos < 0) {
        throw std::invalid_argument("generate_spatial_channel: negative path count");
    }
    SpatialChannel<Scalar> ch;
    ch.num_antennas = cfg.num_antennas;
    const Index num_paths = cfg.num_nlos + 1;
    ch.paths.reserve(static_cast<std::size_t>(num_paths));
    for (Index i = 0; i < num_paths; ++i) {
        PathComponent<Scalar> path;
        const Scalar variance = (i == 0) ? cfg.los_gain_variance : cfg.nlos_gain_variance;
        const std::complex<double> g = rng.complex_gaussian(static_cast<double>(variance));
        path.gain = Complex<Scalar>(Scalar(g.real()), Scalar(g.imag()));
        path.spatial_direction = Scalar(rng.uniform(-0.5, 0.5));
        path.kind = (i == 0) ? PathKind::LoS : PathKind::NLoS;
        ch.paths.push_back(path);
    }
    const Scalar scale = std::sqrt(Scalar(cfg.num_antennas) / Scalar(num_paths));
    ch.vector = Vector<Scalar>::Zero(cfg.num_antennas);
    for (const auto& path : ch.paths) {
        ch.vector += path.gain * steering_vector(path.spatial_direction, cfg.num_antennas);
    }
    ch.vector *= scale;
    return ch;
}

/// Builds the N x N lens transform whose rows are steering vectors of the
/// N orthogonal grid directions (1/N)(n - (N+1)/2), n = 1..N.
template <typename Scalar>
BeamspaceTransform<Scalar> build_beamspace_transform(Index num_antennas) {
    if (num_antennas < 1) {
        throw std::invalid_argument("build_beamspace_transform: need at least one antenna");
    }
    BeamspaceTransform<Scalar> t;
    t.grid_directions.resize(num_antennas);
    t.matrix.resize(num_antennas, num_antennas);
    for (Index n = 0; n < num_antennas; ++n) {
        const Scalar direction =
            (Scalar(n + 1) - Scalar(num_antennas + 1) / Scalar(2)) / Scalar(num_antennas);
        t.grid_directions(n) = direction;
        t.matrix.row(n) = steering_vector(direction, num_antennas).adjoint();
    }
    return t;
}

/// Transforms a spatial channel and each of its path components to the
/// beam domain.
template <typename Scalar>
BeamspaceChannel<Scalar> to_beamspace(const SpatialChannel<Scalar>& ch,
                                      const BeamspaceTransform<Scalar>& t) {
    if (ch.vector.size() != t.matrix.cols()) {
        throw std::invalid_argument("to_beamspace: dimension mismatch");
    }
    BeamspaceChannel<Scalar> out;
    out.vector = t.matrix * ch.vector;
    out.components.reserve(ch.paths.size());
    for (const auto& path : ch.paths) {
        Vector<Scalar> c = path.gain * steering_vector(path.spatial_direction, ch.num_antennas);
        out.components.emplace_back(t.matrix * c);
    }
    return out;
}

} // namespace beamspace
