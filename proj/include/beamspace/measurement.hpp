#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "beamspace/channel.hpp"
#include "beamspace/rng.hpp"
#include "beamspace/types.hpp"

namespace beamspace {

/// Orthonormal K x K pilot block; the K users transmit its columns over K
/// pilot instants.
template <typename Scalar>
struct PilotMatrix {
    Matrix<Scalar> matrix;
};

/// Analog combining matrix of the selecting network: Q x N with entries
/// +/- 1/sqrt(Q), so every column has exactly unit norm.
template <typename Scalar>
struct Combiner {
    RealMatrix<Scalar> matrix;

    Index measurements() const { return matrix.rows(); }
    Index antennas() const { return matrix.cols(); }
};

enum class NoiseMode {
    Faithful,  ///< Noise enters per pilot block and is colored by the combiner rows.
    WhiteNoise ///< Noise is added white on the stacked measurement vector.
};

/// Per-user stacked measurement vectors with their noise metadata.
template <typename Scalar>
struct MeasurementSet {
    std::vector<Vector<Scalar>> per_user;
    Scalar noise_variance = Scalar(0);
    NoiseMode mode = NoiseMode::Faithful;
};

namespace detail {

inline int bit_reverse(int value, int bits) {
    int out = 0;
    for (int b = 0; b < bits; ++b) {
        out = (out << 1) | ((value >> b) & 1);
    }
    return out;
}

} // namespace detail

/// Orthonormal pilot matrix. Powers of two use the +/-1 Hadamard
/// construction (sequency-ordered rows); other sizes fall back to the
/// unitary DFT matrix.
template <typename Scalar>
PilotMatrix<Scalar> generate_pilot_matrix(Index num_users) {
    if (num_users < 1) {
        throw std::invalid_argument("generate_pilot_matrix: need at least one user");
    }
    PilotMatrix<Scalar> pilot;
    pilot.matrix.resize(num_users, num_users);
    const bool power_of_two = (num_users & (num_users - 1)) == 0;
    if (power_of_two) {
        int bits = 0;
        while ((Index(1) << bits) < num_users) {
            ++bits;
        }
        const Scalar scale = Scalar(1) / std::sqrt(Scalar(num_users));
        for (Index i = 0; i < num_users; ++i) {
            const int row = detail::bit_reverse(static_cast<int>(i), bits);
            for (Index j = 0; j < num_users; ++j) {
                const int parity = __builtin_popcount(static_cast<unsigned>(row & j)) & 1;
                pilot.matrix(i, j) = Complex<Scalar>(parity ? -scale : scale, Scalar(0));
            }
        }
    } else {
        const Scalar scale = Scalar(1) / std::sqrt(Scalar(num_users));
        const Scalar step = Scalar(2) * Scalar(EIGEN_PI) / Scalar(num_users);
        for (Index i = 0; i < num_users; ++i) {
            for (Index j = 0; j < num_users; ++j) {
                const Scalar phase = -step * Scalar(i) * Scalar(j);
                pilot.matrix(i, j) = scale * Complex<Scalar>(std::cos(phase), std::sin(phase));
            }
        }
    }
    return pilot;
}

/// Draws a Q x N Bernoulli combiner with i.i.d. equiprobable +/- 1/sqrt(Q)
/// entries.
template <typename Scalar>
Combiner<Scalar> generate_combiner(Index num_measurements, Index num_antennas, Rng& rng) {
    if (num_measurements < 1 || num_antennas < 1) {
        throw std::invalid_argument("generate_combiner: dimensions must be positive");
    }
    Combiner<Scalar> w;
    w.matrix.resize(num_measurements, num_antennas);
    const Scalar magnitude = Scalar(1) / std::sqrt(Scalar(num_measurements));
    for (Index col = 0; col < num_antennas; ++col) {
        for (Index row = 0; row < num_measurements; ++row) {
            w.matrix(row, col) = rng.sign() > 0 ? magnitude : -magnitude;
        }
    }
    return w;
}

/// Largest absolute inner product between distinct combiner columns.
template <typename Scalar>
Scalar mutual_coherence(const Combiner<Scalar>& w) {
    const Index n = w.antennas();
    if (n < 2) {
        throw std::invalid_argument("mutual_coherence: need at least two columns");
    }
    RealMatrix<Scalar> gram = w.matrix.transpose() * w.matrix;
    Scalar mu = Scalar(0);
    for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
            mu = std::max(mu, std::abs(gram(i, j)));
        }
    }
    return mu;
}

/// Simulates the uplink pilot phase for all users at once and returns the
/// stacked Q-dimensional measurement vector of every user.
///
/// Faithful mode draws an antenna-domain noise matrix per pilot block and
/// passes it through the combiner rows and the pilot despreader, so the
/// effective per-entry noise variance is sigma2_ul * N / Q; it requires
/// Q = M K complete pilot blocks. WhiteNoise mode adds i.i.d. complex
/// Gaussian noise of variance sigma2_ul directly on the stacked vector and
/// carries no block structure.
template <typename Scalar>
MeasurementSet<Scalar> simulate_uplink(const std::vector<BeamspaceChannel<Scalar>>& channels,
                                       const Combiner<Scalar>& w, Scalar sigma2_ul,
                                       NoiseMode mode, Rng& rng) {
    const auto num_users = static_cast<Index>(channels.size());
    if (num_users < 1) {
        throw std::invalid_argument("simulate_uplink: need at least one user");
    }
    const Index q = w.measurements();
    const Index n = w.antennas();
    if (mode == NoiseMode::Faithful && q % num_users != 0) {
        throw std::invalid_argument("simulate_uplink: Q must be divisible by K");
    }
    if (sigma2_ul < Scalar(0)) {
        throw std::invalid_argument("simulate_uplink: negative noise variance");
    }
    Matrix<Scalar> h(n, num_users);
    for (Index k = 0; k < num_users; ++k) {
        if (channels[static_cast<std::size_t>(k)].vector.size() != n) {
            throw std::invalid_argument("simulate_uplink: channel dimension mismatch");
        }
        h.col(k) = channels[static_cast<std::size_t>(k)].vector;
    }

    Matrix<Scalar> z = w.matrix * h; // Q x K, noiseless part shared by both modes
    if (sigma2_ul > Scalar(0)) {
        if (mode == NoiseMode::WhiteNoise) {
            for (Index k = 0; k < num_users; ++k) {
                for (Index i = 0; i < q; ++i) {
                    const std::complex<double> g =
                        rng.complex_gaussian(static_cast<double>(sigma2_ul));
                    z(i, k) += Complex<Scalar>(Scalar(g.real()), Scalar(g.imag()));
                }
            }
        } else {
            const PilotMatrix<Scalar> pilot = generate_pilot_matrix<Scalar>(num_users);
            const Index num_blocks = q / num_users;
            Matrix<Scalar> block_noise(n, num_users);
            for (Index m = 0; m < num_blocks; ++m) {
                for (Index k = 0; k < num_users; ++k) {
                    for (Index i = 0; i < n; ++i) {
                        const std::complex<double> g =
                            rng.complex_gaussian(static_cast<double>(sigma2_ul));
                        block_noise(i, k) = Complex<Scalar>(Scalar(g.real()), Scalar(g.imag()));
                    }
                }
                z.block(m * num_users, 0, num_users, num_users) +=
                    w.matrix.middleRows(m * num_users, num_users) *
                    (block_noise * pilot.matrix.adjoint());
            }
        }
    }

    MeasurementSet<Scalar> out;
    out.noise_variance = sigma2_ul;
    out.mode = mode;
    out.per_user.reserve(static_cast<std::size_t>(num_users));
    for (Index k = 0; k < num_users; ++k) {
        out.per_user.emplace_back(z.col(k));
    }
    return out;
}

} // namespace beamspace
