#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "beamspace/channel.hpp"
#include "beamspace/measurement.hpp"
#include "beamspace/rng.hpp"

using namespace beamspace;

namespace {

BeamspaceChannel<double> beam_channel(const Vector<double>& v) {
    BeamspaceChannel<double> ch;
    ch.vector = v;
    return ch;
}

} // namespace

TEST_CASE("pilot matrix for four users matches the sign pattern") {
    const PilotMatrix<double> p = generate_pilot_matrix<double>(4);
    const double e[4][4] = {{1, 1, 1, 1}, {1, 1, -1, -1}, {1, -1, 1, -1}, {1, -1, -1, 1}};
    for (Index i = 0; i < 4; ++i) {
        for (Index j = 0; j < 4; ++j) {
            CHECK(std::abs(p.matrix(i, j) - std::complex<double>(0.5 * e[i][j], 0.0)) < 1e-15);
        }
    }
}

TEST_CASE("pilot matrix for a single user is the scalar one") {
    const PilotMatrix<double> p = generate_pilot_matrix<double>(1);
    CHECK(std::abs(p.matrix(0, 0) - std::complex<double>(1.0, 0.0)) < 1e-15);
}

TEST_CASE("pilot matrices are orthonormal for all supported sizes") {
    for (Index k : {Index(1), Index(2), Index(4), Index(8), Index(16), Index(6), Index(12)}) {
        const PilotMatrix<double> p = generate_pilot_matrix<double>(k);
        const Matrix<double> identity = Matrix<double>::Identity(k, k);
        CHECK((p.matrix * p.matrix.adjoint() - identity).norm() < 1e-12);
        CHECK((p.matrix.adjoint() * p.matrix - identity).norm() < 1e-12);
    }
}

TEST_CASE("combiner entries are exactly two-valued with unit-norm columns") {
    Rng rng = substream(3, {0});
    const Combiner<double> w = generate_combiner<double>(96, 256, rng);
    const double magnitude = 1.0 / std::sqrt(96.0);
    for (Index j = 0; j < w.antennas(); ++j) {
        for (Index i = 0; i < w.measurements(); ++i) {
            CHECK((w.matrix(i, j) == magnitude || w.matrix(i, j) == -magnitude));
        }
        CHECK(std::abs(w.matrix.col(j).norm() - 1.0) < 1e-12);
    }
}

TEST_CASE("combiner signs are balanced on average") {
    Rng rng = substream(10, {1});
    const Index q = 96;
    const Index n = 256;
    const Combiner<double> w = generate_combiner<double>(q, n, rng);
    const double mean = w.matrix.mean();
    const double bound = 3.0 / (std::sqrt(double(q * n)) * std::sqrt(double(q)));
    CHECK(std::abs(mean) < bound);
}

TEST_CASE("combiner generation is deterministic under a seed") {
    Rng a = substream(77, {2});
    Rng b = substream(77, {2});
    const Combiner<double> wa = generate_combiner<double>(32, 64, a);
    const Combiner<double> wb = generate_combiner<double>(32, 64, b);
    CHECK((wa.matrix - wb.matrix).norm() == 0.0);
}

TEST_CASE("mutual coherence of an orthonormal matrix is zero") {
    Combiner<double> w;
    w.matrix = RealMatrix<double>::Identity(8, 8);
    CHECK(mutual_coherence(w) < 1e-12);
}

TEST_CASE("mutual coherence of duplicated columns is one") {
    Rng rng = substream(4, {3});
    Combiner<double> w = generate_combiner<double>(16, 8, rng);
    w.matrix.col(5) = w.matrix.col(2);
    CHECK(std::abs(mutual_coherence(w) - 1.0) < 1e-12);
}

TEST_CASE("mutual coherence matches an exhaustive pair scan") {
    Rng rng = substream(5, {4});
    const Combiner<double> w = generate_combiner<double>(96, 256, rng);
    double expected = 0.0;
    for (Index i = 0; i < w.antennas(); ++i) {
        for (Index j = i + 1; j < w.antennas(); ++j) {
            double dot = 0.0;
            for (Index r = 0; r < w.measurements(); ++r) {
                dot += w.matrix(r, i) * w.matrix(r, j);
            }
            expected = std::max(expected, std::abs(dot));
        }
    }
    CHECK(std::abs(mutual_coherence(w) - expected) < 1e-12);
    CHECK(mutual_coherence(w) <= 1.0);
}

TEST_CASE("noiseless measurements equal the combined channel in both modes") {
    const Index n = 64;
    const Index k = 4;
    const Index q = 16;
    Rng rng_w = substream(6, {5});
    const Combiner<double> w = generate_combiner<double>(q, n, rng_w);
    Rng rng_h = substream(6, {6});
    std::vector<BeamspaceChannel<double>> channels;
    for (Index u = 0; u < k; ++u) {
        Vector<double> v(n);
        for (Index i = 0; i < n; ++i) {
            v(i) = rng_h.complex_gaussian(1.0);
        }
        channels.push_back(beam_channel(v));
    }
    Rng rng_n1 = substream(6, {7});
    Rng rng_n2 = substream(6, {7});
    const MeasurementSet<double> faithful =
        simulate_uplink(channels, w, 0.0, NoiseMode::Faithful, rng_n1);
    const MeasurementSet<double> white =
        simulate_uplink(channels, w, 0.0, NoiseMode::WhiteNoise, rng_n2);
    REQUIRE(faithful.per_user.size() == std::size_t(k));
    for (Index u = 0; u < k; ++u) {
        const Vector<double> expected = w.matrix * channels[std::size_t(u)].vector;
        CHECK((faithful.per_user[std::size_t(u)] - expected).norm() == 0.0);
        CHECK((faithful.per_user[std::size_t(u)] - white.per_user[std::size_t(u)]).norm() ==
              0.0);
        CHECK(faithful.per_user[std::size_t(u)].size() == q);
    }
}

TEST_CASE("faithful-mode noise variance is boosted by N over Q") {
    const Index n = 64;
    const Index k = 4;
    const Index q = 16;
    Rng rng_w = substream(8, {8});
    const Combiner<double> w = generate_combiner<double>(q, n, rng_w);
    std::vector<BeamspaceChannel<double>> channels(std::size_t(k),
                                                   beam_channel(Vector<double>::Zero(n)));
    Rng rng = substream(8, {9});
    double acc = 0.0;
    long count = 0;
    for (int trial = 0; trial < 1600; ++trial) {
        const MeasurementSet<double> meas =
            simulate_uplink(channels, w, 1.0, NoiseMode::Faithful, rng);
        for (Index u = 0; u < k; ++u) {
            acc += meas.per_user[std::size_t(u)].squaredNorm();
            count += q;
        }
    }
    const double variance = acc / double(count);
    const double expected = double(n) / double(q);
    CHECK(std::abs(variance - expected) / expected < 0.05);
}

TEST_CASE("white-mode noise variance matches sigma2 per entry") {
    const Index n = 32;
    const Index k = 4;
    const Index q = 16;
    Rng rng_w = substream(9, {10});
    const Combiner<double> w = generate_combiner<double>(q, n, rng_w);
    std::vector<BeamspaceChannel<double>> channels(std::size_t(k),
                                                   beam_channel(Vector<double>::Zero(n)));
    Rng rng = substream(9, {11});
    double acc = 0.0;
    long count = 0;
    for (int trial = 0; trial < 1600; ++trial) {
        const MeasurementSet<double> meas =
            simulate_uplink(channels, w, 1.0, NoiseMode::WhiteNoise, rng);
        for (Index u = 0; u < k; ++u) {
            acc += meas.per_user[std::size_t(u)].squaredNorm();
            count += q;
        }
    }
    CHECK(std::abs(acc / double(count) - 1.0) < 0.05);
}

TEST_CASE("noiseless measurement is linear in the channel") {
    const Index n = 32;
    const Index q = 8;
    Rng rng_w = substream(12, {12});
    const Combiner<double> w = generate_combiner<double>(q, n, rng_w);
    Rng rng_h = substream(12, {13});
    Vector<double> v(n);
    for (Index i = 0; i < n; ++i) {
        v(i) = rng_h.complex_gaussian(1.0);
    }
    const std::complex<double> alpha(2.5, -1.25);
    std::vector<BeamspaceChannel<double>> base{beam_channel(v)};
    std::vector<BeamspaceChannel<double>> scaled{beam_channel((alpha * v).eval())};
    Rng r1 = substream(0, {0});
    Rng r2 = substream(0, {0});
    const MeasurementSet<double> mb = simulate_uplink(base, w, 0.0, NoiseMode::Faithful, r1);
    const MeasurementSet<double> ms = simulate_uplink(scaled, w, 0.0, NoiseMode::Faithful, r2);
    CHECK((ms.per_user[0] - alpha * mb.per_user[0]).norm() < 1e-12 * mb.per_user[0].norm());
}

TEST_CASE("uplink simulation rejects invalid inputs") {
    Rng rng = substream(1, {14});
    const Combiner<double> w = generate_combiner<double>(10, 16, rng);
    std::vector<BeamspaceChannel<double>> channels(4, beam_channel(Vector<double>::Zero(16)));
    Rng r = substream(1, {15});
    // Q = 10 not divisible by K = 4
    CHECK_THROWS_AS((void)simulate_uplink(channels, w, 0.0, NoiseMode::Faithful, r),
                    std::invalid_argument);
    std::vector<BeamspaceChannel<double>> wrong(2, beam_channel(Vector<double>::Zero(8)));
    CHECK_THROWS_AS((void)simulate_uplink(wrong, w, 0.0, NoiseMode::Faithful, r),
                    std::invalid_argument);
    std::vector<BeamspaceChannel<double>> ok(2, beam_channel(Vector<double>::Zero(16)));
    CHECK_THROWS_AS((void)simulate_uplink(ok, w, -1.0, NoiseMode::Faithful, r),
                    std::invalid_argument);
}
