#pragma once

#include "wet/analytic.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>

namespace wet {

/// One block's frequency-domain MISO channel: row n is the M-antenna channel
/// of sub-band n. Entries are zero-mean with E|h|^2 = beta in both modes.
struct ChannelRealization {
    Eigen::MatrixXcd gains; // N x M
};

/// Exponential power delay profile A(tau) = (1/sigma) exp(-tau/sigma),
/// sampled on a tap grid and truncated once almost all power is captured.
struct PdpProfile {
    double sigma_rms;   ///< rms delay spread [s]
    double tap_spacing; ///< tap grid spacing [s]
    int num_taps;

    /// 1/(2B) tap spacing (fine enough that frequency-domain aliasing of the
    /// tap grid stays negligible across the whole band); smallest tap count
    /// keeping >= 1 - 1e-4 of the power.
    static PdpProfile standard(double sigma_rms, double bandwidth_hz);
};

/// Precomputed tap amplitudes and sub-band steering matrix so that repeated
/// realizations are a single matrix product.
class PdpModel {
public:
    PdpModel(const SystemParams& p, const PdpProfile& profile);

    ChannelRealization generate(std::mt19937_64& rng) const;

    const Eigen::VectorXd& tap_amplitudes() const { return tap_amp_; }

private:
    Eigen::VectorXd tap_amp_;    // sqrt of tap powers, sum of squares = beta
    Eigen::MatrixXcd steering_;  // N x L, exp(-j 2 pi f_n tau_l)
    int m_;
};

/// i.i.d. mode: every entry an independent CN(0, beta) draw. Fill order is
/// sub-band-major, real part before imaginary part, so a given seed yields a
/// bit-identical realization.
ChannelRealization gen_iid(const SystemParams& p, std::mt19937_64& rng);

/// Correlated mode from the exponential PDP: per antenna, L independent
/// complex Gaussian taps weighted by the profile, evaluated at baseband-
/// symmetric sub-band centers f_n = (n - (N+1)/2) * B/N.
ChannelRealization gen_pdp(const SystemParams& p, const PdpProfile& profile,
                           std::mt19937_64& rng);

/// Deterministic per-stream seed derivation (splitmix64 over master ^ index),
/// so independent trials are reproducible from one master seed.
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index);

/// One CN(0, variance) draw: real then imaginary, each variance/2.
std::complex<double> complex_gaussian(std::mt19937_64& rng, double variance);

} // namespace wet
