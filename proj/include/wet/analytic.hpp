#pragma once

#include "wet/errors.hpp"

namespace wet {

/// Physical constants of the link. All values in SI units (watts, joules,
/// seconds, Hz); dBm/dB conversion happens at the CLI boundary only.
struct SystemParams {
    int m = 1;                ///< transmit antennas at the energy transmitter
    int n_subbands = 1;       ///< total orthogonal sub-bands
    double bandwidth_hz = 0;  ///< total bandwidth B
    double beta = 0;          ///< large-scale channel power gain
    double p_f = 0;           ///< forward transmit power [W]
    double n0 = 0;            ///< noise power spectral density [W/Hz]
    double eta = 0;           ///< harvesting efficiency, in (0, 1]
    double t_block = 0;       ///< block length [s]

    /// eta * T * P_f, the energy scale every harvested-energy formula carries.
    double etp() const { return eta * t_block * p_f; }

    void validate() const; ///< throws ConfigError on any violated invariant
};

/// Candidate two-phase training design.
struct TrainingDesign {
    int n1 = 1;    ///< sub-bands trained in phase I
    double e1 = 0; ///< per-sub-band phase-I training energy [J]
    double e2 = 0; ///< phase-II training energy [J]
};

struct EnergyReport {
    double q_bar;   ///< average harvested energy [J]
    double q_net;   ///< q_bar - e1*n1 - e2 [J]
    double r_h;     ///< mean power of the selected sub-band channel
    double e2_term; ///< estimation-loss part of q_bar [J]
};

struct LmmseMoments {
    double b;         ///< scalar estimator coefficient
    double mse;       ///< E||h - h_hat||^2
    double est_power; ///< E||h_hat||^2; mse + est_power == r_h
};

/// Mean power of the channel on the sub-band picked by noisy phase-I energy
/// detection: (beta^2 E1 G(N1,M) + beta N0 M) / (beta E1 + N0).
/// Always within [beta*M, beta*G(N1,M)].
double r_h(int n1, double e1, const SystemParams& p);

/// Scalar LMMSE estimator of the selected channel from the phase-II
/// observation, with its error/estimate second moments.
LmmseMoments lmmse_moments(double r_h_value, double e2, const SystemParams& p);

/// Average harvested energy of the two-phase scheme for a given design.
double q_bar(const TrainingDesign& d, const SystemParams& p);

/// q_bar minus the training energy spent in both phases.
EnergyReport q_net(const TrainingDesign& d, const SystemParams& p);

/// Optimal phase-II energy for a given selected-channel power:
/// [sqrt(etp (M-1) N0) - N0 M / r_h]^+.
double e2_star(double r_h_value, const SystemParams& p);

/// Selected-channel power at which e2_star transitions to zero:
/// N0 M / sqrt(etp (M-1) N0). Throws DegenerateCase for M = 1.
double alpha(const SystemParams& p);

/// Net energy with the optimal phase-II energy substituted; piecewise in
/// whether r_h exceeds alpha, continuous at the boundary. For M = 1 the
/// no-phase-II branch applies identically.
double q_net_reduced(int n1, double e1, const SystemParams& p);

/// d/dE1 of q_net_reduced at fixed n1 (the stationarity residual used to
/// validate quartic roots).
double q_net_reduced_deriv(int n1, double e1, const SystemParams& p);

struct Baselines {
    double perfect_csit; ///< etp * beta * G(N, M)
    double no_csit;      ///< etp * beta
};

Baselines baselines(const SystemParams& p);

} // namespace wet
