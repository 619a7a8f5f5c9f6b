#pragma once

#include "wet/analytic.hpp"
#include "wet/channel.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace wet {

enum class Scheme { TwoPhase, PhaseIOnly, PhaseIIOnly, PerfectCsit, NoCsit };
enum class ChannelMode { Iid, Pdp };

std::string_view scheme_name(Scheme s);

struct TrialOutcome {
    double q_hat;            ///< harvested energy [J]
    double q_net;            ///< q_hat minus training energy spent
    int selected_subband;    ///< 1-based index n*
    double est_error_power;  ///< ||h - h_hat||^2 on the selected sub-band
};

struct McSummary {
    std::uint64_t trials;
    double mean_q_net;
    double std_error; ///< sample std / sqrt(trials); 0 for a single trial
    double mean_q_hat;
};

/// Trained sub-band indices (1-based) at maximum mutual frequency separation:
/// n1 = 1 gives {1}; otherwise round(1 + (k-1)(N-1)/(n1-1)) for k = 1..n1.
std::vector<int> select_subbands(int n_total, int n1);

struct Phase1Result {
    Eigen::MatrixXcd y; ///< matched-filter outputs, one row per trained index
    int n_star;         ///< 1-based selected sub-band
};

/// Phase I: y_n = sqrt(E1) h_n + z_n per trained sub-band (noise CN(0, N0)
/// per entry), then argmax of ||y_n||^2, ties broken by lowest index.
Phase1Result phase1(const ChannelRealization& ch, const std::vector<int>& indices,
                    double e1, const SystemParams& p, std::mt19937_64& rng);

struct Phase2Result {
    Eigen::VectorXcd h_hat;
    double h_tilde_power; ///< ||h_{n*} - h_hat||^2
};

/// Phase II: LMMSE estimate of the selected channel from a single pilot
/// observation; r_h_value is the analytic prior moment of the design in force.
Phase2Result phase2(const ChannelRealization& ch, int n_star, double e2,
                    double r_h_value, const SystemParams& p, std::mt19937_64& rng);

/// Beamformed harvested energy etp |h^H h_hat|^2 / ||h_hat||^2. A zero
/// estimate falls back to the fixed first-coordinate beamformer, whose mean
/// matches the E2 = 0 branch of the average harvested energy.
double harvest(const ChannelRealization& ch, int n_star,
               const Eigen::VectorXcd& h_hat, const SystemParams& p);

/// One full protocol round under the given scheme. The design must be
/// scheme-consistent (PhaseIOnly: e2 = 0; PhaseIIOnly: n1 = 1, e1 = 0);
/// PerfectCsit and NoCsit ignore the design and charge no training energy.
TrialOutcome run_trial(Scheme scheme, const TrainingDesign& d, ChannelMode mode,
                       const SystemParams& p, const PdpModel* pdp,
                       std::mt19937_64& rng);

/// Seeded Monte Carlo aggregation of run_trial: per-trial generators derive
/// from the master seed via substream_seed, means use compensated summation,
/// so the result is reproducible bit-for-bit.
McSummary monte_carlo(Scheme scheme, const TrainingDesign& d, ChannelMode mode,
                      const SystemParams& p, const PdpProfile* pdp,
                      std::uint64_t trials, std::uint64_t seed);

} // namespace wet
