#include "wet/protocol_sim.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

namespace wet {

namespace {

struct KahanSum {
    double sum = 0.0, comp = 0.0;
    void add(double x) {
        const double y = x - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

ChannelRealization make_channel(ChannelMode mode, const SystemParams& p,
                                const PdpModel* pdp, std::mt19937_64& rng) {
    if (mode == ChannelMode::Pdp) {
        if (pdp == nullptr) throw ConfigError("run_trial: Pdp mode requires a PdpModel");
        return pdp->generate(rng);
    }
    return gen_iid(p, rng);
}

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

} // namespace

std::string_view scheme_name(Scheme s) {
    switch (s) {
    case Scheme::TwoPhase: return "twophase";
    case Scheme::PhaseIOnly: return "phase1only";
    case Scheme::PhaseIIOnly: return "phase2only";
    case Scheme::PerfectCsit: return "perfectcsit";
    case Scheme::NoCsit: return "nocsit";
    }
    return "?";
}

std::vector<int> select_subbands(int n_total, int n1) {
    if (n1 < 1 || n1 > n_total) throw ConfigError("select_subbands: need 1 <= n1 <= n_total");
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(n1));
    if (n1 == 1) {
        out.push_back(1);
        return out;
    }
    for (int k = 1; k <= n1; ++k)
        out.push_back(1 + static_cast<int>(std::lround(
                              static_cast<double>(k - 1) * (n_total - 1) / (n1 - 1))));
    return out;
}

Phase1Result phase1(const ChannelRealization& ch, const std::vector<int>& indices,
                    double e1, const SystemParams& p, std::mt19937_64& rng) {
    if (e1 < 0) throw ConfigError("phase1: e1 must be >= 0");
    Phase1Result res;
    res.y.resize(static_cast<Eigen::Index>(indices.size()), p.m);
    const double amp = std::sqrt(e1);
    double best = -1.0;
    res.n_star = indices.front();
    for (std::size_t i = 0; i < indices.size(); ++i) {
        const int row = indices[i] - 1;
        for (int m = 0; m < p.m; ++m)
            res.y(static_cast<Eigen::Index>(i), m) =
                amp * ch.gains(row, m) + complex_gaussian(rng, p.n0);
        const double energy = res.y.row(static_cast<Eigen::Index>(i)).squaredNorm();
        if (energy > best) { // strict: ties keep the lowest index
            best = energy;
            res.n_star = indices[i];
        }
    }
    return res;
}

Phase2Result phase2(const ChannelRealization& ch, int n_star, double e2,
                    double r_h_value, const SystemParams& p, std::mt19937_64& rng) {
    if (e2 < 0) throw ConfigError("phase2: e2 must be >= 0");
    const Eigen::VectorXcd h = ch.gains.row(n_star - 1).transpose();
    Eigen::VectorXcd y(p.m);
    const double amp = std::sqrt(e2);
    for (int m = 0; m < p.m; ++m)
        y(m) = amp * h(m) + complex_gaussian(rng, p.n0);
    const double b = lmmse_moments(r_h_value, e2, p).b;
    Phase2Result res;
    res.h_hat = b * y;
    res.h_tilde_power = (h - res.h_hat).squaredNorm();
    return res;
}

double harvest(const ChannelRealization& ch, int n_star,
               const Eigen::VectorXcd& h_hat, const SystemParams& p) {
    const Eigen::VectorXcd h = ch.gains.row(n_star - 1).transpose();
    const double hat_norm_sq = h_hat.squaredNorm();
    if (hat_norm_sq == 0.0)
        return p.etp() * std::norm(h(0)); // fixed first-basis beamformer
    return p.etp() * std::norm(h.dot(h_hat)) / hat_norm_sq;
}

TrialOutcome run_trial(Scheme scheme, const TrainingDesign& d, ChannelMode mode,
                       const SystemParams& p, const PdpModel* pdp,
                       std::mt19937_64& rng) {
    const ChannelRealization ch = make_channel(mode, p, pdp, rng);
    TrialOutcome out{};
    switch (scheme) {
    case Scheme::TwoPhase:
    case Scheme::PhaseIOnly: {
        if (scheme == Scheme::PhaseIOnly) require(d.e2 == 0.0, "PhaseIOnly requires e2 = 0");
        const auto indices = select_subbands(p.n_subbands, d.n1);
        const Phase1Result p1 = phase1(ch, indices, d.e1, p, rng);
        const double rh = r_h(d.n1, d.e1, p);
        const Phase2Result p2 = phase2(ch, p1.n_star, d.e2, rh, p, rng);
        out.selected_subband = p1.n_star;
        out.est_error_power = p2.h_tilde_power;
        out.q_hat = harvest(ch, p1.n_star, p2.h_hat, p);
        out.q_net = out.q_hat - d.e1 * d.n1 - d.e2;
        break;
    }
    case Scheme::PhaseIIOnly: {
        require(d.e1 == 0.0 && d.n1 == 1, "PhaseIIOnly requires n1 = 1, e1 = 0");
        const int n_star = 1; // fixed sub-band; no phase-I observation exists
        const double rh = p.beta * p.m;
        const Phase2Result p2 = phase2(ch, n_star, d.e2, rh, p, rng);
        out.selected_subband = n_star;
        out.est_error_power = p2.h_tilde_power;
        out.q_hat = harvest(ch, n_star, p2.h_hat, p);
        out.q_net = out.q_hat - d.e2;
        break;
    }
    case Scheme::PerfectCsit: {
        int n_star = 1;
        double best = -1.0;
        for (int n = 0; n < p.n_subbands; ++n) {
            const double e = ch.gains.row(n).squaredNorm();
            if (e > best) {
                best = e;
                n_star = n + 1;
            }
        }
        out.selected_subband = n_star;
        out.est_error_power = 0.0;
        out.q_hat = p.etp() * best;
        out.q_net = out.q_hat;
        break;
    }
    case Scheme::NoCsit: {
        out.selected_subband = 1;
        out.est_error_power = ch.gains.row(0).squaredNorm();
        out.q_hat = p.etp() * std::norm(ch.gains(0, 0));
        out.q_net = out.q_hat;
        break;
    }
    }
    return out;
}

McSummary monte_carlo(Scheme scheme, const TrainingDesign& d, ChannelMode mode,
                      const SystemParams& p, const PdpProfile* pdp,
                      std::uint64_t trials, std::uint64_t seed) {
    if (trials < 1) throw ConfigError("monte_carlo: trials must be >= 1");
    std::optional<PdpModel> model;
    if (mode == ChannelMode::Pdp) {
        if (pdp == nullptr) throw ConfigError("monte_carlo: Pdp mode requires a PdpProfile");
        model.emplace(p, *pdp);
    }
    const PdpModel* model_ptr = model ? &*model : nullptr;

    KahanSum net, net_sq, hat;
    for (std::uint64_t t = 0; t < trials; ++t) {
        std::mt19937_64 rng(substream_seed(seed, t));
        const TrialOutcome o = run_trial(scheme, d, mode, p, model_ptr, rng);
        net.add(o.q_net);
        net_sq.add(o.q_net * o.q_net);
        hat.add(o.q_hat);
    }
    McSummary s{};
    s.trials = trials;
    const double n = static_cast<double>(trials);
    s.mean_q_net = net.sum / n;
    s.mean_q_hat = hat.sum / n;
    if (trials > 1) {
        const double var = std::max(0.0, (net_sq.sum - n * s.mean_q_net * s.mean_q_net) / (n - 1.0));
        s.std_error = std::sqrt(var / n);
    } else {
        s.std_error = 0.0;
    }
    return s;
}

} // namespace wet
