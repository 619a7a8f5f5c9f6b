#pragma once

#include "wet/analytic.hpp"

#include <vector>

namespace wet {

/// Which regime the reduced net-energy objective is in for a given n1:
/// Case1 <=> alpha >= beta*G(n1,M) (phase II never pays),
/// Case2 <=> alpha <= beta*M (phase II always pays),
/// Case3 otherwise (switch at e1 = E0).
enum class CaseLabel { Case1, Case2, Case3 };

enum class E1Branch { Case2, Case3Low, Case3High };

struct DesignSolution {
    int n1_star;
    double e1_star;
    double e2_star;
    double q_net_star;
    CaseLabel case_label;
    long candidates_evaluated;
};

struct E1Solution {
    double e1;
    double q_net;
    long candidates; ///< how many candidate points were compared
};

CaseLabel classify_case(int n1, const SystemParams& p);

/// Closed-form optimal per-sub-band phase-I energy in Case 1:
/// [sqrt(etp N0 (G/M - 1) / n1) - N0/beta]^+.
double e1_star_case1(int n1, const SystemParams& p);

/// Nonnegative real stationary points of d(q_net_reduced)/dE1 = 0 on the
/// requested branch, restricted to that branch's E1 interval. The quartic's
/// coefficients are assembled in the dimensionless variable x = beta*E1/N0;
/// roots are polished by Newton steps on the polynomial and one final step
/// on the rational derivative itself.
std::vector<double> stationary_candidates(int n1, const SystemParams& p, E1Branch branch);

/// Maximize q_net_reduced over E1 >= 0 for fixed n1: candidate set is {0},
/// the Case-1 closed form, the branch stationary points, and the Case-3
/// boundary E0; the best candidate wins.
E1Solution optimize_e1(int n1, const SystemParams& p);

/// Exhaustive search over n1 in {1,...,N}; ties broken toward smaller n1.
DesignSolution optimize_design(const SystemParams& p);

/// Boundary energy E0 = N0 (alpha - beta M) / (beta (beta G - alpha)) where
/// the Case-3 objective switches branches (only meaningful in Case 3).
double case3_boundary_e1(int n1, const SystemParams& p);

/// Optimal design when phase II is disabled (E2 = 0): maximize
/// etp*R_h/M - E1*N1 over (N1, E1).
struct Phase1OnlyDesign {
    int n1;
    double e1;
    double q_net;
};
Phase1OnlyDesign optimize_phase1_only(const SystemParams& p);

/// Optimal design when phase I is disabled (E1 = 0, one fixed sub-band).
struct Phase2OnlyDesign {
    double e2;
    double q_net;
};
Phase2OnlyDesign optimize_phase2_only(const SystemParams& p);

} // namespace wet
