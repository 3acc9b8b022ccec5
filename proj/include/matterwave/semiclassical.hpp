#pragma once

#include <vector>

#include <Eigen/Dense>

#include "matterwave/collective.hpp"

namespace matterwave {

/// Inversions z_i = <sigma3_i> and coherences s_ij = <sigma+_i sigma_j>.
struct CorrelationState {
    Eigen::VectorXd z;
    Eigen::MatrixXcd s;

    /// All atoms excited: z = 1, s = identity.
    static CorrelationState fully_inverted(Eigen::Index sites);
};

/// Right-hand side of the decoupled equations. Triples on a single site are reduced
/// exactly (sigma+ sigma3 = -sigma+, sigma3 sigma = -sigma); triples on distinct
/// sites factorize as <sigma3_i><sigma+_l sigma_j>.
[[nodiscard]] CorrelationState rhs_semiclassical(const CorrelationState& x, const Eigen::MatrixXcd& gamma);

/// R = -(1/2) sum_i dz_i/dt = 2 Re sum_ij Gamma_ij s_ij.
[[nodiscard]] double emission_rate(const CorrelationState& x, const Eigen::MatrixXcd& gamma);

/// dR/dt at the fully inverted state, exact:
/// 2 Re sum_{i != j} Gamma_ij (conj Gamma_ij + Gamma_ji) - 4 sum_i (Re Gamma_ii)^2.
[[nodiscard]] double emission_slope_t0(const RateMatrix& m);

/// Same slope from central differences of R(t) integrated forward and backward
/// from the fully inverted state, with one Richardson extrapolation.
[[nodiscard]] double emission_slope_numeric(const RateMatrix& m, double h = 0.0);

struct SemiclassicalOptions {
    std::size_t stride = 1;        // keep every stride-th step
    std::size_t check_every = 50;  // step-doubling check interval (0 disables)
    double step_tol = 1e-9;        // relative local error accepted by the check
};

struct SemiclassicalTrajectory {
    std::vector<double> times;
    std::vector<double> rate;              // R(t)
    std::vector<Eigen::VectorXd> z;
    CorrelationState final_state;
    double max_hermiticity_drift = 0.0;    // before re-symmetrization, per unit time
    double max_population_mismatch = 0.0; // max |s_ii - (z_i + 1)/2|
    double max_local_error = 0.0;         // from the step-doubling checks
};

inline constexpr Eigen::Index kMaxDenseSites = 256;

/// Fixed-step RK4. Throws NumericalError if a step check fails, if any |z_i| > 2,
/// or if R(t) turns negative.
[[nodiscard]] SemiclassicalTrajectory integrate_semiclassical(const CorrelationState& x0, const RateMatrix& m,
                                                              double T, double dt,
                                                              const SemiclassicalOptions& opt = {});

/// 0.01 / Gamma_coll (falls back to 0.01 / |gamma0| if Gamma_coll <= 0).
[[nodiscard]] double default_semiclassical_dt(const RateMatrix& m);

}  // namespace matterwave
