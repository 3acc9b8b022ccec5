#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "matterwave/lattice.hpp"
#include "matterwave/params.hpp"

namespace matterwave {

enum class DetuningSign { positive, negative };

/// Pairwise rates Gamma_ij between lattice sites; dA/dt = -Gamma A.
struct RateMatrix {
    Eigen::MatrixXcd entries;
    DetuningSign sign = DetuningSign::positive;
    double gamma0_abs = 0.0;
    double xi = 0.0;
    [[nodiscard]] Eigen::Index size() const { return entries.rows(); }
};

/// Off-diagonal entries from the closed-form pair rate (with the laser phase),
/// diagonal gamma0 above the band and 0 below. Throws for detuning = 0.
[[nodiscard]] RateMatrix build_rate_matrix(const ModelParams& p, const Lattice& lattice);

/// Copy with all off-diagonal entries set to zero.
[[nodiscard]] RateMatrix diagonal_only(const RateMatrix& m);

/// Smallest eigenvalue of the Hermitian part of Re(entries).
[[nodiscard]] double min_eigenvalue_real_part(const RateMatrix& m);

struct CollectiveRate {
    double value = 0.0;       // Re of the mean row sum
    double row_min = 0.0;     // Re row sums, min and max
    double row_max = 0.0;
    std::vector<std::string> warnings;
};

/// Decay rate of the symmetric single-excitation state, (1/M) Re sum_ij Gamma_ij.
/// Equals any single row sum on a periodic lattice; warns when rows differ by > 1%.
[[nodiscard]] CollectiveRate symmetric_decay_rate(const RateMatrix& m);

/// Snapshots of a single-excitation amplitude vector.
struct ExcitationTrajectory {
    std::vector<double> times;
    std::vector<Eigen::VectorXcd> amplitudes;
    [[nodiscard]] std::vector<double> norms() const;
};

struct EvolveOptions {
    std::size_t stride = 1;       // keep every stride-th step
    double half_step_tol = 1e-8;  // max allowed |A_dt - A_dt/2| at the final time
};

/// dA/dt = -Gamma A with fixed-step RK4. The run is repeated at dt/2 and a
/// NumericalError is thrown if the final states differ by more than half_step_tol.
[[nodiscard]] ExcitationTrajectory evolve_single_excitation(const RateMatrix& m, const Eigen::VectorXcd& a0, double T,
                                                            double dt, const EvolveOptions& opt = {});

/// Effective spin-spin coupling below the band, J = -i Gamma: real and <= 0 off the
/// diagonal when laser_k = 0, Hermitian in general.
struct CouplingMatrix {
    Eigen::MatrixXcd J;
    [[nodiscard]] bool is_real(double tol = 0.0) const;
};

/// Throws for detuning >= 0.
[[nodiscard]] CouplingMatrix coupling_matrix_J(const ModelParams& p, const Lattice& lattice);

/// J = -i Gamma from a below-band rate matrix.
[[nodiscard]] CouplingMatrix coupling_from_rates(const RateMatrix& m);

/// dA/dt = -i J A via the spectral decomposition of J, sampled at k dt for k = 0..T/dt.
[[nodiscard]] ExcitationTrajectory evolve_hopping(const CouplingMatrix& c, const Eigen::VectorXcd& a0, double T,
                                                  double dt);

enum class CollectiveRegime { a_reabsorption, b_collective, c_all_to_all, crossover };

/// Factor used for "much greater than" in the regime tests.
inline constexpr double kMuchGreater = 10.0;

[[nodiscard]] CollectiveRegime classify_collective_regime(double xi, double chi, long sites);
[[nodiscard]] std::string to_string(CollectiveRegime r);

}  // namespace matterwave
