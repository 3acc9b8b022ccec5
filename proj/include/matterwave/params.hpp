#pragma once

#include <array>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace matterwave {

using cplx = std::complex<double>;
using Vec3 = std::array<double, 3>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Thrown for invalid physical or numerical inputs.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when a solver cannot meet its accuracy contract.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Physical inputs. Units: hbar = 1; the CLI fixes rabi = 1.
///
/// `detuning` is the detuning from the dressed trapped level. The finite-trap
/// kernel shifts the level by lamb_shift = 2 rabi^2 / trap, so the bare detuning
/// entering kernel_full is detuning + lamb_shift (see bare_detuning()).
struct ModelParams {
    double rabi = 1.0;      // two-photon Rabi frequency
    double trap = 50.0;     // on-site trap frequency
    double detuning = 0.0;  // signed
    double mass = 1.0;
    double spacing = 1.0;   // lattice period
    Vec3 laser_k{0.0, 0.0, 0.0};
    int dim = 1;
    std::vector<int> shape{1};

    [[nodiscard]] long site_count() const;
};

/// Scales derived from ModelParams. Fields that are undefined for the given
/// detuning are empty rather than infinite.
struct DerivedParams {
    double x0 = 0.0;            // on-site wave-function size (2 m trap)^{-1/2}
    double alpha_kernel = 0.0;  // rabi^2 / trap^{3/2}, prefactor of the ideal kernel
    double alpha = 0.0;         // 2 sqrt(pi) alpha_kernel, used by the Laplace solution
    double lamb_shift = 0.0;    // 2 rabi^2 / trap
    double gamma0_abs = 0.0;    // alpha sqrt|detuning|
    std::optional<double> gamma0;  // amplitude decay rate, only for detuning > 0
    std::optional<double> k0;      // sqrt(2 m |detuning|)
    std::optional<double> xi;      // 1 / (k0 spacing)
    std::optional<double> chi;     // M^{1/3} xi^2
};

struct ValidationReport {
    std::vector<std::string> errors;
    std::vector<std::string> warnings;
    [[nodiscard]] bool ok() const { return errors.empty(); }
};

[[nodiscard]] ValidationReport validate(const ModelParams& p);

/// Throws ParameterError when validate() reports errors.
[[nodiscard]] DerivedParams derive(const ModelParams& p);

/// Detuning to use in the finite-trap kernel so that the dressed level sits at
/// p.detuning from the band edge.
[[nodiscard]] double bare_detuning(const ModelParams& p);

/// alpha^2 = 4 pi rabi^4 / trap^3, the natural frequency scale of single-site decay.
[[nodiscard]] double alpha_squared(const ModelParams& p);

/// |detuning| that makes xi take the requested value for the given mass and spacing.
[[nodiscard]] double detuning_for_xi(double xi, double mass, double spacing);

}  // namespace matterwave
