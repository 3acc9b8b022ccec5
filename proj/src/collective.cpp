#include "matterwave/collective.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace matterwave {

namespace {

constexpr cplx kI{0.0, 1.0};

void require_unit(const Eigen::VectorXcd& a0, Eigen::Index m)
{
    if (a0.size() != m) throw ParameterError("initial amplitude has the wrong length");
    if (std::abs(a0.norm() - 1.0) > 1e-9) throw ParameterError("initial amplitude must have unit norm");
}

std::size_t step_count(double T, double dt)
{
    if (!(T > 0.0) || !(dt > 0.0)) throw ParameterError("T and dt must be > 0");
    return static_cast<std::size_t>(std::ceil(T / dt - 1e-9));
}

Eigen::VectorXcd rk4_run(const Eigen::MatrixXcd& g, Eigen::VectorXcd a, double h, std::size_t n,
                         ExcitationTrajectory* out, std::size_t stride)
{
    for (std::size_t k = 0; k < n; ++k) {
        const Eigen::VectorXcd k1 = -(g * a);
        const Eigen::VectorXcd k2 = -(g * (a + 0.5 * h * k1));
        const Eigen::VectorXcd k3 = -(g * (a + 0.5 * h * k2));
        const Eigen::VectorXcd k4 = -(g * (a + h * k3));
        a += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (out && ((k + 1) % stride == 0 || k + 1 == n)) {
            out->times.push_back(static_cast<double>(k + 1) * h);
            out->amplitudes.push_back(a);
        }
    }
    return a;
}

}  // namespace

RateMatrix build_rate_matrix(const ModelParams& p, const Lattice& lattice)
{
    const DerivedParams d = derive(p);
    if (p.detuning == 0.0) throw ParameterError("build_rate_matrix: detuning = 0 has no pair rates");
    if (std::abs(lattice.spacing() - p.spacing) > 1e-12 * p.spacing)
        throw ParameterError("lattice spacing differs from model spacing");
    const auto m = static_cast<Eigen::Index>(lattice.size());
    RateMatrix r;
    r.sign = p.detuning > 0.0 ? DetuningSign::positive : DetuningSign::negative;
    r.gamma0_abs = d.gamma0_abs;
    r.xi = *d.xi;
    r.entries.resize(m, m);
    const double k0 = *d.k0;
    for (Eigen::Index i = 0; i < m; ++i) {
        r.entries(i, i) = p.detuning > 0.0 ? d.gamma0_abs : 0.0;
        for (Eigen::Index j = 0; j < m; ++j) {
            if (i == j) continue;
            const Vec3 n = lattice.separation(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
            const Vec3 rv{n[0] * p.spacing, n[1] * p.spacing, n[2] * p.spacing};
            const double x = k0 * norm(rv);
            const double env = d.gamma0_abs / x;
            const cplx v = p.detuning > 0.0 ? env * cplx{std::sin(x), -std::cos(x)} : cplx{0.0, -env * std::exp(-x)};
            r.entries(i, j) = v * std::exp(-kI * dot(p.laser_k, rv));
        }
    }
    return r;
}

RateMatrix diagonal_only(const RateMatrix& m)
{
    RateMatrix d = m;
    d.entries = m.entries.diagonal().asDiagonal();
    return d;
}

double min_eigenvalue_real_part(const RateMatrix& m)
{
    const Eigen::MatrixXd re = m.entries.real();
    const Eigen::MatrixXd sym = 0.5 * (re + re.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

CollectiveRate symmetric_decay_rate(const RateMatrix& m)
{
    const Eigen::VectorXd rows = m.entries.real().rowwise().sum();
    CollectiveRate c;
    c.value = rows.mean();
    c.row_min = rows.minCoeff();
    c.row_max = rows.maxCoeff();
    const double scale = std::max(std::abs(c.value), 1e-300);
    if ((c.row_max - c.row_min) > 0.01 * scale) {
        std::ostringstream os;
        os << "row sums differ by " << 100.0 * (c.row_max - c.row_min) / scale
           << "% (open boundary?); reporting the row average";
        c.warnings.push_back(os.str());
    }
    return c;
}

std::vector<double> ExcitationTrajectory::norms() const
{
    std::vector<double> out;
    out.reserve(amplitudes.size());
    for (const auto& a : amplitudes) out.push_back(a.norm());
    return out;
}

ExcitationTrajectory evolve_single_excitation(const RateMatrix& m, const Eigen::VectorXcd& a0, double T, double dt,
                                              const EvolveOptions& opt)
{
    require_unit(a0, m.size());
    const std::size_t n = step_count(T, dt);
    const double h = T / static_cast<double>(n);
    ExcitationTrajectory tr;
    tr.times.push_back(0.0);
    tr.amplitudes.push_back(a0);
    const Eigen::VectorXcd end = rk4_run(m.entries, a0, h, n, &tr, std::max<std::size_t>(opt.stride, 1));
    const Eigen::VectorXcd fine = rk4_run(m.entries, a0, h / 2.0, 2 * n, nullptr, 1);
    const double diff = (end - fine).cwiseAbs().maxCoeff();
    if (!(diff <= opt.half_step_tol)) {
        std::ostringstream os;
        os << "evolve_single_excitation: half-step check failed (" << diff << " > " << opt.half_step_tol
           << "); reduce dt";
        throw NumericalError(os.str());
    }
    return tr;
}

bool CouplingMatrix::is_real(double tol) const
{
    return J.imag().cwiseAbs().maxCoeff() <= tol;
}

CouplingMatrix coupling_from_rates(const RateMatrix& m)
{
    if (m.sign != DetuningSign::negative) throw ParameterError("coupling matrix requires detuning < 0");
    CouplingMatrix c;
    c.J = -kI * m.entries;
    return c;
}

CouplingMatrix coupling_matrix_J(const ModelParams& p, const Lattice& lattice)
{
    if (!(p.detuning < 0.0)) throw ParameterError("coupling_matrix_J requires detuning < 0");
    return coupling_from_rates(build_rate_matrix(p, lattice));
}

ExcitationTrajectory evolve_hopping(const CouplingMatrix& c, const Eigen::VectorXcd& a0, double T, double dt)
{
    require_unit(a0, c.J.rows());
    const std::size_t n = step_count(T, dt);
    const double h = T / static_cast<double>(n);
    const Eigen::MatrixXcd herm = 0.5 * (c.J + c.J.adjoint());
    if ((herm - c.J).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, c.J.cwiseAbs().maxCoeff()))
        throw ParameterError("evolve_hopping: J is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm);
    const Eigen::VectorXcd coeff = es.eigenvectors().adjoint() * a0;
    ExcitationTrajectory tr;
    for (std::size_t k = 0; k <= n; ++k) {
        const double t = static_cast<double>(k) * h;
        Eigen::VectorXcd rotated(coeff.size());
        for (Eigen::Index i = 0; i < coeff.size(); ++i) rotated(i) = coeff(i) * std::exp(-kI * es.eigenvalues()(i) * t);
        tr.times.push_back(t);
        tr.amplitudes.push_back(es.eigenvectors() * rotated);
    }
    return tr;
}

CollectiveRegime classify_collective_regime(double xi, double chi, long sites)
{
    if (sites < 1) throw ParameterError("classify_collective_regime: need at least one site");
    const double cube = std::cbrt(static_cast<double>(sites));
    if (xi < 1.0 && chi >= kMuchGreater) return CollectiveRegime::a_reabsorption;
    if (xi >= kMuchGreater * cube) return CollectiveRegime::c_all_to_all;
    if (xi > 1.0 && xi < cube) return CollectiveRegime::b_collective;
    return CollectiveRegime::crossover;
}

std::string to_string(CollectiveRegime r)
{
    switch (r) {
    case CollectiveRegime::a_reabsorption: return "a_reabsorption";
    case CollectiveRegime::b_collective: return "b_collective";
    case CollectiveRegime::c_all_to_all: return "c_all_to_all";
    case CollectiveRegime::crossover: return "crossover";
    }
    return "unknown";
}

}  // namespace matterwave
