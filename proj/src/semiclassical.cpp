#include "matterwave/semiclassical.hpp"

#include <cmath>
#include <sstream>

namespace matterwave {

namespace {

CorrelationState axpy(const CorrelationState& x, double h, const CorrelationState& k)
{
    return {x.z + h * k.z, x.s + h * k.s};
}

CorrelationState rk4_step(const CorrelationState& x, const Eigen::MatrixXcd& g, double h)
{
    const CorrelationState k1 = rhs_semiclassical(x, g);
    const CorrelationState k2 = rhs_semiclassical(axpy(x, 0.5 * h, k1), g);
    const CorrelationState k3 = rhs_semiclassical(axpy(x, 0.5 * h, k2), g);
    const CorrelationState k4 = rhs_semiclassical(axpy(x, h, k3), g);
    return {x.z + (h / 6.0) * (k1.z + 2.0 * k2.z + 2.0 * k3.z + k4.z),
            x.s + (h / 6.0) * (k1.s + 2.0 * k2.s + 2.0 * k3.s + k4.s)};
}

double state_distance(const CorrelationState& a, const CorrelationState& b)
{
    return std::max((a.z - b.z).cwiseAbs().maxCoeff(), (a.s - b.s).cwiseAbs().maxCoeff());
}

double state_size(const CorrelationState& a)
{
    return std::max(a.z.cwiseAbs().maxCoeff(), a.s.cwiseAbs().maxCoeff());
}

CorrelationState evolve(CorrelationState x, const Eigen::MatrixXcd& g, double t, int substeps)
{
    const double h = t / substeps;
    for (int k = 0; k < substeps; ++k) x = rk4_step(x, g, h);
    return x;
}

}  // namespace

CorrelationState CorrelationState::fully_inverted(Eigen::Index sites)
{
    return {Eigen::VectorXd::Ones(sites), Eigen::MatrixXcd::Identity(sites, sites)};
}

CorrelationState rhs_semiclassical(const CorrelationState& x, const Eigen::MatrixXcd& gamma)
{
    const Eigen::Index m = x.z.size();
    Eigen::MatrixXcd off = gamma;
    off.diagonal().setZero();
    const Eigen::VectorXcd diag = gamma.diagonal();

    // P_ij = z_i sum_{l != i} conj(Gamma_il) s_lj; the mirrored term is P^dagger.
    const Eigen::MatrixXcd p = x.z.asDiagonal() * (off.conjugate() * x.s);
    CorrelationState d;
    d.s = p + p.adjoint();
    d.s -= diag.conjugate().asDiagonal() * x.s;
    d.s -= x.s * diag.asDiagonal();

    // dz_i = -4 Re sum_j Gamma_ij s_ij; on-site populations follow exactly dz_i / 2.
    d.z = -4.0 * gamma.cwiseProduct(x.s).rowwise().sum().real();
    for (Eigen::Index i = 0; i < m; ++i) d.s(i, i) = 0.5 * d.z(i);
    return d;
}

double emission_rate(const CorrelationState& x, const Eigen::MatrixXcd& gamma)
{
    return 2.0 * gamma.cwiseProduct(x.s).sum().real();
}

double emission_slope_t0(const RateMatrix& m)
{
    const Eigen::MatrixXcd& g = m.entries;
    const Eigen::Index n = g.rows();
    double off = 0.0, diag = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        diag += g(i, i).real() * g(i, i).real();
        for (Eigen::Index j = 0; j < n; ++j)
            if (i != j) off += (g(i, j) * (std::conj(g(i, j)) + g(j, i))).real();
    }
    return 2.0 * off - 4.0 * diag;
}

double default_semiclassical_dt(const RateMatrix& m)
{
    const double coll = symmetric_decay_rate(m).value;
    if (coll > 0.0) return 0.01 / coll;
    if (m.gamma0_abs > 0.0) return 0.01 / m.gamma0_abs;
    throw ParameterError("default_semiclassical_dt: rate matrix has no decay scale");
}

double emission_slope_numeric(const RateMatrix& m, double h)
{
    if (!(h > 0.0)) h = 0.5 * default_semiclassical_dt(m);
    const CorrelationState x0 = CorrelationState::fully_inverted(m.size());
    auto central = [&](double step) {
        const double rp = emission_rate(evolve(x0, m.entries, step, 16), m.entries);
        const double rm = emission_rate(evolve(x0, m.entries, -step, 16), m.entries);
        return (rp - rm) / (2.0 * step);
    };
    const double d1 = central(h);
    const double d2 = central(0.5 * h);
    return (4.0 * d2 - d1) / 3.0;
}

SemiclassicalTrajectory integrate_semiclassical(const CorrelationState& x0, const RateMatrix& m, double T, double dt,
                                                const SemiclassicalOptions& opt)
{
    const Eigen::Index sites = m.size();
    if (x0.z.size() != sites || x0.s.rows() != sites || x0.s.cols() != sites)
        throw ParameterError("integrate_semiclassical: state and rate matrix sizes differ");
    if (sites > kMaxDenseSites) throw ParameterError("integrate_semiclassical: dense solver limited to 256 sites");
    if (!(T > 0.0) || !(dt > 0.0)) throw ParameterError("integrate_semiclassical: T and dt must be > 0");
    const auto n = static_cast<std::size_t>(std::ceil(T / dt - 1e-9));
    const double h = T / static_cast<double>(n);
    const std::size_t stride = std::max<std::size_t>(opt.stride, 1);
    const Eigen::MatrixXcd& g = m.entries;

    SemiclassicalTrajectory tr;
    CorrelationState x = x0;
    const double r0 = emission_rate(x, g);
    auto record = [&](double t) {
        tr.times.push_back(t);
        tr.rate.push_back(emission_rate(x, g));
        tr.z.push_back(x.z);
    };
    auto diagnose = [&] {
        for (Eigen::Index i = 0; i < sites; ++i)
            tr.max_population_mismatch =
                std::max(tr.max_population_mismatch, std::abs(x.s(i, i) - 0.5 * (x.z(i) + 1.0)));
    };
    record(0.0);
    diagnose();
    for (std::size_t k = 0; k < n; ++k) {
        CorrelationState next = rk4_step(x, g, h);
        if (opt.check_every > 0 && k % opt.check_every == 0) {
            const CorrelationState fine = rk4_step(rk4_step(x, g, 0.5 * h), g, 0.5 * h);
            const double err = state_distance(next, fine) / std::max(1.0, state_size(fine));
            tr.max_local_error = std::max(tr.max_local_error, err);
            if (!(err <= opt.step_tol)) {
                std::ostringstream os;
                os << "integrate_semiclassical: step check failed at t = " << static_cast<double>(k) * h
                   << " (local error " << err << "); reduce dt";
                throw NumericalError(os.str());
            }
        }
        const double drift = (next.s - next.s.adjoint()).cwiseAbs().maxCoeff() / h;
        tr.max_hermiticity_drift = std::max(tr.max_hermiticity_drift, drift);
        next.s = 0.5 * (next.s + next.s.adjoint());
        x = std::move(next);
        diagnose();

        if (!(x.z.cwiseAbs().maxCoeff() <= 2.0)) {
            std::ostringstream os;
            os << "integrate_semiclassical: divergence, |z| > 2 at t = " << static_cast<double>(k + 1) * h;
            throw NumericalError(os.str());
        }
        const double r = emission_rate(x, g);
        if (r < -1e-10 * std::abs(r0)) {
            std::ostringstream os;
            os << "integrate_semiclassical: negative emission rate " << r << " at t = " << static_cast<double>(k + 1) * h;
            throw NumericalError(os.str());
        }
        if ((k + 1) % stride == 0 || k + 1 == n) record(static_cast<double>(k + 1) * h);
    }
    tr.final_state = x;
    return tr;
}

}  // namespace matterwave
