#include "matterwave/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>
#include <stdexcept>

#include "matterwave/collective.hpp"
#include "matterwave/kernels.hpp"
#include "matterwave/meanfield.hpp"
#include "matterwave/semiclassical.hpp"
#include "matterwave/single_emitter.hpp"

#ifndef MATTERWAVE_VERSION
#define MATTERWAVE_VERSION "0.0.0"
#endif

namespace matterwave {

using json = nlohmann::ordered_json;

namespace {

std::string label(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

// json has no NaN; report it as null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// Least-squares slope of log(values) against time over [t0, t1].
double log_slope(const std::vector<double>& t, const std::vector<double>& v, double t0, double t1)
{
    double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (t[k] < t0 || t[k] > t1 || !(v[k] > 0.0)) continue;
        const double y = std::log(v[k]);
        n += 1;
        sx += t[k];
        sy += y;
        sxx += t[k] * t[k];
        sxy += t[k] * y;
    }
    if (n < 3) return std::nan("");
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double tail_mean(const std::vector<double>& v, double fraction)
{
    const auto count = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(fraction * v.size())));
    double s = 0.0;
    for (std::size_t k = v.size() - count; k < v.size(); ++k) s += v[k];
    return s / static_cast<double>(count);
}

std::size_t central_site(const Lattice& lat)
{
    std::size_t idx = 0;
    for (int s : lat.shape()) idx = idx * static_cast<std::size_t>(s) + static_cast<std::size_t>((s - 1) / 2);
    return idx;
}

json model_json(const ModelParams& p)
{
    json j;
    j["rabi"] = p.rabi;
    j["trap"] = p.trap;
    j["detuning"] = p.detuning;
    j["mass"] = p.mass;
    j["spacing"] = p.spacing;
    j["laser_k"] = {p.laser_k[0], p.laser_k[1], p.laser_k[2]};
    j["dim"] = p.dim;
    j["shape"] = p.shape;
    const DerivedParams d = derive(p);
    j["x0"] = d.x0;
    j["alpha_kernel"] = d.alpha_kernel;
    j["alpha"] = d.alpha;
    j["alpha2"] = d.alpha * d.alpha;
    j["lamb_shift"] = d.lamb_shift;
    j["gamma0_abs"] = d.gamma0_abs;
    j["gamma0"] = d.gamma0 ? json(*d.gamma0) : json(nullptr);
    j["k0"] = d.k0 ? json(*d.k0) : json(nullptr);
    j["xi"] = d.xi ? json(*d.xi) : json(nullptr);
    j["chi"] = d.chi ? json(*d.chi) : json(nullptr);
    return j;
}

// Model at a given xi, keeping the laser in units of the new k0 when so configured.
ModelParams model_at_xi(const ModelSpec& m, double xi, double sign)
{
    ModelSpec s = m;
    s.detuning = 0.0;
    s.detuning_alpha2.reset();
    s.xi = xi;
    s.band = sign < 0.0 ? "below" : "above";
    return resolve_model(s);
}

// --- single emitter -------------------------------------------------------

ScenarioResult run_single_decay(const ScenarioConfig& c)
{
    const ModelParams p0 = resolve_model(c.model);
    const double a2 = alpha_squared(p0);
    const double alpha = derive(p0).alpha;
    std::vector<double> list = c.run.detunings_alpha2;
    if (list.empty()) list.push_back(p0.detuning / a2);

    const double T = (c.run.T > 0.0 ? c.run.T : 10.0) / a2;
    double dt = c.run.dt / a2;
    if (!(dt > 0.0)) {
        dt = T;
        for (double d : list) dt = std::min(dt, default_single_dt(with_detuning_alpha2(p0, d)));
    }
    const auto stride = static_cast<std::size_t>(c.run.stride);
    const std::size_t blocks = static_cast<std::size_t>(std::ceil(T / dt / static_cast<double>(stride) - 1e-9));
    const std::size_t steps = std::max<std::size_t>(1, blocks) * stride;
    dt = T / static_cast<double>(steps);
    const TimeGrid sample_grid(dt * static_cast<double>(stride), steps / stride);

    std::vector<std::future<VolterraResult>> runs;
    for (double d : list) {
        const ModelParams p = with_detuning_alpha2(p0, d);
        VolterraOptions opt;
        opt.richardson = c.run.richardson;
        runs.push_back(std::async(std::launch::async, [p, T, dt, opt] { return solve_single_emitter(p, T, dt, opt); }));
    }

    ResultTable table;
    table.name = "population";
    table.add_column("t_alpha2", "time in units of 1/alpha^2");
    std::vector<std::vector<double>> cols;
    json per = json::array();
    for (std::size_t i = 0; i < list.size(); ++i) {
        const double d = list[i];
        const ModelParams p = with_detuning_alpha2(p0, d);
        const VolterraResult v = runs[i].get();
        const ComplexSeries ideal = amplitude_analytic(alpha, p.detuning, sample_grid);
        std::vector<double> pv, pi, times;
        double dev = 0.0;
        for (std::size_t k = 0; k < sample_grid.size(); ++k) {
            times.push_back(sample_grid.time(k));
            pv.push_back(std::norm(v.amplitude[k * stride]));
            pi.push_back(std::norm(ideal[k]));
            dev = std::max(dev, std::abs(pv.back() - pi.back()));
        }
        table.add_column("P_volterra[D=" + label(d) + "]",
                         "|A|^2 from the finite-trap memory kernel, detuning/alpha^2 = " + label(d));
        table.add_column("P_ideal[D=" + label(d) + "]", "|A|^2 from the ideal closed form, detuning/alpha^2 = " + label(d));
        cols.push_back(pv);
        cols.push_back(pi);

        const LaplaceSolution s = laplace_roots(alpha, p.detuning);
        json j;
        j["detuning_alpha2"] = d;
        j["detuning"] = p.detuning;
        j["pole_case"] = to_string(s.pole_case);
        j["regime"] = to_string(classify_single_regime(alpha, p.detuning));
        j["steady_population_ideal"] = steady_population(alpha, p.detuning);
        if (p.detuning < 0.0) {
            const auto b = finite_trap_bound_state(p);
            j["steady_population_finite_trap"] = b.population;
            j["bound_state_energy"] = b.energy;
        } else {
            j["steady_population_finite_trap"] = 0.0;
        }
        j["volterra_plateau"] = tail_mean(pv, c.run.plateau_fraction);
        j["max_abs_population_difference"] = dev;
        j["volterra_error_estimate"] = number(v.error_estimate);
        j["volterra_observed_order"] = number(v.observed_order);
        j["volterra_converged"] = v.converged;
        j["max_abs_amplitude"] = v.max_abs;
        if (p.detuning > 0.0) {
            const double g0 = alpha * std::sqrt(p.detuning);
            j["gamma0"] = g0;
            j["pole_population_rate_over_gamma0"] = s.pole_case == PoleCase::complex_pole
                                                        ? json(-2.0 * s.pole_amplitude_rate / g0)
                                                        : json(nullptr);
            const bool fits = 3.0 / g0 <= T;
            j["log_slope_over_gamma0_t1_3"] = fits ? number(log_slope(times, pv, 1.0 / g0, 3.0 / g0) / g0) : json(nullptr);
        }
        per.push_back(j);
    }
    for (std::size_t k = 0; k < sample_grid.size(); ++k) {
        std::vector<double> row{sample_grid.time(k) * a2};
        for (const auto& col : cols) row.push_back(col[k]);
        table.add_row(std::move(row));
    }

    ScenarioResult r;
    r.tables.push_back(std::move(table));
    r.summary["model"] = model_json(p0);
    r.summary["T"] = T;
    r.summary["dt"] = dt;
    r.summary["detunings"] = per;
    return r;
}

ScenarioResult run_steady_state_scan(const ScenarioConfig& c)
{
    const ModelParams base = resolve_model(c.model);
    std::vector<double> ratios = c.run.ratios;
    if (ratios.empty()) ratios.push_back(base.rabi / base.trap);
    std::vector<double> list = c.run.detunings_alpha2;
    if (list.empty()) list = {-8.0, -1.0, -0.2, 0.2, 8.0};

    struct Cell {
        double trap_pop = 0.0;
        double plateau = std::nan("");
        bool converged = true;
    };
    std::vector<std::vector<std::future<Cell>>> cells(ratios.size());
    for (std::size_t r = 0; r < ratios.size(); ++r) {
        ModelParams q = base;
        q.trap = base.rabi / ratios[r];
        const double a2 = alpha_squared(q);
        const double T = (c.run.T > 0.0 ? c.run.T : 40.0) / a2;
        for (double d : list) {
            const ModelParams p = with_detuning_alpha2(q, d);
            const bool volterra = c.run.volterra;
            const double dt = c.run.dt > 0.0 ? c.run.dt / a2 : 0.0;
            const double frac = c.run.plateau_fraction;
            cells[r].push_back(std::async(std::launch::async, [p, T, dt, volterra, frac] {
                Cell cell;
                if (p.detuning < 0.0) cell.trap_pop = finite_trap_bound_state(p).population;
                if (volterra) {
                    VolterraOptions opt;
                    opt.richardson = false;
                    const auto v = solve_single_emitter(p, T, dt, opt);
                    std::vector<double> pop;
                    for (std::size_t k = 0; k < v.amplitude.size(); ++k) pop.push_back(std::norm(v.amplitude[k]));
                    cell.plateau = tail_mean(pop, frac);
                    cell.converged = v.converged;
                }
                return cell;
            }));
        }
    }

    ResultTable table;
    table.name = "steady_state";
    table.add_column("detuning_alpha2", "detuning in units of alpha^2");
    table.add_column("P_ideal", "steady population of the ideal closed form");
    for (double r : ratios) {
        table.add_column("P_trap[r=" + label(r) + "]", "finite-trap bound-state population, rabi/trap = " + label(r));
        if (c.run.volterra)
            table.add_column("P_volterra[r=" + label(r) + "]", "late-time mean of |A|^2, rabi/trap = " + label(r));
    }
    std::vector<std::vector<Cell>> got(ratios.size());
    for (std::size_t r = 0; r < ratios.size(); ++r)
        for (auto& f : cells[r]) got[r].push_back(f.get());

    json rows = json::array();
    for (std::size_t i = 0; i < list.size(); ++i) {
        const double d = list[i];
        const double alpha = derive(base).alpha;
        const double ideal = steady_population(alpha, d * alpha * alpha);
        std::vector<double> row{d, ideal};
        json j;
        j["detuning_alpha2"] = d;
        j["steady_population_ideal"] = ideal;
        json tr = json::array(), pl = json::array();
        for (std::size_t r = 0; r < ratios.size(); ++r) {
            row.push_back(got[r][i].trap_pop);
            tr.push_back(got[r][i].trap_pop);
            if (c.run.volterra) {
                row.push_back(got[r][i].plateau);
                pl.push_back(number(got[r][i].plateau));
            }
        }
        j["finite_trap_population"] = tr;
        if (c.run.volterra) j["volterra_plateau"] = pl;
        auto decreasing = [&](auto pick) {
            for (std::size_t r = 1; r < ratios.size(); ++r)
                if (!(pick(got[r][i]) < pick(got[r - 1][i]))) return false;
            return true;
        };
        if (d < 0.0 && ratios.size() > 1) {
            j["finite_trap_population_decreasing_along_ratios"] = decreasing([](const Cell& x) { return x.trap_pop; });
            if (c.run.volterra)
                j["volterra_plateau_decreasing_along_ratios"] = decreasing([](const Cell& x) { return x.plateau; });
        }
        rows.push_back(j);
        table.add_row(std::move(row));
    }

    ScenarioResult res;
    res.tables.push_back(std::move(table));
    res.summary["ratios"] = ratios;
    res.summary["detunings"] = rows;
    return res;
}

// --- collective -----------------------------------------------------------

ScenarioResult run_lattice_decay(const ScenarioConfig& c)
{
    const ModelParams p = resolve_model(c.model);
    const Lattice lat = lattice_from(p, c.model.periodic);
    const RateMatrix m = build_rate_matrix(p, lat);
    const CollectiveRate coll = symmetric_decay_rate(m);
    const DerivedParams d = derive(p);
    const double g0 = d.gamma0_abs;
    const auto sites = static_cast<double>(m.size());

    double rho = 0.0;
    for (Eigen::Index i = 0; i < m.size(); ++i) rho = std::max(rho, m.entries.row(i).cwiseAbs().sum());
    const double scale = std::max(std::abs(coll.value), g0);
    const double T = c.run.T > 0.0 ? c.run.T / g0 : 3.0 / scale;
    const double dt = c.run.dt > 0.0 ? c.run.dt / g0 : 0.02 / rho;

    Eigen::VectorXcd a0 = Eigen::VectorXcd::Zero(m.size());
    if (c.run.initial == "symmetric") {
        for (Eigen::Index i = 0; i < m.size(); ++i)
            a0(i) = std::exp(cplx{0.0, dot(p.laser_k, lat.positions()[static_cast<std::size_t>(i)])});
        a0 /= a0.norm();
    } else {
        const auto site = c.run.initial_site >= 0 ? static_cast<std::size_t>(c.run.initial_site) : central_site(lat);
        a0(static_cast<Eigen::Index>(site)) = 1.0;
    }
    EvolveOptions opt;
    opt.stride = static_cast<std::size_t>(c.run.stride);
    const ExcitationTrajectory tr = evolve_single_excitation(m, a0, T, dt, opt);

    ResultTable table;
    table.name = "survival";
    table.add_column("t_gamma0", "time in units of 1/|gamma0|");
    table.add_column("survival", "sum_i |A_i|^2");
    table.add_column("symmetric_reference", "exp(-2 Gamma_coll t)");
    std::vector<double> times, surv;
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        const double s = tr.amplitudes[k].squaredNorm();
        times.push_back(tr.times[k]);
        surv.push_back(s);
        table.add_row({tr.times[k] * g0, s, std::exp(-2.0 * coll.value * tr.times[k])});
    }

    ScenarioResult r;
    r.tables.push_back(std::move(table));
    json& s = r.summary;
    s["model"] = model_json(p);
    s["periodic"] = c.model.periodic;
    s["sites"] = m.size();
    s["initial"] = c.run.initial;
    s["gamma_coll"] = coll.value;
    s["gamma_coll_over_M_gamma0"] = coll.value / (sites * g0);
    s["gamma_coll_over_chi_gamma0"] = coll.value / (*d.chi * g0);
    s["row_sum_min"] = coll.row_min;
    s["row_sum_max"] = coll.row_max;
    s["warnings"] = coll.warnings;
    s["regime"] = to_string(classify_collective_regime(*d.xi, *d.chi, static_cast<long>(m.size())));
    s["regime_note"] = p.dim == 3 ? "" : "regime classes are only asserted for dim = 3";
    s["min_eigenvalue_real_part_over_gamma0"] = min_eigenvalue_real_part(m) / g0;
    s["fitted_decay_rate_over_gamma0"] = number(-0.5 * log_slope(times, surv, 0.0, T) / g0);
    return r;
}

ScenarioResult run_superradiance(const ScenarioConfig& c)
{
    const ModelParams p0 = resolve_model(c.model);
    std::vector<double> xis = c.run.xi_values;
    if (xis.empty()) xis.push_back(*derive(p0).xi);

    struct Case {
        double xi;
        ModelParams p;
        RateMatrix m;
        double g0;
    };
    auto make = [&](double xi) {
        Case k{xi, model_at_xi(c.model, xi, 1.0), {}, 0.0};
        k.m = build_rate_matrix(k.p, lattice_from(k.p, c.model.periodic));
        k.g0 = k.m.gamma0_abs;
        return k;
    };
    std::vector<Case> cases;
    for (double xi : xis) cases.push_back(make(xi));

    // Common grid in tau = gamma0 t.
    double dtau = c.run.dt;
    if (!(dtau > 0.0)) {
        dtau = 1.0;
        for (const auto& k : cases) dtau = std::min(dtau, default_semiclassical_dt(k.m) * k.g0);
    }
    const double tau_end = c.run.T > 0.0 ? c.run.T : 3.0;
    const auto steps = static_cast<std::size_t>(std::ceil(tau_end / dtau - 1e-9));
    dtau = tau_end / static_cast<double>(steps);
    SemiclassicalOptions opt;
    opt.stride = static_cast<std::size_t>(c.run.stride);
    const auto sites = cases.front().m.size();

    std::vector<std::future<SemiclassicalTrajectory>> runs;
    for (const auto& k : cases)
        runs.push_back(std::async(std::launch::async, [&k, tau_end, dtau, opt, sites] {
            return integrate_semiclassical(CorrelationState::fully_inverted(sites), k.m, tau_end / k.g0, dtau / k.g0,
                                           opt);
        }));
    std::future<SemiclassicalTrajectory> control;
    if (c.run.diagonal_control) {
        const Case& k = cases.front();
        control = std::async(std::launch::async, [&k, tau_end, dtau, opt, sites] {
            return integrate_semiclassical(CorrelationState::fully_inverted(sites), diagonal_only(k.m), tau_end / k.g0,
                                           dtau / k.g0, opt);
        });
    }

    std::vector<SemiclassicalTrajectory> trs;
    for (auto& f : runs) trs.push_back(f.get());

    ResultTable table;
    table.name = "emission_rate";
    table.add_column("tau", "time in units of 1/gamma0 (gamma0 of each curve)");
    for (const auto& k : cases) {
        table.add_column("R_total[xi=" + label(k.xi) + "]", "emission rate R/gamma0, xi = " + label(k.xi));
        table.add_column("R_per_atom[xi=" + label(k.xi) + "]", "R/(M gamma0), xi = " + label(k.xi));
    }
    SemiclassicalTrajectory ctl;
    if (c.run.diagonal_control) {
        ctl = control.get();
        table.add_column("R_diagonal", "R/gamma0 with off-diagonal rates removed");
    }
    const double msites = static_cast<double>(sites);
    for (std::size_t k = 0; k < trs.front().times.size(); ++k) {
        std::vector<double> row{trs.front().times[k] * cases.front().g0};
        for (std::size_t i = 0; i < cases.size(); ++i) {
            row.push_back(trs[i].rate[k] / cases[i].g0);
            row.push_back(trs[i].rate[k] / (msites * cases[i].g0));
        }
        if (c.run.diagonal_control) row.push_back(ctl.rate[k] / cases.front().g0);
        table.add_row(std::move(row));
    }

    auto monotone_decreasing = [](const std::vector<double>& v) {
        for (std::size_t k = 1; k < v.size(); ++k)
            if (!(v[k] < v[k - 1])) return false;
        return true;
    };

    json per = json::array();
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const Case& k = cases[i];
        const double closed = emission_slope_t0(k.m);
        const double numeric = emission_slope_numeric(k.m);
        const auto peak = std::max_element(trs[i].rate.begin(), trs[i].rate.end());
        const DerivedParams d = derive(k.p);
        json j;
        j["xi"] = k.xi;
        j["detuning"] = k.p.detuning;
        j["gamma0"] = k.g0;
        j["chi"] = *d.chi;
        j["gamma_coll_over_gamma0"] = symmetric_decay_rate(k.m).value / k.g0;
        j["regime"] = to_string(classify_collective_regime(k.xi, *d.chi, static_cast<long>(sites)));
        j["slope_t0_over_gamma0_sq"] = closed / (k.g0 * k.g0);
        j["slope_t0_numeric_over_gamma0_sq"] = numeric / (k.g0 * k.g0);
        j["slope_relative_difference"] = std::abs(numeric - closed) / std::abs(closed);
        j["slope_sign"] = closed > 0.0 ? 1 : (closed < 0.0 ? -1 : 0);
        j["rate_nonmonotone"] = !monotone_decreasing(trs[i].rate);
        j["peak_tau"] = trs[i].times[static_cast<std::size_t>(peak - trs[i].rate.begin())] * k.g0;
        j["peak_rate_over_gamma0"] = *peak / k.g0;
        j["max_hermiticity_drift"] = trs[i].max_hermiticity_drift;
        j["max_population_mismatch"] = trs[i].max_population_mismatch;
        j["max_local_error"] = trs[i].max_local_error;
        per.push_back(j);
    }

    // Sign change of the closed-form slope inside the bracket.
    auto slope = [&](double xi) { return emission_slope_t0(make(xi).m); };
    double lo = c.run.xi_bracket[0], hi = c.run.xi_bracket[1];
    json xi_star = nullptr;
    const double flo = slope(lo), fhi = slope(hi);
    if ((flo < 0.0) != (fhi < 0.0)) {
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            ((slope(mid) < 0.0) == (flo < 0.0) ? lo : hi) = mid;
        }
        xi_star = 0.5 * (lo + hi);
    }

    ScenarioResult r;
    r.tables.push_back(std::move(table));
    r.summary["model"] = model_json(cases.front().p);
    r.summary["sites"] = sites;
    r.summary["periodic"] = c.model.periodic;
    r.summary["dtau"] = dtau;
    r.summary["xi"] = per;
    r.summary["xi_bracket"] = c.run.xi_bracket;
    r.summary["slope_sign_change_xi"] = xi_star;
    if (c.run.diagonal_control) r.summary["diagonal_control_monotone"] = monotone_decreasing(ctl.rate);
    return r;
}

ScenarioResult run_hopping(const ScenarioConfig& c)
{
    const ModelParams p = resolve_model(c.model);
    const Lattice lat = lattice_from(p, c.model.periodic);
    const RateMatrix rates = build_rate_matrix(p, lat);
    const CouplingMatrix cm = coupling_from_rates(rates);
    const Eigen::Index sites = cm.J.rows();
    double jmax = 0.0;
    for (Eigen::Index i = 0; i < sites; ++i)
        for (Eigen::Index j = 0; j < sites; ++j)
            if (i != j) jmax = std::max(jmax, std::abs(cm.J(i, j)));
    if (!(jmax > 0.0)) throw ParameterError("hopping: no coupling between sites");

    const double T = (c.run.T > 0.0 ? c.run.T : 100.0) / jmax;
    const double dt = (c.run.dt > 0.0 ? c.run.dt : 0.5) / jmax;
    const auto site = c.run.initial_site >= 0 ? static_cast<std::size_t>(c.run.initial_site) : central_site(lat);
    Eigen::VectorXcd a0 = Eigen::VectorXcd::Zero(sites);
    a0(static_cast<Eigen::Index>(site)) = 1.0;
    const ExcitationTrajectory tr = evolve_hopping(cm, a0, T, dt);

    ResultTable table;
    table.name = "hopping";
    table.add_column("t_J", "time in units of 1/max|J_ij|");
    table.add_column("norm", "sum_i |A_i|^2");
    const bool all_sites = sites <= 256;
    if (all_sites)
        for (Eigen::Index i = 0; i < sites; ++i)
            table.add_column("P_" + std::to_string(i), "|A_i|^2 at site " + std::to_string(i));
    double norm_err = 0.0;
    const auto stride = static_cast<std::size_t>(c.run.stride);
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        const double n = tr.amplitudes[k].squaredNorm();
        norm_err = std::max(norm_err, std::abs(std::sqrt(n) - 1.0));
        if (k % stride != 0 && k + 1 != tr.times.size()) continue;
        std::vector<double> row{tr.times[k] * jmax, n};
        if (all_sites)
            for (Eigen::Index i = 0; i < sites; ++i) row.push_back(std::norm(tr.amplitudes[k](i)));
        table.add_row(std::move(row));
    }

    // Yukawa envelope: J_ij = -|gamma0| xi e^{-r/(xi d0)} / (r/d0) without laser phase.
    const DerivedParams d = derive(p);
    double yukawa = 0.0, max_offdiag = -1e300, asym = 0.0;
    for (Eigen::Index i = 0; i < sites; ++i)
        for (Eigen::Index j = 0; j < sites; ++j) {
            asym = std::max(asym, std::abs(cm.J(i, j) - cm.J(j, i)));
            if (i == j) continue;
            max_offdiag = std::max(max_offdiag, cm.J(i, j).real());
            const double n = norm(lat.separation(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
            const double env = d.gamma0_abs * *d.xi * std::exp(-n / *d.xi) / n;
            yukawa = std::max(yukawa, std::abs(std::abs(cm.J(i, j)) - env) / env);
        }

    ScenarioResult r;
    r.tables.push_back(std::move(table));
    json& s = r.summary;
    s["model"] = model_json(p);
    s["sites"] = sites;
    s["initial_site"] = site;
    s["J_max"] = jmax;
    s["J_is_real"] = cm.is_real(1e-12 * jmax);
    s["J_max_asymmetry"] = asym;
    s["J_max_offdiagonal_real"] = max_offdiag;
    s["yukawa_max_relative_deviation"] = yukawa;
    s["max_norm_error"] = norm_err;
    return r;
}

ScenarioResult run_meanfield(const ScenarioConfig& c)
{
    const ModelParams p = resolve_model(c.model);
    const Lattice lat = lattice_from(p, c.model.periodic);
    const double T = (c.run.T > 0.0 ? c.run.T : 2000.0) / p.rabi;
    const double dt = c.run.dt > 0.0 ? c.run.dt / p.rabi : default_meanfield_dt(p);
    MeanFieldOptions opt;
    opt.stride = static_cast<std::size_t>(c.run.stride);
    const MeanFieldState init{cplx{c.run.y0_re, c.run.y0_im}, c.run.z0};
    const MeanFieldTrajectory tr = solve_meanfield(p, lat, init, T, dt, opt);

    ResultTable table;
    table.name = "meanfield";
    table.add_column("t", "time in units of 1/rabi");
    table.add_column("y_re", "Re y");
    table.add_column("y_im", "Im y");
    table.add_column("y_abs", "|y|");
    table.add_column("z", "mean inversion");
    for (std::size_t k = 0; k < tr.times.size(); ++k)
        table.add_row({tr.times[k] * p.rabi, tr.y[k].real(), tr.y[k].imag(), std::abs(tr.y[k]), tr.z[k]});

    ScenarioResult r;
    r.tables.push_back(std::move(table));
    json& s = r.summary;
    s["model"] = model_json(p);
    s["periodic"] = c.model.periodic;
    s["T"] = T;
    s["dt"] = dt;
    s["y0"] = {c.run.y0_re, c.run.y0_im};
    s["z0"] = c.run.z0;
    const double y0 = std::hypot(c.run.y0_re, c.run.y0_im);
    if (tr.times.size() >= 10) {
        const PolarizationSummary ps = polarization_summary(tr, c.run.tail_fraction);
        s["y_st"] = {ps.y_st.real(), ps.y_st.imag()};
        s["y_abs_st"] = ps.y_abs_st;
        s["z_st"] = ps.z_st;
        s["rotation_frequency"] = ps.rotation_frequency;
        s["tail_drift"] = ps.drift;
        s["converged"] = ps.converged;
        s["polarized"] = y0 > 0.0 ? json(ps.y_abs_st > 10.0 * y0) : json(ps.y_abs_st > 0.0);
    }
    s["max_length_drift"] = tr.max_length_drift;
    s["z_out_of_range"] = tr.z_out_of_range;
    return r;
}

ScenarioResult run_rates_table(const ScenarioConfig& c)
{
    const ModelParams p0 = resolve_model(c.model);
    std::vector<double> xis = c.run.xi_values;
    std::vector<double> signs = c.run.signs;
    if (xis.empty()) xis.push_back(*derive(p0).xi);
    if (signs.empty()) signs.push_back(p0.detuning < 0.0 ? -1.0 : 1.0);

    struct Job {
        double xi, sign;
        int n;
        ModelParams p;
    };
    std::vector<Job> jobs;
    for (double sign : signs)
        for (double xi : xis)
            for (int n = 1; n <= c.run.n_max; ++n) jobs.push_back({xi, sign, n, model_at_xi(c.model, xi, sign)});
    std::vector<std::future<std::pair<PairRate, PairRate>>> futures;
    for (const auto& j : jobs)
        futures.push_back(std::async(std::launch::async, [j] {
            const Vec3 sep{double(j.n), 0.0, 0.0};
            return std::make_pair(rate_pair(j.p, sep), rate_pair_numeric(j.p, sep));
        }));

    ResultTable table;
    table.name = "rates";
    table.add_column("xi", "range parameter");
    table.add_column("sign", "+1 above the band, -1 below");
    table.add_column("n", "separation in lattice units (along x)");
    table.add_column("re_closed", "Re rate / |gamma0|, closed form");
    table.add_column("im_closed", "Im rate / |gamma0|, closed form");
    table.add_column("re_quad", "Re rate / |gamma0|, time quadrature");
    table.add_column("im_quad", "Im rate / |gamma0|, time quadrature");
    table.add_column("rel_diff", "|closed - quad| / |closed|");
    table.add_column("quad_error", "reported quadrature error / |closed|");
    table.add_column("converged", "1 if the quadrature met its tolerance");

    double max_diff = 0.0, max_err = 0.0, max_re_below = 0.0;
    bool all_conv = true;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const auto [closed, quad] = futures[i].get();
        const double g0 = derive(jobs[i].p).gamma0_abs;
        const double mag = std::abs(closed.value);
        const double diff = std::abs(closed.value - quad.value) / mag;
        max_diff = std::max(max_diff, diff);
        max_err = std::max(max_err, quad.error / mag);
        all_conv = all_conv && quad.converged;
        if (jobs[i].sign < 0.0) max_re_below = std::max(max_re_below, std::abs(quad.value.real()) / std::abs(quad.value));
        table.add_row({jobs[i].xi, jobs[i].sign, double(jobs[i].n), closed.value.real() / g0, closed.value.imag() / g0,
                       quad.value.real() / g0, quad.value.imag() / g0, diff, quad.error / mag,
                       quad.converged ? 1.0 : 0.0});
    }

    ScenarioResult r;
    r.tables.push_back(std::move(table));
    r.summary["xi_values"] = xis;
    r.summary["signs"] = signs;
    r.summary["n_max"] = c.run.n_max;
    r.summary["max_relative_difference"] = max_diff;
    r.summary["max_quadrature_error"] = max_err;
    r.summary["all_converged"] = all_conv;
    r.summary["max_real_fraction_below_band"] = max_re_below;
    return r;
}

std::string csv_number(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.11e", v);
    return buf;
}

std::uint64_t fnv1a(const std::string& s)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace

void ResultTable::add_column(std::string column, std::string note)
{
    if (!rows.empty()) throw std::logic_error("add_column after rows were added");
    columns.push_back(std::move(column));
    notes.push_back(std::move(note));
}

void ResultTable::add_row(std::vector<double> row)
{
    if (row.size() != columns.size()) throw std::logic_error("row width differs from column count in " + name);
    rows.push_back(std::move(row));
}

std::string version_string() { return MATTERWAVE_VERSION; }

const std::string& conventions_text()
{
    static const std::string text =
        "kernel G(t)=rabi^2 e^{i detuning t}(1+i trap t)^{-3/2};"
        "alpha_kernel=rabi^2/trap^{3/2};alpha=2 sqrt(pi) alpha_kernel;"
        "gamma0=alpha sqrt(detuning) is an amplitude rate;"
        "single-emitter detuning is dressed, kernel detuning = detuning + 2 rabi^2/trap;"
        "dA/dt=-Gamma A;Gamma_ij carries exp(-i k_L.(r_i-r_j));J=-i Gamma;"
        "R=-(1/2) sum dz/dt;same-site triples exact;"
        "meanfield dy/dt=+z int G_coll y, dz/dt=-4 Re(conj(y) int G_coll y);"
        "y_st=|y| tail mean with final phase";
    return text;
}

std::string conventions_hash()
{
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(conventions_text())));
    return buf;
}

ScenarioResult run_scenario(const ScenarioConfig& c)
{
    const auto issues = validate_config(c);
    if (!issues.empty()) throw ConfigError(issues);
    ScenarioResult r;
    switch (c.kind) {
    case ScenarioKind::single_decay: r = run_single_decay(c); break;
    case ScenarioKind::steady_state_scan: r = run_steady_state_scan(c); break;
    case ScenarioKind::lattice_decay: r = run_lattice_decay(c); break;
    case ScenarioKind::superradiance: r = run_superradiance(c); break;
    case ScenarioKind::hopping: r = run_hopping(c); break;
    case ScenarioKind::meanfield: r = run_meanfield(c); break;
    case ScenarioKind::rates_table: r = run_rates_table(c); break;
    }
    json head;
    head["scenario"] = to_string(c.kind);
    head["name"] = c.name;
    head["version"] = version_string();
    head["conventions"] = conventions_hash();
    for (auto& [k, v] : r.summary.items()) head[k] = v;
    r.summary = std::move(head);
    return r;
}

std::string format_csv(const ResultTable& t, const ScenarioConfig& c)
{
    std::ostringstream os;
    os << "# matterwave " << version_string() << "\n";
    os << "# conventions " << conventions_hash() << "\n";
    os << "# scenario " << to_string(c.kind) << "\n";
    os << "# table " << t.name << "\n";
    std::istringstream cfg(serialize_config(c));
    std::string line;
    while (std::getline(cfg, line))
        if (!line.empty()) os << "# config " << line << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << "# column " << t.columns[i] << ": " << t.notes[i] << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_number(row[i]);
        os << "\n";
    }
    return os.str();
}

std::vector<std::filesystem::path> write_outputs(const ScenarioResult& r, const ScenarioConfig& c,
                                                 const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
    std::vector<std::filesystem::path> written;
    auto put = [&](const std::filesystem::path& path, const std::string& text) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
        out << text;
        out.close();
        if (!out) throw std::runtime_error("write failed for " + path.string());
        written.push_back(path);
    };
    if (c.output.csv)
        for (const auto& t : r.tables) put(dir / (c.name + "_" + t.name + ".csv"), format_csv(t, c));
    if (c.output.json) put(dir / (c.name + "_summary.json"), r.summary.dump(2) + "\n");
    return written;
}

}  // namespace matterwave
