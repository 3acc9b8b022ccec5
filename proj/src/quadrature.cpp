#include "matterwave/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <tuple>

namespace matterwave::quad {

namespace {

constexpr double kPiLocal = 3.141592653589793238462643383279502884;

// Kronrod 15-point abscissae (positive half) and weights; Gauss 7-point weights.
constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    cplx value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const Integrand& f, double a, double b, std::size_t& evals)
{
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const cplx fc = f(c);
    cplx kron = fc * wgk[7];
    cplx gauss = fc * wg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * xgk[j];
        const cplx s = f(c - dx) + f(c + dx);
        kron += wgk[j] * s;
        if (j % 2 == 1) gauss += wg[j / 2] * s;
    }
    evals += 15;
    Panel p{a, b, kron * h, std::abs((kron - gauss) * h)};
    return p;
}

Result adapt(const Integrand& f, std::vector<Panel> panels, std::size_t evals, const Options& opt)
{
    std::priority_queue<Panel> heap(panels.begin(), panels.end());
    auto totals = [&] {
        cplx v{};
        double e = 0.0;
        auto copy = heap;
        while (!copy.empty()) {
            v += copy.top().value;
            e += copy.top().error;
            copy.pop();
        }
        return std::pair{v, e};
    };
    cplx value;
    double error;
    std::tie(value, error) = totals();
    // Running sums drift; recompute from the heap every so often.
    std::size_t since_resum = 0;
    while (error > std::max(opt.abs_tol, opt.rel_tol * std::abs(value)) && heap.size() < opt.max_panels) {
        Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            heap.push(worst);
            break;
        }
        Panel left = gk15(f, worst.a, mid, evals);
        Panel right = gk15(f, mid, worst.b, evals);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        if (++since_resum == 64) {
            std::tie(value, error) = totals();
            since_resum = 0;
        }
    }
    std::tie(value, error) = totals();
    Result r;
    r.value = value;
    r.error = error;
    r.evaluations = evals;
    r.converged = error <= std::max(opt.abs_tol, opt.rel_tol * std::abs(value)) && std::isfinite(std::abs(value));
    return r;
}

}  // namespace

Result integrate(const Integrand& f, double a, double b, const Options& opt)
{
    if (a == b) return Result{{}, 0.0, true, 0};
    std::size_t evals = 0;
    std::vector<Panel> panels{gk15(f, a, b, evals)};
    return adapt(f, std::move(panels), evals, opt);
}

Result integrate_panels(const Integrand& f, const std::vector<double>& breaks, const Options& opt)
{
    if (breaks.size() < 2) return Result{{}, 0.0, true, 0};
    std::size_t evals = 0;
    std::vector<Panel> panels;
    panels.reserve(breaks.size() - 1);
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k)
        panels.push_back(gk15(f, breaks[k], breaks[k + 1], evals));
    Options o = opt;
    o.max_panels = std::max(opt.max_panels, 4 * panels.size());
    return adapt(f, std::move(panels), evals, o);
}

Result integrate_to_infinity(const Integrand& f, double a, double scale, const Options& opt)
{
    auto mapped = [&](double u) -> cplx {
        if (u >= 1.0) return {};
        const double one_minus = 1.0 - u;
        const double x = a + scale * u / one_minus;
        const cplx v = f(x);
        if (v == cplx{}) return v;
        return v * (scale / (one_minus * one_minus));
    };
    // Pre-split so that the bulk near x - a ~ scale is resolved from the start.
    const std::vector<double> breaks{0.0, 0.25, 0.5, 0.75, 0.9, 0.97, 1.0};
    return integrate_panels(mapped, breaks, opt);
}

GaussLegendre::GaussLegendre(int n) : nodes(n), weights(n)
{
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPiLocal * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute derivative at the converged node
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
}

}  // namespace matterwave::quad
