#include "gpx/quadrature.hpp"

#include "gpx/errors.hpp"
#include "gpx/optimize.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace gpx {

namespace {

constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the nodes kKronrodNodes[1], [3], [5], [7].
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kLogTiny = -690.0;  // log(1e-300)
constexpr double kLogHuge = 690.0;

struct Panel {
    double a;
    double b;
    double value;
    double error;

    bool operator<(const Panel& other) const { return error < other.error; }
};

}  // namespace

LogQuadratureResult integrate_log(const std::function<double(double)>& log_f, double lower,
                                  double upper, const LogQuadratureOptions& opts) {
    if (!(lower >= 0) || !(upper > lower)) {
        throw DomainError("integrate_log: need 0 <= lower < upper");
    }
    // h(y) = log f(e^y) + y, the log-integrand against dy.
    auto h = [&](double y) {
        const double v = log_f(std::exp(y)) + y;
        return std::isnan(v) ? -std::numeric_limits<double>::infinity() : v;
    };
    const double y_lo = lower > 0 ? std::log(lower) : kLogTiny;
    const double y_hi = std::isfinite(upper) ? std::log(upper) : kLogHuge;
    if (!(y_hi > y_lo)) {
        throw DomainError("integrate_log: empty range");
    }

    const std::size_t m = std::max<std::size_t>(opts.scan_points, 16);
    std::vector<double> ys(m);
    std::vector<double> hs(m);
    std::size_t best = 0;
    for (std::size_t i = 0; i < m; ++i) {
        ys[i] = y_lo + (y_hi - y_lo) * (static_cast<double>(i) + 0.5) / static_cast<double>(m);
        hs[i] = h(ys[i]);
        if (hs[i] > hs[best]) {
            best = i;
        }
    }
    if (!std::isfinite(hs[best])) {
        return {-std::numeric_limits<double>::infinity(), 0.0, 0, std::exp(ys[best])};
    }
    const double cell = (y_hi - y_lo) / static_cast<double>(m);
    const Minimum peak_min = golden_section([&](double y) { return -h(y); },
                                            std::max(y_lo, ys[best] - cell),
                                            std::min(y_hi, ys[best] + cell), 1e-10);
    double y_peak = ys[best];
    double peak = hs[best];
    if (-peak_min.value > peak) {
        y_peak = peak_min.x;
        peak = -peak_min.value;
    }

    const double threshold = peak - opts.cutoff;
    std::size_t first = 0;
    while (first < m && !(hs[first] >= threshold)) {
        ++first;
    }
    std::size_t last = m - 1;
    while (last > 0 && !(hs[last] >= threshold)) {
        --last;
    }
    const double a = first == 0 ? y_lo : ys[first - 1];
    const double b = last + 1 >= m ? y_hi : ys[last + 1];

    auto panel = [&](double pa, double pb) {
        const double centre = 0.5 * (pa + pb);
        const double half = 0.5 * (pb - pa);
        double kronrod = 0.0;
        double gauss = 0.0;
        for (std::size_t k = 0; k < kKronrodNodes.size(); ++k) {
            const double x = kKronrodNodes[k] * half;
            double fsum = std::exp(h(centre + x) - peak);
            if (k < 7) {
                fsum += std::exp(h(centre - x) - peak);
            }
            kronrod += kKronrodWeights[k] * fsum;
            if (k % 2 == 1) {
                gauss += kGaussWeights[k / 2] * fsum;
            }
        }
        return Panel{pa, pb, kronrod * half, std::abs(kronrod - gauss) * half};
    };

    std::priority_queue<Panel> queue;
    std::vector<double> cuts;
    for (std::size_t i = first; i <= last && i < m; ++i) {
        cuts.push_back(ys[i]);
    }
    cuts.push_back(y_peak);
    cuts.push_back(a);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    double total = 0.0;
    double error = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i] < a || cuts[i + 1] > b) {
            continue;
        }
        Panel p = panel(cuts[i], cuts[i + 1]);
        total += p.value;
        error += p.error;
        queue.push(p);
    }

    std::size_t refinements = 0;
    while (error > opts.rel_tol * total) {
        if (refinements >= opts.max_refinements) {
            throw QuadratureError("integrate_log: tolerance not reached within the refinement budget");
        }
        const Panel worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const Panel left = panel(worst.a, mid);
        const Panel right = panel(mid, worst.b);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        ++refinements;
    }
    // Re-sum to shed the drift of the running totals.
    total = 0.0;
    error = 0.0;
    std::vector<Panel> panels;
    while (!queue.empty()) {
        panels.push_back(queue.top());
        queue.pop();
    }
    std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    for (const Panel& p : panels) {
        total += p.value;
        error += p.error;
    }
    return {peak + std::log(total), total > 0 ? error / total : 0.0, refinements, std::exp(y_peak)};
}

}  // namespace gpx
