#include "projwish/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace projwish {

namespace {

// Kronrod-15 abscissae (positive half) and weights, with the embedded
// Gauss-7 weights on the odd-indexed nodes.
constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691, 0.7415311855993944,
    0.5860872354676911, 0.4058451513773972, 0.2077849550078985, 0.0,
};
constexpr double kWgk[8] = {
    0.02293532201052922, 0.06309209262997855, 0.1047900103222502, 0.1406532597155259,
    0.1690047266392679,  0.1903505780647854,  0.2044329400752989, 0.2094821410847278,
};
constexpr double kWg[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189, 0.4179591836734694,
};

struct Panel {
    double a, b;
    QuadResult result;
};

QuadResult panel_estimate(const std::function<double(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    double kronrod = kWgk[7] * f(center);
    double gauss = kWg[3] * f(center);
    for (int i = 0; i < 7; ++i) {
        const double off = half * kXgk[i];
        const double pair = f(center - off) + f(center + off);
        kronrod += kWgk[i] * pair;
        if (i % 2 == 1) gauss += kWg[i / 2] * pair;
    }
    return {half * kronrod, std::abs(half * (kronrod - gauss))};
}

}  // namespace

QuadResult gauss_kronrod_15(const std::function<double(double)>& f, double a, double b) {
    return panel_estimate(f, a, b);
}

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double abs_tol, double rel_tol) {
    if (!(b >= a)) throw std::invalid_argument("integration bounds out of order");
    if (a == b) return {0.0, 0.0};

    constexpr int kMaxPanels = 4096;
    std::vector<Panel> stack{{a, b, panel_estimate(f, a, b)}};
    QuadResult total{0.0, 0.0};
    int panels = 0;

    // Depth-first refinement with a fixed split order keeps the
    // evaluation sequence, and hence the result, deterministic.
    while (!stack.empty()) {
        Panel p = stack.back();
        stack.pop_back();
        const double width_tol =
            (abs_tol + rel_tol * std::abs(p.result.value)) * ((p.b - p.a) / (b - a));
        if (p.result.error_estimate <= std::max(width_tol, 1e-300) || ++panels >= kMaxPanels ||
            p.b - p.a < 1e-14 * (b - a)) {
            total.value += p.result.value;
            total.error_estimate += p.result.error_estimate;
            continue;
        }
        const double mid = 0.5 * (p.a + p.b);
        stack.push_back({mid, p.b, panel_estimate(f, mid, p.b)});
        stack.push_back({p.a, mid, panel_estimate(f, p.a, mid)});
    }
    return total;
}

QuadResult integrate_semi_infinite(const std::function<double(double)>& f, double a,
                                   double abs_tol) {
    QuadResult total{0.0, 0.0};
    double left = a;
    double width = 1.0;
    constexpr int kMaxSegments = 64;
    for (int seg = 0; seg < kMaxSegments; ++seg) {
        const QuadResult part = integrate_adaptive(f, left, left + width, abs_tol, 1e-12);
        total.value += part.value;
        total.error_estimate += part.error_estimate;
        if (std::abs(part.value) < 1e-12 && seg > 0) return total;
        left += width;
        width *= 2.0;
    }
    throw std::runtime_error("semi-infinite quadrature tail did not fall below 1e-12");
}

}  // namespace projwish
