#include "projwish/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace projwish {

double kolmogorov_tail(double lambda) {
    if (lambda <= 0.2) return 1.0;  // Q exceeds 1 - 1e-10 there
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 100; ++j) {
        sum += sign * std::exp(-2.0 * j * j * lambda * lambda);
        sign = -sign;
    }
    return std::min(1.0, std::max(0.0, 2.0 * sum));
}

KsResult ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw std::invalid_argument("KS test needs samples");
    std::sort(samples.begin(), samples.end());
    std::vector<double> values(samples.size());
    for (size_t i = 0; i < samples.size(); ++i) values[i] = cdf(samples[i]);
    return ks_one_sample_sorted(samples, values);
}

KsResult ks_one_sample_sorted(const std::vector<double>& sorted,
                              const std::vector<double>& cdf_values) {
    if (sorted.empty() || sorted.size() != cdf_values.size())
        throw std::invalid_argument("KS test needs matching sample and cdf vectors");
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (size_t i = 0; i < sorted.size(); ++i) {
        const double fi = cdf_values[i];
        d = std::max(d, std::max((static_cast<double>(i) + 1.0) / n - fi,
                                 fi - static_cast<double>(i) / n));
    }
    return {d, kolmogorov_tail(std::sqrt(n) * d), n};
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("KS test needs samples");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    double d = 0.0;
    size_t i = 0;
    size_t j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    const double ne = na * nb / (na + nb);
    return {d, kolmogorov_tail(std::sqrt(ne) * d), ne};
}

std::vector<double> quantile_bin_edges(std::vector<double> values, int bins) {
    if (bins < 2) throw std::invalid_argument("need at least 2 bins");
    if (values.size() < static_cast<size_t>(bins))
        throw std::invalid_argument("fewer values than bins");
    std::sort(values.begin(), values.end());
    std::vector<double> edges;
    edges.reserve(bins - 1);
    for (int b = 1; b < bins; ++b) {
        const size_t idx = static_cast<size_t>(
            static_cast<double>(b) * static_cast<double>(values.size()) / bins);
        edges.push_back(values[std::min(idx, values.size() - 1)]);
    }
    return edges;
}

int bin_index(const std::vector<double>& edges, double v) {
    return static_cast<int>(std::upper_bound(edges.begin(), edges.end(), v) - edges.begin());
}

}  // namespace projwish
