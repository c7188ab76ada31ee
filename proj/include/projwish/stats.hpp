// Goodness-of-fit statistics for the verification harness: exact KS
// statistics with asymptotic p-values and quantile binning helpers.

#pragma once

#include <functional>
#include <vector>

namespace projwish {

/// Tail of the Kolmogorov distribution Q(lambda) = 2 sum_j (-1)^{j-1}
/// exp(-2 j^2 lambda^2), truncated at 100 terms.
double kolmogorov_tail(double lambda);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
    double n_effective = 0.0;
};

/// One-sample KS test against a continuous cdf; the statistic is exact,
/// the p-value uses the asymptotic Kolmogorov series.
KsResult ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Variant taking already-sorted samples and their cdf values, for laws
/// whose cdf is cheapest to evaluate in one ascending sweep.
KsResult ks_one_sample_sorted(const std::vector<double>& sorted,
                              const std::vector<double>& cdf_values);

/// Two-sample KS test with the standard asymptotic p-value at effective
/// size n1 n2 / (n1 + n2).
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Interior edges of `bins` equal-mass bins (quantiles of the data).
std::vector<double> quantile_bin_edges(std::vector<double> values, int bins);

/// Index of the bin containing v for the given ascending interior edges.
int bin_index(const std::vector<double>& edges, double v);

}  // namespace projwish
