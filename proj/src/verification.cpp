#include "projwish/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <future>
#include <numbers>
#include <sstream>

#include "projwish/frechet.hpp"
#include "projwish/version.hpp"

namespace projwish {

namespace {

// Stream-id offsets relative to the spec's base stream; experiments draw
// from disjoint substreams so no two stages share randomness.
constexpr std::uint64_t kMainStream = 0;
constexpr std::uint64_t kSecondaryStream = 1;
constexpr std::uint64_t kGroupStream = 2;
constexpr std::uint64_t kSigmaStream = 3;
constexpr std::uint64_t kShuffleStream = 7;

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

SpdPoint sigma_from_json(const Json& sigma_json, int dim, Field field, std::uint64_t seed,
                         std::uint64_t stream) {
    if (sigma_json.is_string()) {
        const std::string s = sigma_json.get<std::string>();
        if (s == "identity") return SpdPoint::identity(dim, field);
        if (s == "random") {
            RngStream rng(seed, stream + kSigmaStream);
            return random_spd(dim, field, rng);
        }
        throw std::invalid_argument("sigma string must be \"identity\" or \"random\"");
    }
    const HermMatrix m = matrix_from_json(sigma_json);
    if (m.dim() != dim || m.field() != field)
        throw std::invalid_argument("sigma matrix does not match the experiment's d/field");
    return SpdPoint(m);
}

std::vector<UnitDetPoint> draw_projective(const WishartParams& p, std::int64_t count,
                                          RngStream& rng) {
    std::vector<UnitDetPoint> out;
    out.reserve(static_cast<size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) out.push_back(sample_projective_wishart(p, rng));
    return out;
}

double max_entry_diff(const HermMatrix& a, const HermMatrix& b) {
    double worst = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
    return worst;
}

ExperimentReport make_report(const ExperimentSpec& spec) {
    ExperimentReport report;
    report.id = spec.id;
    report.type = spec.type;
    report.seed = spec.seed;
    report.stream = spec.stream;
    report.version = kVersionString;
    report.timestamp = provenance_timestamp();
    return report;
}

void finish_report(ExperimentReport& report) {
    report.passed = !report.checks.empty();
    for (const CheckResult& c : report.checks) report.passed = report.passed && c.passed;
}

}  // namespace

ExperimentSpec ExperimentSpec::from_json(const Json& j) {
    const std::string id = j.at("id").get<std::string>();
    const std::string type = j.at("type").get<std::string>();
    if (type != "frechet" && type != "radial_ks" && type != "invariance" &&
        type != "density_consistency")
        throw std::invalid_argument("experiment '" + id + "' has unknown type '" + type + "'");
    const int d = j.at("d").get<int>();
    const Field field = field_from_string(j.at("field").get<std::string>());
    const int n = j.at("n").get<int>();
    const std::uint64_t seed = j.at("seed").get<std::uint64_t>();
    const std::uint64_t stream = j.value("stream", std::uint64_t{0});

    ExperimentSpec spec{
        id,
        type,
        WishartParams(sigma_from_json(j.value("sigma", Json("identity")), d, field, seed, stream),
                      n, field),
        j.at("sample_count").get<std::int64_t>(),
        seed,
        stream,
        j.value("alpha", 0.01),
        j.value("tolerance", 0.02),
        0.3,
        0.8,
        j.value("negative_control", false),
        j.value("reference_n", 0),
        j.value("output_prefix", id),
    };
    if (j.contains("ratio_range")) {
        spec.ratio_low = j.at("ratio_range").at(0).get<double>();
        spec.ratio_high = j.at("ratio_range").at(1).get<double>();
    }
    if (spec.sample_count < 100) throw std::invalid_argument("sample_count must be >= 100");
    if (!(spec.alpha > 0.0 && spec.alpha < 1.0))
        throw std::invalid_argument("alpha must lie in (0, 1)");
    return spec;
}

SuiteConfig SuiteConfig::from_json(const Json& j) {
    SuiteConfig config;
    config.threads = j.value("threads", 4);
    if (config.threads < 1) throw std::invalid_argument("threads must be >= 1");
    if (!j.contains("experiments") || !j.at("experiments").is_array() ||
        j.at("experiments").empty())
        throw std::invalid_argument("config must carry a non-empty experiments array");
    for (const Json& e : j.at("experiments"))
        config.experiments.push_back(ExperimentSpec::from_json(e));
    for (size_t a = 0; a < config.experiments.size(); ++a)
        for (size_t b = a + 1; b < config.experiments.size(); ++b)
            if (config.experiments[a].id == config.experiments[b].id)
                throw std::invalid_argument("duplicate experiment id '" + config.experiments[a].id +
                                            "'");
    return config;
}

Json ExperimentReport::to_json() const {
    Json j;
    j["id"] = id;
    j["type"] = type;
    j["passed"] = passed;
    Json checks_json = Json::array();
    for (const CheckResult& c : checks) {
        Json cj;
        cj["name"] = c.name;
        cj["passed"] = c.passed;
        cj["measured"] = c.measured;
        cj["threshold"] = c.threshold;
        if (!c.detail.empty()) cj["detail"] = c.detail;
        checks_json.push_back(std::move(cj));
    }
    j["checks"] = std::move(checks_json);
    j["stats"] = stats;
    j["provenance"] = Json{{"seed", seed},
                           {"stream", stream},
                           {"version", version},
                           {"timestamp", timestamp}};
    return j;
}

ExperimentReport run_frechet_experiment(const ExperimentSpec& spec) {
    ExperimentReport report = make_report(spec);
    const auto t0 = std::chrono::steady_clock::now();

    RngStream rng(spec.seed, spec.stream + kMainStream);
    const std::vector<UnitDetPoint> samples = draw_projective(spec.params, spec.sample_count, rng);
    const std::vector<UnitDetPoint> quarter(samples.begin(),
                                            samples.begin() + samples.size() / 4);

    const MeanConfig cfg{};
    const MeanResult full = karcher_mean(samples, {}, cfg);
    const MeanResult part = karcher_mean(quarter, {}, cfg);
    const UnitDetPoint sigma_bar = project(spec.params.sigma);

    const double dist_full = distance(full.mean, sigma_bar, cfg.scale);
    const double dist_part = distance(part.mean, sigma_bar, cfg.scale);
    const double ratio = dist_full / dist_part;

    report.checks.push_back({"solver-converged", full.converged && part.converged,
                             full.converged && part.converged ? 1.0 : 0.0, 1.0,
                             "iterations " + std::to_string(full.iterations) + "/" +
                                 std::to_string(part.iterations)});
    report.checks.push_back({"mean-distance", dist_full <= spec.tolerance, dist_full,
                             spec.tolerance, "distance of the Karcher mean to projected sigma"});
    report.checks.push_back({"convergence-ratio",
                             ratio >= spec.ratio_low && ratio <= spec.ratio_high, ratio,
                             spec.ratio_high,
                             "distance at N over distance at N/4, expected near 1/2"});

    report.stats["sample_count"] = spec.sample_count;
    report.stats["distance_full"] = dist_full;
    report.stats["distance_quarter"] = dist_part;
    report.stats["ratio"] = ratio;
    report.stats["iterations_full"] = full.iterations;
    report.stats["iterations_quarter"] = part.iterations;
    report.stats["final_grad_norm_full"] = full.final_grad_norm;
    report.stats["final_grad_norm_quarter"] = part.final_grad_norm;

    std::ostringstream csv;
    csv << "sample_count,distance_to_sigma_bar\n";
    csv << quarter.size() << "," << fmt(dist_part) << "\n";
    csv << samples.size() << "," << fmt(dist_full) << "\n";
    report.csv_files.emplace_back("convergence", csv.str());

    finish_report(report);
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

ExperimentReport run_radial_ks_experiment(const ExperimentSpec& spec) {
    ExperimentReport report = make_report(spec);
    const auto t0 = std::chrono::steady_clock::now();
    if (spec.params.dim() != 2)
        throw std::invalid_argument("radial_ks experiments require d = 2");

    RngStream rng(spec.seed, spec.stream + kMainStream);
    const UnitDetPoint sigma_bar = project(spec.params.sigma);
    std::vector<double> distances(static_cast<size_t>(spec.sample_count));
    for (double& r : distances)
        r = distance(sample_projective_wishart(spec.params, rng), sigma_bar,
                     kDefaultDistanceScale);
    std::sort(distances.begin(), distances.end());

    // A deliberately wrong law (n + 3) is the negative control.
    const int law_n = spec.negative_control ? spec.params.n + 3 : spec.params.n;
    const RadialLaw law(spec.params.field, law_n);
    const std::vector<double> cdfs = law.cdf_at_sorted(distances);
    const KsResult ks = ks_one_sample_sorted(distances, cdfs);

    if (spec.negative_control)
        report.checks.push_back({"negative-control-rejected", ks.p_value < spec.alpha, ks.p_value,
                                 spec.alpha, "wrong-law KS must reject"});
    else
        report.checks.push_back({"radial-ks", ks.p_value >= spec.alpha, ks.p_value, spec.alpha,
                                 "one-sample KS against the radial law"});

    report.stats["ks_statistic"] = ks.statistic;
    report.stats["ks_p_value"] = ks.p_value;
    report.stats["law_n"] = law_n;
    report.stats["law_k"] = law.k();
    report.stats["sample_count"] = spec.sample_count;

    std::ostringstream csv;
    csv << "bin_lo,bin_hi,observed,expected\n";
    const int bins = 40;
    const double hi = distances.back() * 1.05;
    std::vector<int> counts(bins, 0);
    for (double r : distances)
        counts[std::min(bins - 1, static_cast<int>(r / hi * bins))] += 1;
    for (int b = 0; b < bins; ++b) {
        const double lo = hi * b / bins;
        const double up = hi * (b + 1) / bins;
        const double expected = spec.sample_count * (law.cdf(up) - law.cdf(lo));
        csv << fmt(lo) << "," << fmt(up) << "," << counts[b] << "," << fmt(expected) << "\n";
    }
    report.csv_files.emplace_back("radial", csv.str());

    finish_report(report);
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

ExperimentReport run_invariance_experiment(const ExperimentSpec& spec) {
    ExperimentReport report = make_report(spec);
    const auto t0 = std::chrono::steady_clock::now();

    const SpdPoint& sigma = spec.params.sigma;
    const UnitDetPoint sigma_bar = project(sigma);
    RngStream group_rng(spec.seed, spec.stream + kGroupStream);

    // The negative control conjugates a quarter turn around a perturbed
    // parameter; the result no longer fixes sigma and shifts the law.
    SpdPoint conjugation_base = sigma;
    GroupElement rot = sample_stabilizer(spec.params.field, spec.params.dim(), group_rng);
    if (spec.negative_control) {
        Mat m = sigma.mat().mat();
        m(0, 0) *= 2.25;
        conjugation_base = SpdPoint(HermMatrix::from(m, sigma.field()));
        Mat quarter = Mat::identity(spec.params.dim());
        quarter(0, 0) = 0.0;
        quarter(0, 1) = -1.0;
        quarter(1, 0) = 1.0;
        quarter(1, 1) = 0.0;
        rot = GroupElement(std::move(quarter), spec.params.field);
    }
    const GroupElement r_sigma = conjugate_stabilizer(rot, conjugation_base);

    RngStream rng_a(spec.seed, spec.stream + kMainStream);
    RngStream rng_b(spec.seed, spec.stream + kSecondaryStream);
    const std::vector<UnitDetPoint> batch_a = draw_projective(spec.params, spec.sample_count, rng_a);
    const std::vector<UnitDetPoint> batch_b = draw_projective(spec.params, spec.sample_count, rng_b);

    if (!spec.negative_control) {
        // Deterministic form: the stabilizer acts by isometries fixing
        // sigma, so the multiset of distances to it is preserved.
        std::vector<double> base_d, moved_d;
        base_d.reserve(batch_a.size());
        moved_d.reserve(batch_a.size());
        for (const UnitDetPoint& x : batch_a) {
            base_d.push_back(distance(x, sigma_bar));
            moved_d.push_back(distance(group_act(r_sigma, x), sigma_bar));
        }
        std::sort(base_d.begin(), base_d.end());
        std::sort(moved_d.begin(), moved_d.end());
        double worst = 0.0;
        for (size_t i = 0; i < base_d.size(); ++i)
            worst = std::max(worst, std::abs(base_d[i] - moved_d[i]));
        report.checks.push_back({"isometry-multiset", worst <= 1e-9, worst, 1e-9,
                                 "sorted distance multisets before/after the stabilizer action"});

        // Lemma 2 forward direction over fresh stabilizer draws.
        double fixed_worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const GroupElement fresh = conjugate_stabilizer(
                sample_stabilizer(spec.params.field, spec.params.dim(), group_rng), sigma);
            fixed_worst =
                std::max(fixed_worst, max_entry_diff(group_act(fresh, sigma_bar).mat(),
                                                     sigma_bar.mat()));
        }
        report.checks.push_back({"stabilizer-fixed-point", fixed_worst <= 1e-9, fixed_worst, 1e-9,
                                 "max entrywise deviation of R_sigma . sigma_bar from sigma_bar"});
    }

    std::vector<double> first_diag_a, first_diag_b;
    first_diag_a.reserve(batch_a.size());
    first_diag_b.reserve(batch_b.size());
    for (const UnitDetPoint& x : batch_a) first_diag_a.push_back(x.mat()(0, 0).real());
    for (const UnitDetPoint& x : batch_b)
        first_diag_b.push_back(group_act(r_sigma, x).mat()(0, 0).real());
    const KsResult ks = ks_two_sample(first_diag_a, first_diag_b);

    if (spec.negative_control)
        report.checks.push_back({"negative-control-rejected", ks.p_value < spec.alpha, ks.p_value,
                                 spec.alpha, "wrong-stabilizer KS must reject"});
    else
        report.checks.push_back({"pushforward-ks", ks.p_value >= spec.alpha, ks.p_value,
                                 spec.alpha,
                                 "two-sample KS on the first diagonal entry across the action"});

    report.stats["ks_statistic"] = ks.statistic;
    report.stats["ks_p_value"] = ks.p_value;
    report.stats["sample_count"] = spec.sample_count;

    finish_report(report);
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

ExperimentReport run_density_consistency_experiment(const ExperimentSpec& spec) {
    ExperimentReport report = make_report(spec);
    const auto t0 = std::chrono::steady_clock::now();

    const int d = spec.params.dim();
    const int k = spec.params.k();
    const int n_ref = spec.reference_n > 0 ? spec.reference_n : spec.params.n + 2;
    if (n_ref == spec.params.n)
        throw std::invalid_argument("reference_n must differ from n");
    const WishartParams reference(spec.params.sigma, n_ref, spec.params.field);

    RngStream rng_main(spec.seed, spec.stream + kMainStream);
    RngStream rng_ref(spec.seed, spec.stream + kSecondaryStream);
    const HermMatrix sigma_inv = matrix_inverse(spec.params.sigma.mat());
    const auto trace_stat = [&](const UnitDetPoint& x) {
        return (sigma_inv.mat() * x.mat().mat()).trace().real();
    };

    std::vector<double> t_main(static_cast<size_t>(spec.sample_count));
    std::vector<double> t_ref(static_cast<size_t>(spec.sample_count));
    for (double& t : t_main) t = trace_stat(sample_projective_wishart(spec.params, rng_main));
    for (double& t : t_ref) t = trace_stat(sample_projective_wishart(reference, rng_ref));

    std::vector<double> pooled = t_main;
    pooled.insert(pooled.end(), t_ref.begin(), t_ref.end());
    constexpr int kBins = 20;
    const std::vector<double> edges = quantile_bin_edges(pooled, kBins);

    // The trace-form densities for n and n_ref differ by the factor
    // (t/2)^{dk(n_ref - n)/2}; reweighting the reference sample by it must
    // reproduce the main sample's bin masses up to the removed normalizer.
    const double exponent = 0.5 * d * k * (n_ref - spec.params.n);
    std::vector<std::int64_t> count_main(kBins, 0), count_ref(kBins, 0);
    std::vector<double> weight_sum(kBins, 0.0), weight_sq(kBins, 0.0);
    for (double t : t_main) count_main[bin_index(edges, t)] += 1;
    for (double t : t_ref) {
        const int b = bin_index(edges, t);
        const double w = std::exp(exponent * (std::log(t) - std::numbers::ln2));
        count_ref[b] += 1;
        weight_sum[b] += w;
        weight_sq[b] += w * w;
    }

    std::vector<double> predicted(kBins, 0.0);
    double total_weight = 0.0, total_weight_sq = 0.0;
    for (int b = 0; b < kBins; ++b) {
        total_weight += weight_sum[b];
        total_weight_sq += weight_sq[b];
    }
    for (int b = 0; b < kBins; ++b) predicted[b] = weight_sum[b] / total_weight;

    std::vector<double> var_log_pred(kBins, 0.0);
    for (int b = 0; b < kBins; ++b) {
        if (weight_sum[b] <= 0.0) continue;
        var_log_pred[b] = weight_sq[b] / (weight_sum[b] * weight_sum[b]) +
                          total_weight_sq / (total_weight * total_weight) -
                          2.0 * weight_sq[b] / (weight_sum[b] * total_weight);
    }

    if (spec.negative_control) {
        // Shuffled-prediction control: a seeded permutation of the
        // predicted bin masses must break the ratio test.
        RngStream shuffle_rng(spec.seed, spec.stream + kShuffleStream);
        for (int i = kBins - 1; i > 0; --i) {
            const int j = static_cast<int>(shuffle_rng.next_uniform() * (i + 1));
            std::swap(predicted[i], predicted[j]);
            std::swap(var_log_pred[i], var_log_pred[j]);
        }
    }

    double max_abs_z = 0.0;
    int included = 0;
    std::vector<int> excluded;
    std::ostringstream csv;
    csv << "bin_lo,bin_hi,observed,predicted,z\n";
    const double n1 = static_cast<double>(spec.sample_count);
    for (int b = 0; b < kBins; ++b) {
        const double lo = b == 0 ? -std::numeric_limits<double>::infinity() : edges[b - 1];
        const double hi_edge =
            b == kBins - 1 ? std::numeric_limits<double>::infinity() : edges[b];
        if (count_main[b] < 50 || count_ref[b] < 50) {
            excluded.push_back(b);
            csv << fmt(lo) << "," << fmt(hi_edge) << "," << count_main[b] << ","
                << fmt(predicted[b]) << ",excluded\n";
            continue;
        }
        const double p_hat = count_main[b] / n1;
        const double var_log_obs = (1.0 - p_hat) / (n1 * p_hat);
        const double z = (std::log(p_hat) - std::log(predicted[b])) /
                         std::sqrt(var_log_obs + var_log_pred[b]);
        max_abs_z = std::max(max_abs_z, std::abs(z));
        ++included;
        csv << fmt(lo) << "," << fmt(hi_edge) << "," << count_main[b] << "," << fmt(predicted[b])
            << "," << fmt(z) << "\n";
    }
    report.csv_files.emplace_back("bins", csv.str());

    std::ostringstream excluded_detail;
    excluded_detail << excluded.size() << " bin(s) excluded below 50 counts";

    if (spec.negative_control)
        report.checks.push_back({"negative-control-rejected", max_abs_z > 3.0, max_abs_z, 3.0,
                                 "shuffled predictions must break the ratio test"});
    else
        report.checks.push_back({"bin-ratio-z", included > 0 && max_abs_z <= 3.0, max_abs_z, 3.0,
                                 "max |z| of observed vs predicted log bin masses; " +
                                     excluded_detail.str()});

    report.stats["max_abs_z"] = max_abs_z;
    report.stats["included_bins"] = included;
    report.stats["excluded_bins"] = excluded;
    report.stats["reference_n"] = n_ref;
    report.stats["sample_count"] = spec.sample_count;

    finish_report(report);
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

ExperimentReport run_experiment(const ExperimentSpec& spec) {
    if (spec.type == "frechet") return run_frechet_experiment(spec);
    if (spec.type == "radial_ks") return run_radial_ks_experiment(spec);
    if (spec.type == "invariance") return run_invariance_experiment(spec);
    if (spec.type == "density_consistency") return run_density_consistency_experiment(spec);
    throw std::invalid_argument("unknown experiment type '" + spec.type + "'");
}

SuiteResult run_suite(const SuiteConfig& config, const std::string& out_dir) {
    const auto t0 = std::chrono::steady_clock::now();
    SuiteResult result;
    result.reports.resize(0);
    result.reports.reserve(config.experiments.size());

    std::vector<ExperimentReport> reports(config.experiments.size());
    for (size_t start = 0; start < config.experiments.size();
         start += static_cast<size_t>(config.threads)) {
        const size_t stop =
            std::min(config.experiments.size(), start + static_cast<size_t>(config.threads));
        std::vector<std::future<ExperimentReport>> futures;
        for (size_t i = start; i < stop; ++i)
            futures.push_back(std::async(std::launch::async,
                                         [&, i] { return run_experiment(config.experiments[i]); }));
        for (size_t i = start; i < stop; ++i) reports[i] = futures[i - start].get();
    }

    result.all_passed = true;
    for (const ExperimentReport& r : reports) result.all_passed = result.all_passed && r.passed;

    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        Json summary;
        summary["all_passed"] = result.all_passed;
        summary["version"] = kVersionString;
        summary["timestamp"] = provenance_timestamp();
        Json entries = Json::array();
        for (size_t i = 0; i < reports.size(); ++i) {
            const ExperimentSpec& spec = config.experiments[i];
            const ExperimentReport& r = reports[i];
            write_file_atomic(out_dir + "/" + spec.output_prefix + "_report.json",
                              r.to_json().dump(2) + "\n");
            for (const auto& [stem, content] : r.csv_files)
                write_file_atomic(out_dir + "/" + spec.output_prefix + "_" + stem + ".csv",
                                  content);
            entries.push_back(Json{{"id", r.id}, {"passed", r.passed}});
        }
        summary["experiments"] = std::move(entries);
        write_file_atomic(out_dir + "/suite_report.json", summary.dump(2) + "\n");
    }

    result.reports = std::move(reports);
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

std::string provenance_timestamp() {
    std::time_t t = 0;
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
        t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
    } else {
        t = std::time(nullptr);
    }
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + tmp + "' for writing");
        out << content;
        if (!out) throw std::runtime_error("write to '" + tmp + "' failed");
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace projwish
