// Command-line interface: sampling, geometry, Karcher means, densities
// and the statistical verification suite. stdout carries only data;
// every run echoes its effective configuration to stderr. Exit codes:
// 0 success, 1 statistical failure, 2 usage/input error, 3 I/O error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "projwish/densities.hpp"
#include "projwish/frechet.hpp"
#include "projwish/io.hpp"
#include "projwish/verification.hpp"
#include "projwish/version.hpp"

namespace {

using namespace projwish;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct StatFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void echo_config(const std::string& command, const Json& config) {
    Json j = config;
    j["command"] = command;
    j["version"] = kVersionString;
    std::cerr << j.dump() << "\n";
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

/// "identity", an inline JSON object, or a path to a file holding one.
SpdPoint resolve_sigma(const std::string& text, int d, Field field) {
    if (text == "identity") return SpdPoint::identity(d, field);
    Json j;
    if (!text.empty() && text.front() == '{') {
        j = Json::parse(text);
    } else {
        j = Json::parse(read_text_file(text));
    }
    const HermMatrix m = matrix_from_json(j);
    if (m.dim() != d || m.field() != field)
        throw std::invalid_argument("--sigma matrix does not match --d/--field");
    return SpdPoint(m);
}

/// Streams output to stdout for "-", otherwise to path via temp+rename.
class OutputTarget {
  public:
    explicit OutputTarget(const std::string& path) : path_(path) {
        if (path_ != "-") {
            file_.open(path_ + ".tmp", std::ios::binary | std::ios::trunc);
            if (!file_) throw IoError("cannot open '" + path_ + ".tmp' for writing");
        }
    }
    std::ostream& stream() { return path_ == "-" ? std::cout : file_; }
    void commit() {
        if (path_ == "-") {
            std::cout.flush();
            if (!std::cout) throw IoError("write to stdout failed");
            return;
        }
        file_.flush();
        if (!file_) throw IoError("write to '" + path_ + ".tmp' failed");
        file_.close();
        std::filesystem::rename(path_ + ".tmp", path_);
    }

  private:
    std::string path_;
    std::ofstream file_;
};

Batch read_batch_from(const std::string& path) {
    if (path == "-") return read_batch(std::cin);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return read_batch(in);
}

ParsedPoint read_point_file(const std::string& path) {
    const Batch batch = read_batch_from(path);
    if (batch.points.size() != 1)
        throw std::invalid_argument("'" + path + "' must hold exactly one point record");
    return batch.points.front();
}

UnitDetPoint as_unit_det(const ParsedPoint& p) {
    if (p.kind == "unit_det") return UnitDetPoint(p.mat);
    return project(SpdPoint(p.mat));
}

int cmd_sample(int d, const std::string& field_name, int n, const std::string& sigma_text,
               std::int64_t count, std::uint64_t seed, std::uint64_t stream, bool raw_wishart,
               const std::string& out) {
    const Field field = field_from_string(field_name);
    const SpdPoint sigma = resolve_sigma(sigma_text, d, field);
    const WishartParams params(sigma, n, field);
    if (count < 1) throw std::invalid_argument("--count must be >= 1");

    Json params_json{{"sigma", matrix_to_json(sigma.mat())}, {"n", n}, {"field", field_name}};
    echo_config("sample", Json{{"d", d},
                               {"field", field_name},
                               {"n", n},
                               {"sigma", params_json.at("sigma")},
                               {"count", count},
                               {"seed", seed},
                               {"stream", stream},
                               {"kind", raw_wishart ? "spd" : "unit_det"},
                               {"out", out}});

    RngStream rng(seed, stream);
    OutputTarget target(out);
    BatchHeader header{params_json, seed, stream, count};
    target.stream() << header_to_json(header).dump() << "\n";
    for (std::int64_t i = 0; i < count; ++i) {
        if (raw_wishart)
            target.stream() << point_to_json(sample_wishart(params, rng)).dump() << "\n";
        else
            target.stream() << point_to_json(sample_projective_wishart(params, rng)).dump() << "\n";
    }
    target.commit();
    return 0;
}

int cmd_distance(const std::string& x_path, const std::string& y_path, double scale) {
    echo_config("distance", Json{{"x", x_path}, {"y", y_path}, {"scale", scale}});
    const UnitDetPoint x = as_unit_det(read_point_file(x_path));
    const UnitDetPoint y = as_unit_det(read_point_file(y_path));
    std::cout << fmt(distance(x, y, scale)) << "\n";
    return 0;
}

int cmd_project(const std::string& in, const std::string& out) {
    echo_config("project", Json{{"in", in}, {"out", out}});
    const Batch batch = read_batch_from(in);
    OutputTarget target(out);
    if (batch.header) target.stream() << header_to_json(*batch.header).dump() << "\n";
    for (const ParsedPoint& p : batch.points)
        target.stream() << point_to_json(as_unit_det(p)).dump() << "\n";
    target.commit();
    return 0;
}

int cmd_mean(const std::string& in, double grad_tol, int max_iters, double step, double scale) {
    echo_config("mean", Json{{"in", in},
                             {"grad_tol", grad_tol},
                             {"max_iters", max_iters},
                             {"step", step},
                             {"scale", scale}});
    const Batch batch = read_batch_from(in);
    if (batch.points.empty()) throw std::invalid_argument("input holds no points");
    const std::vector<UnitDetPoint> points = batch_unit_det_points(batch);
    const MeanConfig cfg{max_iters, grad_tol, step, scale};
    const MeanResult result = karcher_mean(points, {}, cfg);
    std::cout << mean_result_to_json(result).dump() << "\n";
    if (!result.converged)
        throw StatFailure("Karcher iteration did not reach grad_tol " + fmt(grad_tol) + " after " +
                          std::to_string(result.iterations) + " iterations (final gradient " +
                          fmt(result.final_grad_norm) + ")");
    return 0;
}

int cmd_density(int d, const std::string& field_name, int n, const std::string& sigma_text,
                const std::string& grid, const std::string& points_path, bool normalized,
                const std::string& out) {
    const Field field = field_from_string(field_name);
    echo_config("density", Json{{"d", d},
                                {"field", field_name},
                                {"n", n},
                                {"sigma", sigma_text},
                                {"grid", grid},
                                {"points", points_path},
                                {"normalized", normalized},
                                {"out", out}});
    if (grid.empty() == points_path.empty())
        throw std::invalid_argument("pass exactly one of --grid or --points");
    if (d != 2 && (normalized || !grid.empty()))
        throw std::invalid_argument("normalized/radial output is available for d = 2 only");

    const SpdPoint sigma = resolve_sigma(sigma_text, d, field);
    const WishartParams params(sigma, n, field);
    OutputTarget target(out);

    if (!grid.empty()) {
        double lo = 0.0, hi = 0.0, step = 0.0;
        char c1 = 0, c2 = 0;
        std::istringstream parse(grid);
        parse >> lo >> c1 >> hi >> c2 >> step;
        if (!parse || c1 != ':' || c2 != ':' || step <= 0.0 || hi < lo)
            throw std::invalid_argument("--grid must be lo:hi:step with positive step");
        const RadialLaw law = radial_law(params);
        target.stream() << "r,pdf,cdf,log_pdf\n";
        for (double r = lo; r <= hi + 1e-12; r += step)
            target.stream() << fmt(r) << "," << fmt(law.pdf(r)) << "," << fmt(law.cdf(r)) << ","
                            << fmt(law.log_pdf(r)) << "\n";
        target.commit();
        return 0;
    }

    const Batch batch = read_batch_from(points_path);
    if (batch.points.empty()) throw std::invalid_argument("--points input holds no points");
    const double log_c = normalized ? std::log(normalize_density_2d(params)) : 0.0;
    target.stream() << "index,log_value\n";
    for (size_t i = 0; i < batch.points.size(); ++i) {
        const UnitDetPoint x = as_unit_det(batch.points[i]);
        const double value = normalized
                                 ? log_c + projective_logdensity_cosh(x, params).log_value
                                 : projective_logdensity_trace(x, params).log_value;
        target.stream() << i << "," << fmt(value) << "\n";
    }
    target.commit();
    return 0;
}

int cmd_verify(const std::string& config_path, const std::string& out_dir, int threads_override) {
    Json config_json;
    try {
        config_json = Json::parse(read_text_file(config_path));
    } catch (const Json::parse_error& e) {
        throw std::invalid_argument("config '" + config_path + "' is not valid JSON: " +
                                    std::string(e.what()));
    }
    SuiteConfig config = SuiteConfig::from_json(config_json);
    if (threads_override > 0) config.threads = threads_override;
    echo_config("verify", Json{{"config", config_path},
                               {"out_dir", out_dir},
                               {"threads", config.threads},
                               {"experiments", config.experiments.size()}});

    const SuiteResult result = run_suite(config, out_dir);
    for (const ExperimentReport& r : result.reports) {
        std::cout << (r.passed ? "PASS" : "FAIL") << " " << r.id;
        for (const CheckResult& c : r.checks)
            std::cout << " [" << c.name << (c.passed ? " ok" : " FAILED")
                      << " measured=" << fmt(c.measured) << " threshold=" << fmt(c.threshold)
                      << "]";
        std::cout << "\n";
    }
    if (!result.all_passed) throw StatFailure("one or more experiments failed");
    return 0;
}

int cmd_report(const std::vector<std::string>& inputs) {
    echo_config("report", Json{{"inputs", inputs}});
    std::vector<std::string> files;
    for (const std::string& in : inputs) {
        if (std::filesystem::is_directory(in)) {
            std::vector<std::string> found;
            for (const auto& entry : std::filesystem::directory_iterator(in)) {
                const std::string name = entry.path().filename().string();
                if (name.ends_with("_report.json") && name != "suite_report.json")
                    found.push_back(entry.path().string());
            }
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        } else {
            files.push_back(in);
        }
    }
    if (files.empty()) throw std::invalid_argument("no report files found");
    bool all_passed = true;
    for (const std::string& f : files) {
        const Json j = Json::parse(read_text_file(f));
        const bool passed = j.at("passed").get<bool>();
        all_passed = all_passed && passed;
        std::cout << (passed ? "PASS" : "FAIL") << " " << j.at("id").get<std::string>() << " ("
                  << j.at("type").get<std::string>() << ", seed "
                  << j.at("provenance").at("seed").get<std::uint64_t>() << ")\n";
        for (const Json& c : j.at("checks"))
            std::cout << "  " << (c.at("passed").get<bool>() ? "ok   " : "FAIL ")
                      << c.at("name").get<std::string>()
                      << " measured=" << fmt(c.at("measured").get<double>())
                      << " threshold=" << fmt(c.at("threshold").get<double>()) << "\n";
    }
    if (!all_passed) throw StatFailure("one or more reports record failures");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Projective Wishart distributions: sampling, affine-invariant geometry, "
                 "Karcher means, densities and statistical verification"};
    app.require_subcommand(1);

    auto* sample = app.add_subcommand("sample", "Draw Wishart or projective Wishart samples");
    int d = 2, n = 0;
    std::string field_name = "real", sigma_text = "identity", out = "-";
    std::int64_t count = 0;
    std::uint64_t seed = 0, stream = 0;
    bool raw_wishart = false;
    sample->add_option("--d", d, "matrix dimension")->check(CLI::Range(2, 32));
    sample->add_option("--field", field_name)->check(CLI::IsMember({"real", "complex"}));
    sample->add_option("--n", n, "degrees of freedom")->required();
    sample->add_option("--sigma", sigma_text, "identity, a matrix JSON literal, or a file path");
    sample->add_option("--count", count)->required();
    sample->add_option("--seed", seed)->required();
    sample->add_option("--stream", stream);
    sample->add_flag("--raw-wishart", raw_wishart, "emit cone samples instead of determinant-1");
    sample->add_option("--out", out, "output path or - for stdout");

    auto* dist = app.add_subcommand("distance", "Affine-invariant distance between two points");
    std::string x_path, y_path;
    double scale = kDefaultDistanceScale;
    dist->add_option("--x", x_path)->required();
    dist->add_option("--y", y_path)->required();
    dist->add_option("--scale", scale)->check(CLI::PositiveNumber);

    auto* proj = app.add_subcommand("project", "Project cone samples onto determinant 1");
    std::string in = "-";
    proj->add_option("--in", in, "input path or - for stdin");
    proj->add_option("--out", out);

    auto* mean = app.add_subcommand("mean", "Karcher mean of a JSON-lines batch");
    double grad_tol = 1e-9, step = 1.0;
    int max_iters = 200;
    mean->add_option("--in", in);
    mean->add_option("--grad-tol", grad_tol)->check(CLI::PositiveNumber);
    mean->add_option("--max-iters", max_iters)->check(CLI::Range(1, 100000));
    mean->add_option("--step", step)->check(CLI::Range(1e-6, 1.0));
    mean->add_option("--scale", scale)->check(CLI::PositiveNumber);

    auto* dens = app.add_subcommand("density", "Radial law curves (d=2) or log-densities");
    std::string grid, points_path;
    bool normalized = false;
    dens->add_option("--d", d)->check(CLI::Range(2, 32));
    dens->add_option("--field", field_name)->check(CLI::IsMember({"real", "complex"}));
    dens->add_option("--n", n)->required();
    dens->add_option("--sigma", sigma_text);
    dens->add_option("--grid", grid, "radial grid lo:hi:step (d = 2)");
    dens->add_option("--points", points_path, "JSON-lines points for trace-form values");
    dens->add_flag("--normalized", normalized, "emit normalized cosh-form values (d = 2)");
    dens->add_option("--out", out);

    auto* verify = app.add_subcommand("verify", "Run the statistical verification suite");
    std::string config_path, out_dir = "verify_out";
    int threads_override = 0;
    verify->add_option("--config", config_path)->required();
    verify->add_option("--out-dir", out_dir);
    verify->add_option("--threads", threads_override)->check(CLI::Range(1, 64));

    auto* report = app.add_subcommand("report", "Summarize experiment report files");
    std::vector<std::string> report_inputs;
    report->add_option("inputs", report_inputs, "report files or directories")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (sample->parsed())
            return cmd_sample(d, field_name, n, sigma_text, count, seed, stream, raw_wishart, out);
        if (dist->parsed()) return cmd_distance(x_path, y_path, scale);
        if (proj->parsed()) return cmd_project(in, out);
        if (mean->parsed()) return cmd_mean(in, grad_tol, max_iters, step, scale);
        if (dens->parsed())
            return cmd_density(d, field_name, n, sigma_text, grid, points_path, normalized, out);
        if (verify->parsed()) return cmd_verify(config_path, out_dir, threads_override);
        if (report->parsed()) return cmd_report(report_inputs);
    } catch (const StatFailure& e) {
        std::cerr << "statistical failure: " << e.what() << "\n";
        return 1;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
