#include "projwish/io.hpp"

#include <istream>
#include <sstream>

namespace projwish {

Json matrix_to_json(const HermMatrix& m) {
    const int d = m.dim();
    Json j;
    j["dim"] = d;
    j["field"] = to_string(m.field());
    Json re = Json::array();
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) re.push_back(m(i, k).real());
    j["re"] = std::move(re);
    if (m.field() == Field::Complex) {
        Json im = Json::array();
        for (int i = 0; i < d; ++i)
            for (int k = 0; k < d; ++k) im.push_back(m(i, k).imag());
        j["im"] = std::move(im);
    }
    return j;
}

HermMatrix matrix_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("field") || !j.contains("re"))
        throw std::invalid_argument("matrix JSON must carry dim, field and re");
    const int d = j.at("dim").get<int>();
    if (d < 1) throw std::invalid_argument("matrix JSON has a non-positive dimension");
    const Field field = field_from_string(j.at("field").get<std::string>());
    const auto& re = j.at("re");
    if (!re.is_array() || re.size() != static_cast<size_t>(d) * d)
        throw std::invalid_argument("matrix JSON: re must hold dim*dim entries");
    const bool has_im = j.contains("im");
    if (has_im && field == Field::Real)
        throw std::invalid_argument("matrix JSON: real field carries no im array");
    if (has_im && (!j.at("im").is_array() || j.at("im").size() != re.size()))
        throw std::invalid_argument("matrix JSON: im must hold dim*dim entries");

    Mat m(d, d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) {
            const size_t idx = static_cast<size_t>(i) * d + k;
            const double real_part = re.at(idx).get<double>();
            const double imag_part = has_im ? j.at("im").at(idx).get<double>() : 0.0;
            m(i, k) = Scalar(real_part, imag_part);
        }
    return HermMatrix::from(m, field);
}

Json point_to_json(const SpdPoint& p) {
    Json j = matrix_to_json(p.mat());
    j["kind"] = "spd";
    return j;
}

Json point_to_json(const UnitDetPoint& p) {
    Json j = matrix_to_json(p.mat());
    j["kind"] = "unit_det";
    return j;
}

ParsedPoint point_from_json(const Json& j) {
    std::string kind = j.value("kind", std::string("spd"));
    if (kind != "spd" && kind != "unit_det")
        throw std::invalid_argument("point JSON has unknown kind '" + kind + "'");
    return {matrix_from_json(j), std::move(kind)};
}

Json header_to_json(const BatchHeader& h) {
    Json j;
    j["params"] = h.params;
    j["seed"] = h.seed;
    j["stream"] = h.stream;
    j["count"] = h.count;
    return j;
}

Batch read_batch(std::istream& in) {
    Batch batch;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        Json j;
        try {
            j = Json::parse(line);
        } catch (const Json::parse_error& e) {
            std::ostringstream msg;
            msg << "line " << line_no << ": not valid JSON (" << e.what() << ")";
            throw std::runtime_error(msg.str());
        }
        try {
            if (line_no == 1 && j.is_object() && j.contains("count") && !j.contains("re")) {
                BatchHeader h;
                h.params = j.value("params", Json::object());
                h.seed = j.value("seed", std::uint64_t{0});
                h.stream = j.value("stream", std::uint64_t{0});
                h.count = j.value("count", std::int64_t{0});
                batch.header = std::move(h);
                continue;
            }
            batch.points.push_back(point_from_json(j));
        } catch (const std::exception& e) {
            std::ostringstream msg;
            msg << "line " << line_no << ": " << e.what();
            throw std::runtime_error(msg.str());
        }
    }
    return batch;
}

std::vector<UnitDetPoint> batch_unit_det_points(const Batch& batch) {
    std::vector<UnitDetPoint> points;
    points.reserve(batch.points.size());
    for (const ParsedPoint& p : batch.points) {
        if (p.kind == "unit_det")
            points.emplace_back(p.mat);
        else
            points.push_back(project(SpdPoint(p.mat)));
    }
    return points;
}

Json mean_result_to_json(const MeanResult& r) {
    Json j;
    j["mean"] = point_to_json(r.mean);
    j["iterations"] = r.iterations;
    j["final_grad_norm"] = r.final_grad_norm;
    j["converged"] = r.converged;
    return j;
}

}  // namespace projwish
