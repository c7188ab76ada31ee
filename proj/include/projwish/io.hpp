// Serialization: matrix JSON objects, point records with a kind tag,
// JSON-lines sample batches with a header line, and the mean-result
// payload. Doubles survive a round trip bit-exactly.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "projwish/frechet.hpp"
#include "projwish/geometry.hpp"

namespace projwish {

using Json = nlohmann::json;

/// {dim, field, re, im?} with row-major entry arrays; im is omitted for
/// the real field.
Json matrix_to_json(const HermMatrix& m);
HermMatrix matrix_from_json(const Json& j);

/// Point records add "kind": "spd" or "unit_det" to the matrix object.
Json point_to_json(const SpdPoint& p);
Json point_to_json(const UnitDetPoint& p);

struct ParsedPoint {
    HermMatrix mat;
    std::string kind;  // "spd" or "unit_det"
};
ParsedPoint point_from_json(const Json& j);

/// First line of a JSON-lines sample batch.
struct BatchHeader {
    Json params;  // {"sigma": matrix, "n": ..., "field": ...} or free-form
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::int64_t count = 0;
};
Json header_to_json(const BatchHeader& h);

struct Batch {
    std::optional<BatchHeader> header;
    std::vector<ParsedPoint> points;
};

/// Reads a JSON-lines batch; a leading header line is recognized by its
/// "count" key. Malformed lines raise std::runtime_error naming the line.
Batch read_batch(std::istream& in);

/// Batch points interpreted on the determinant-1 slice; "spd" records are
/// projected.
std::vector<UnitDetPoint> batch_unit_det_points(const Batch& batch);

Json mean_result_to_json(const MeanResult& r);

}  // namespace projwish
