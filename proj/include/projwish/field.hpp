// Base field of the matrix entries and the derived density constant k.

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace projwish {

using Scalar = std::complex<double>;

enum class Field { Real, Complex };

/// Exponent constant appearing in all density formulas: 1 for the real
/// field, 2 for the complex field.
constexpr int field_constant(Field f) { return f == Field::Real ? 1 : 2; }

inline std::string to_string(Field f) { return f == Field::Real ? "real" : "complex"; }

inline Field field_from_string(const std::string& s) {
    if (s == "real") return Field::Real;
    if (s == "complex") return Field::Complex;
    throw std::invalid_argument("unknown field '" + s + "' (expected \"real\" or \"complex\")");
}

}  // namespace projwish
