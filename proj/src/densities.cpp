#include "projwish/densities.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace projwish {

namespace {

// log cosh / log sinh without overflow for large arguments.
double log_cosh(double r) {
    const double a = std::abs(r);
    return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

double log_sinh(double r) {
    // r > 0 expected; -inf at 0 is the caller's business.
    return r + std::log1p(-std::exp(-2.0 * r)) - std::numbers::ln2;
}

void require_dof(const WishartParams& p) {
    if (p.n < p.dim()) throw std::invalid_argument("density requires n >= d");
}

double shell_constant(int k) { return k == 1 ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi; }

double trace_of_inverse_product(const SpdPoint& sigma, const HermMatrix& x) {
    return (matrix_inverse(sigma.mat()).mat() * x.mat()).trace().real();
}

}  // namespace

DensityValue wishart_logdensity_invariant(const SpdPoint& x, const WishartParams& p) {
    require_dof(p);
    if (!x.mat().same_shape(p.sigma.mat()))
        throw std::invalid_argument("dimension/field mismatch in Wishart density");
    const double k = p.k();
    const double log_det = std::log(det(x.mat()));
    const double tr = trace_of_inverse_product(p.sigma, x.mat());
    return {0.5 * k * p.n * log_det - 0.5 * k * tr, false};
}

DensityValue projective_logdensity_trace(const UnitDetPoint& x, const WishartParams& p) {
    require_dof(p);
    if (!x.mat().same_shape(p.sigma.mat()))
        throw std::invalid_argument("dimension/field mismatch in projective density");
    const double exponent = 0.5 * p.dim() * p.k() * p.n;
    const double tr = trace_of_inverse_product(p.sigma, x.mat());
    return {exponent * (std::numbers::ln2 - std::log(tr)), false};
}

DensityValue projective_logdensity_cosh(const UnitDetPoint& x, const WishartParams& p) {
    require_dof(p);
    if (p.dim() != 2)
        throw std::invalid_argument("cosh-form density is available for d = 2 only");
    if (!x.mat().same_shape(p.sigma.mat()))
        throw std::invalid_argument("dimension/field mismatch in projective density");
    const double r = distance(x, project(p.sigma), kDefaultDistanceScale);
    return {-static_cast<double>(p.k()) * p.n * log_cosh(r), false};
}

RadialLaw::RadialLaw(Field field, int n) : k_(field_constant(field)), n_(n) {
    if (k_ * (n_ - 1) < 1) {
        std::ostringstream msg;
        msg << "radial law is not integrable for n = " << n << " over the " << to_string(field)
            << " field";
        throw std::domain_error(msg.str());
    }
    z_ = integrate_semi_infinite([this](double r) { return shape(r); }, 0.0).value;
    if (!(z_ > 0.0)) throw std::runtime_error("radial-law normalization failed");
}

double RadialLaw::shape(double r) const {
    if (r <= 0.0) return 0.0;
    return std::exp(k_ * log_sinh(r) - static_cast<double>(k_) * n_ * log_cosh(r));
}

double RadialLaw::log_pdf(double r) const {
    if (r <= 0.0) return -std::numeric_limits<double>::infinity();
    return k_ * log_sinh(r) - static_cast<double>(k_) * n_ * log_cosh(r) - std::log(z_);
}

double RadialLaw::pdf(double r) const { return shape(r) / z_; }

double RadialLaw::cdf(double r) const {
    if (r <= 0.0) return 0.0;
    const double mass = integrate_adaptive([this](double t) { return shape(t); }, 0.0, r).value / z_;
    return std::min(1.0, std::max(0.0, mass));
}

std::vector<double> RadialLaw::cdf_at_sorted(const std::vector<double>& sorted_r) const {
    std::vector<double> out(sorted_r.size());
    double acc = 0.0;
    double prev = 0.0;
    for (size_t i = 0; i < sorted_r.size(); ++i) {
        const double r = sorted_r[i];
        if (r < prev) throw std::invalid_argument("cdf_at_sorted expects ascending input");
        if (r > prev)
            acc += integrate_adaptive([this](double t) { return shape(t); }, prev, r, 1e-13).value;
        out[i] = std::min(1.0, std::max(0.0, acc / z_));
        prev = r;
    }
    return out;
}

RadialLaw radial_law(const WishartParams& p) {
    if (p.dim() != 2) throw std::invalid_argument("radial law is defined for d = 2 only");
    return RadialLaw(p.field, p.n);
}

double normalize_density_2d(const WishartParams& p, double scale) {
    if (p.dim() != 2) throw std::invalid_argument("normalization is available for d = 2 only");
    if (!(scale > 0.0)) throw std::invalid_argument("distance scale must be positive");
    const RadialLaw law = radial_law(p);
    const int k = p.k();
    // The reference volume carries the metric scale: lengths stretch by
    // scale * sqrt(2) relative to the canonical radius, volumes by that
    // factor to the power dim = k + 1.
    const double stretch = std::pow(scale * std::numbers::sqrt2, k + 1);
    return 1.0 / (shell_constant(k) * law.normalizing_constant() * stretch);
}

InvariantBallSample sample_invariant_ball_importance(double cap, Field field, RngStream& rng) {
    if (!(cap > 0.0)) throw std::invalid_argument("ball radius must be positive");
    const int k = field_constant(field);
    const double r = cap * rng.next_uniform();
    const GroupElement rot = sample_stabilizer(field, 2, rng);
    const HermMatrix radial = HermMatrix::diagonal({std::exp(r), std::exp(-r)}, field);
    UnitDetPoint point =
        group_act(rot, UnitDetPoint(radial));
    const double weight = cap * shell_constant(k) * std::pow(std::sinh(r), k);
    return {std::move(point), r, weight};
}

}  // namespace projwish
