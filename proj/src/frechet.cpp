#include "projwish/frechet.hpp"

#include <cmath>
#include <sstream>

namespace projwish {

namespace {

std::vector<double> resolve_weights(size_t count, const std::vector<double>& weights) {
    if (count == 0) throw std::invalid_argument("empty point list");
    if (weights.empty()) return std::vector<double>(count, 1.0 / static_cast<double>(count));
    if (weights.size() != count)
        throw std::invalid_argument("weight count does not match point count");
    double sum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw std::invalid_argument("weights must be nonnegative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        std::ostringstream msg;
        msg << "weights must sum to 1 (got " << sum << ")";
        throw std::invalid_argument(msg.str());
    }
    return weights;
}

void require_common_shape(const std::vector<UnitDetPoint>& points) {
    for (size_t i = 1; i < points.size(); ++i)
        if (!points[i].mat().same_shape(points[0].mat()))
            throw std::invalid_argument("points must share one dimension and field");
}

// Squared distances evaluated against a pre-whitened base: with
// isq = x^{-1/2}, d(x, y)^2 = scale^2 * sum_j log^2 lambda_j(isq y isq).
double objective_at(const HermMatrix& isq, const std::vector<UnitDetPoint>& points,
                    const std::vector<double>& weights, Field field, double scale) {
    double obj = 0.0;
    for (size_t i = 0; i < points.size(); ++i) {
        const HermMatrix m = HermMatrix::from(isq.mat() * points[i].mat().mat() * isq.mat(), field);
        const EigenDecomp e = herm_eigen(m);
        double sq = 0.0;
        for (double lambda : e.eigenvalues) {
            const double l = std::log(lambda);
            sq += l * l;
        }
        obj += weights[i] * sq;
    }
    return scale * scale * obj;
}

}  // namespace

double frechet_objective(const UnitDetPoint& x, const std::vector<UnitDetPoint>& points,
                         const std::vector<double>& weights, double scale) {
    const std::vector<double> w = resolve_weights(points.size(), weights);
    require_common_shape(points);
    return objective_at(matrix_inv_sqrt(x.mat()), points, w, x.field(), scale);
}

MeanResult karcher_mean(const std::vector<UnitDetPoint>& points, const std::vector<double>& weights,
                        const MeanConfig& cfg) {
    const std::vector<double> w = resolve_weights(points.size(), weights);
    require_common_shape(points);
    if (cfg.max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
    if (!(cfg.grad_tol > 0.0)) throw std::invalid_argument("grad_tol must be positive");
    if (!(cfg.step > 0.0 && cfg.step <= 1.0)) throw std::invalid_argument("step must be in (0, 1]");

    const Field field = points[0].field();
    const int d = points[0].dim();

    // Projected Euclidean average: inside the cone by convexity.
    Mat avg(d, d);
    for (size_t i = 0; i < points.size(); ++i) avg = avg + points[i].mat().mat().scaled(w[i]);
    UnitDetPoint x = project(SpdPoint(HermMatrix::from(avg, field)));

    MeanResult result{x};
    HermMatrix isq = matrix_inv_sqrt(x.mat());
    double objective = objective_at(isq, points, w, field, cfg.scale);
    result.objective_history.push_back(objective);

    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        // Whitened tangent mean: sum_i w_i log(x^{-1/2} y_i x^{-1/2}).
        Mat tangent(d, d);
        for (size_t i = 0; i < points.size(); ++i) {
            const HermMatrix m =
                HermMatrix::from(isq.mat() * points[i].mat().mat() * isq.mat(), field);
            tangent = tangent + matrix_log(m).mat().scaled(w[i]);
        }
        const HermMatrix whitened = HermMatrix::from(tangent, field);
        result.final_grad_norm = cfg.scale * frobenius_norm(whitened);
        if (result.final_grad_norm <= cfg.grad_tol) {
            result.converged = true;
            break;
        }

        const HermMatrix sq = matrix_sqrt(x.mat());
        double step = cfg.step;
        bool accepted = false;
        for (int halving = 0; halving <= 20; ++halving) {
            const HermMatrix move = matrix_exp(whitened.scaled(step));
            UnitDetPoint candidate(HermMatrix::from(sq.mat() * move.mat() * sq.mat(), field));
            HermMatrix candidate_isq = matrix_inv_sqrt(candidate.mat());
            const double candidate_obj = objective_at(candidate_isq, points, w, field, cfg.scale);
            if (candidate_obj <= objective + 1e-12) {
                x = std::move(candidate);
                isq = std::move(candidate_isq);
                objective = candidate_obj;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        result.iterations = iter + 1;
        if (!accepted) break;  // no descent direction left; report non-convergence
        result.objective_history.push_back(objective);
    }

    result.mean = x;
    return result;
}

double equivariance_check(const std::vector<UnitDetPoint>& points, const GroupElement& g,
                          const MeanConfig& cfg) {
    const MeanResult plain = karcher_mean(points, {}, cfg);
    std::vector<UnitDetPoint> moved;
    moved.reserve(points.size());
    for (const UnitDetPoint& p : points) moved.push_back(group_act(g, p));
    const MeanResult transformed = karcher_mean(moved, {}, cfg);
    if (!plain.converged || !transformed.converged)
        throw std::runtime_error("Karcher solver did not converge during the equivariance check");
    return distance(group_act(g, plain.mean), transformed.mean, cfg.scale);
}

}  // namespace projwish
