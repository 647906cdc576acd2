#include "adem/brownian.hpp"

#include <cmath>
#include <stdexcept>

namespace adem {

BrownianPath::BrownianPath(int dimension, std::uint64_t seed, std::uint64_t path_index)
    : dim_(dimension), stream_(seed, path_index) {
    if (dimension <= 0) throw std::invalid_argument("BrownianPath: dimension must be positive");
    knots_.emplace(0.0, Vec(static_cast<std::size_t>(dimension), 0.0));
}

const Vec& BrownianPath::sample_at(double t) {
    if (!std::isfinite(t) || t < 0.0)
        throw std::domain_error("BrownianPath::sample_at: time must be finite and non-negative");

    auto it = knots_.lower_bound(t);
    if (it != knots_.end() && it->first == t) return it->second;

    Vec value(static_cast<std::size_t>(dim_));
    if (it == knots_.end()) {
        // beyond the last knot: independent Gaussian extension
        const auto& [t_last, w_last] = *knots_.rbegin();
        const double sd = std::sqrt(t - t_last);
        for (int i = 0; i < dim_; ++i) value[i] = w_last[i] + sd * stream_.next();
    } else {
        // strictly between two knots: Brownian bridge conditional draw
        const auto& [t2, w2] = *it;
        const auto& [t1, w1] = *std::prev(it);
        const double lam = (t - t1) / (t2 - t1);
        const double sd = std::sqrt((t - t1) * (t2 - t) / (t2 - t1));
        for (int i = 0; i < dim_; ++i) value[i] = w1[i] + lam * (w2[i] - w1[i]) + sd * stream_.next();
    }
    return knots_.emplace(t, std::move(value)).first->second;
}

Vec BrownianPath::increment(double s, double t) {
    if (s > t) throw std::domain_error("BrownianPath::increment: requires s <= t");
    const Vec& ws = sample_at(s);  // map references are stable across the next insert
    const Vec& wt = sample_at(t);
    Vec d(static_cast<std::size_t>(dim_));
    for (int i = 0; i < dim_; ++i) d[i] = wt[i] - ws[i];
    return d;
}

}  // namespace adem
