#pragma once

#include <cstdint>
#include <map>

#include "adem/rng.hpp"
#include "adem/vecmath.hpp"

namespace adem {

// Lazily sampled d-dimensional Brownian motion.  Values are generated on
// first query and memoized, so two discretisations driven by the same path
// object see one consistent realisation of W even when their time grids
// share no points.  Interior queries are filled in from the Brownian bridge
// conditional law, which leaves every previously returned value unchanged.
//
// A path is a single-owner object: queries mutate the knot map, so it must
// not be shared across threads while being sampled.  Distinct paths are
// independent and may run on distinct threads.
class BrownianPath {
public:
    BrownianPath(int dimension, std::uint64_t seed, std::uint64_t path_index);

    int dimension() const { return dim_; }
    std::size_t knot_count() const { return knots_.size(); }

    // W_t for finite t >= 0.  References stay valid across later queries.
    const Vec& sample_at(double t);

    // W_t - W_s for 0 <= s <= t.
    Vec increment(double s, double t);

private:
    int dim_;
    NormalStream stream_;
    std::map<double, Vec> knots_;
};

}  // namespace adem
