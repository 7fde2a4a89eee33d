#pragma once

#include <cstddef>
#include <vector>

#include "qdual/errors.hpp"

namespace qdual {

// Uniform grid of `samples` nodes covering [t0, t1] inclusive.
struct TimeGrid {
    double t0 = 0.0;
    double t1 = 1.0;
    std::size_t samples = 2;

    TimeGrid() = default;
    TimeGrid(double t0_, double t1_, std::size_t samples_) : t0(t0_), t1(t1_), samples(samples_) {
        if (!(t1 > t0)) throw ValidationError("TimeGrid: t1 must exceed t0");
        if (samples < 2) throw ValidationError("TimeGrid: need at least 2 samples");
    }

    double spacing() const { return (t1 - t0) / static_cast<double>(samples - 1); }
    double node(std::size_t j) const { return t0 + spacing() * static_cast<double>(j); }

    std::vector<double> nodes() const {
        std::vector<double> t(samples);
        for (std::size_t j = 0; j < samples; ++j) t[j] = node(j);
        return t;
    }

    // same span with twice as many intervals (shared nodes at even indices)
    TimeGrid refined() const { return TimeGrid(t0, t1, 2 * samples - 1); }
};

}  // namespace qdual
