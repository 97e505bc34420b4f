#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

#include "lrcs/numerics.hpp"

namespace lrcs {

using Rng = std::mt19937_64;

/// Independent, reproducible stream for (seed, tags...). Tags separate
/// generators (scheme, frame index, component) sharing one user seed.
inline Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> tags = {}) {
    std::vector<std::uint32_t> words;
    words.push_back(static_cast<std::uint32_t>(seed));
    words.push_back(static_cast<std::uint32_t>(seed >> 32));
    for (auto t : tags) {
        words.push_back(static_cast<std::uint32_t>(t));
        words.push_back(static_cast<std::uint32_t>(t >> 32));
    }
    std::seed_seq s(words.begin(), words.end());
    return Rng(s);
}

/// i.i.d. circular complex Gaussian entries with E|z|² = 1.
inline ComplexMatrix random_complex_gaussian(Index rows, Index cols, Rng& rng) {
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    ComplexMatrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            m(i, j) = Complex(re, im);
        }
    return m;
}

}  // namespace lrcs
