#pragma once
// Reference oracles used by the unit tests and the acceptance suite.

#include <numeric>
#include <random>
#include <vector>

#include "robin/lie.hpp"
#include "robin/torus.hpp"

namespace robin::oracles {

inline torus::SixTuple random_tuple(std::mt19937& rng, long height) {
    std::uniform_int_distribution<long> sym(-height, height), pos(1, height);
    torus::SixTuple t;
    do {
        t.m = sym(rng);
        t.n = sym(rng);
    } while (t.n == 0 || std::gcd(t.m, t.n) != 1);
    do {
        t.mp = sym(rng);
        t.np = pos(rng);
    } while (std::gcd(t.mp, t.np) != 1);
    do {
        t.p = pos(rng);
        t.q = pos(rng);
    } while (std::gcd(t.p, t.q) != 1);
    return t;
}

// Minimal standard parabolic containing the generators, by enumerating all
// 2^{n-1} compositions (bit i set = block boundary after row i).
inline lie::Composition brute_force_parabolic(std::size_t n, const std::vector<lie::QMat>& gens) {
    lie::Composition best;
    std::size_t best_bits = 0;
    bool have = false;
    for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
        std::vector<std::size_t> block(n, 0);
        for (std::size_t i = 1; i < n; ++i) block[i] = block[i - 1] + ((mask >> (i - 1)) & 1u);
        bool ok = true;
        for (const auto& g : gens)
            for (std::size_t i = 0; i < n && ok; ++i)
                for (std::size_t j = 0; j < n && ok; ++j)
                    if (!g(i, j).is_zero() && block[i] > block[j]) ok = false;
        if (!ok) continue;
        std::size_t bits = static_cast<std::size_t>(__builtin_popcount(mask));
        if (!have || bits > best_bits) {
            have = true;
            best_bits = bits;
            best.clear();
            std::size_t run = 1;
            for (std::size_t i = 1; i < n; ++i) {
                if ((mask >> (i - 1)) & 1u) {
                    best.push_back(run);
                    run = 1;
                } else {
                    ++run;
                }
            }
            best.push_back(run);
        }
    }
    return best;
}

}  // namespace robin::oracles
