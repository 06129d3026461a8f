#pragma once

#include "ccroll/rational.hpp"

#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string_view>

namespace ccroll {

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Order-sensitive hash of a seed with a sequence of integers.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> parts)
{
    std::uint64_t h = splitmix64(seed);
    for (std::uint64_t p : parts) h = splitmix64(h ^ splitmix64(p + 0x632be59bd9b4e019ULL));
    return h;
}

/// Named sub-stream of a root seed ("rounding", "solver", "gen", ...).
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream)
{
    std::uint64_t h = 0xcbf29ce484222325ULL; // FNV-1a
    for (unsigned char ch : stream) h = (h ^ ch) * 0x100000001b3ULL;
    return derive_seed(seed, {h});
}

/// Small deterministic generator; splitmix64 over a counter.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next()
    {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, bound), rejection sampled.
    std::uint64_t below(std::uint64_t bound)
    {
        if (bound == 0) throw std::invalid_argument("Rng::below(0)");
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t x;
        do x = next();
        while (x >= limit);
        return x % bound;
    }

    /// Uniform in [0, 1) with 53 bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool chance(double p) { return uniform() < p; }

private:
    std::uint64_t state_;
};

/// Bernoulli(p) for exact rational p in [0, 1]. A draw u (uniform 64-bit)
/// succeeds iff u < ceil(p * 2^64), so the success probability is p up to the
/// 2^-64 granularity of the draw and exactly p for dyadic p.
class ExactBernoulli {
public:
    explicit ExactBernoulli(const Rational& p)
    {
        if (p < 0 || p > 1) throw std::invalid_argument("probability outside [0,1]: " + format_rational(p));
        const BigInt num = boost::multiprecision::numerator(p);
        const BigInt den = boost::multiprecision::denominator(p);
        const BigInt scaled = ((num << 64) + den - 1) / den;
        if (scaled == (BigInt(1) << 64))
            threshold_ = static_cast<unsigned __int128>(1) << 64;
        else
            threshold_ = scaled.convert_to<std::uint64_t>();
    }

    bool operator()(std::uint64_t draw) const { return static_cast<unsigned __int128>(draw) < threshold_; }

private:
    unsigned __int128 threshold_ = 0;
};

} // namespace ccroll
