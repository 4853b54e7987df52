#pragma once

#include <random>

// fixed-seed sampling so a failing case can be replayed
struct sampler {
    std::mt19937_64 gen;
    explicit sampler(unsigned long long seed = 20240917ULL) : gen(seed) {}
    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(gen); }
    double log_uniform(double a, double b);
};

#include <cmath>
inline double sampler::log_uniform(double a, double b) { return std::exp(uniform(std::log(a), std::log(b))); }
