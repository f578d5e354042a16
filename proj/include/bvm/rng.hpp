#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace bvm {

// Counter-based generator: the i-th output is a fixed mix of (seed, stream, i),
// so a draw sequence is fully determined by (seed, stream) and clones with a
// fresh stream id are independent. The mixer is SplitMix64 (Stafford mix13)
// over a golden-ratio counter walk.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : base_(mix(seed ^ 0x9e3779b97f4a7c15ull) ^ mix(stream + 0x6a09e667f3bcc909ull)),
          counter_(0) {}

    std::uint64_t seed_base() const { return base_; }

    std::uint64_t next_u64() {
        std::uint64_t z = base_ + (++counter_) * 0x9e3779b97f4a7c15ull;
        return mix(z);
    }

    // Uniform on [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform on (0, 1): never returns 0, safe for logs.
    double uniform_pos() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform_pos();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // Marsaglia-Tsang; alpha < 1 boosted via Gamma(alpha+1) * U^(1/alpha).
    double gamma(double shape, double rate = 1.0) {
        if (shape < 1.0) {
            double u = uniform_pos();
            return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            double u = uniform_pos();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v / rate;
        }
    }

    double beta(double a, double b) {
        double x = gamma(a);
        double y = gamma(b);
        return x / (x + y);
    }

    void dirichlet(const std::vector<double>& alpha, std::vector<double>& out) {
        out.resize(alpha.size());
        double s = 0.0;
        for (std::size_t i = 0; i < alpha.size(); ++i) {
            out[i] = gamma(alpha[i]);
            s += out[i];
        }
        for (double& v : out) v /= s;
    }

    // Sequential-search inversion; adequate for the moderate means used here.
    long poisson(double mu) {
        double l = std::exp(-mu);
        long k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform_pos();
        } while (p > l);
        return k - 1;
    }

    // Derive an independent child stream, e.g. one per repetition.
    CounterRng split(std::uint64_t stream) const {
        return CounterRng(base_, stream + 0x517cc1b727220a95ull);
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t base_;
    std::uint64_t counter_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace bvm
