#pragma once

#include <cstdint>
#include <vector>

// Counter-based PRNG (Philox4x32-10). A draw sequence is a pure function of
// (seed, stream_id, draw index), so independent workers on distinct streams
// reproduce bit-identical results under any scheduling.

namespace nqe::numerics {

struct RngState {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;

    RngState() = default;
    RngState(std::uint64_t s, std::uint64_t stream) : seed(s), stream_id(stream) {}

    // Derive a statistically independent substream.
    RngState fork(std::uint64_t tag) const;

    std::uint32_t next_u32();
    std::uint64_t next_u64();

    // [0,1) with 53 random bits.
    double uniform();
    // strictly inside (0,1); safe to feed into norm_ppf.
    double uniform_open();
    double uniform(double lo, double hi);

    double normal();
    double normal(double mu, double sigma);
    double lognormal(double mu_log, double sigma_log);
    int bernoulli(double p);
    // Exact binomial by counting Bernoulli trials; draws n uniforms.
    long binomial(long n, double p);
    // k distinct indices sampled without replacement with probability
    // proportional to weights (weighted reservoir keys).
    std::vector<int> multinomial_noreplace(const std::vector<double>& weights, int k);
    // Fisher-Yates permutation of 0..n-1.
    std::vector<int> permutation(int n);

private:
    std::uint64_t counter_ = 0;
    std::uint32_t buf_[4] = {0, 0, 0, 0};
    int bufpos_ = 4;

    void refill();
};

// SplitMix64 finalizer, used for stream derivation and checksums.
std::uint64_t mix64(std::uint64_t x);

} // namespace nqe::numerics
