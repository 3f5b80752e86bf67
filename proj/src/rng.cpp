#include "nqe/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "nqe/errors.hpp"
#include "nqe/special.hpp"

namespace nqe::numerics {

namespace {

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

} // namespace

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

RngState RngState::fork(std::uint64_t tag) const {
    return RngState(seed, mix64(stream_id ^ mix64(tag)));
}

void RngState::refill() {
    std::uint32_t c[4] = {
        static_cast<std::uint32_t>(counter_),
        static_cast<std::uint32_t>(counter_ >> 32),
        static_cast<std::uint32_t>(stream_id),
        static_cast<std::uint32_t>(stream_id >> 32),
    };
    std::uint32_t k0 = static_cast<std::uint32_t>(seed);
    std::uint32_t k1 = static_cast<std::uint32_t>(seed >> 32);
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(0xD2511F53u, c[0], hi0, lo0);
        mulhilo(0xCD9E8D57u, c[2], hi1, lo1);
        const std::uint32_t n0 = hi1 ^ c[1] ^ k0;
        const std::uint32_t n1 = lo1;
        const std::uint32_t n2 = hi0 ^ c[3] ^ k1;
        const std::uint32_t n3 = lo0;
        c[0] = n0; c[1] = n1; c[2] = n2; c[3] = n3;
        k0 += 0x9E3779B9u;
        k1 += 0xBB67AE85u;
    }
    buf_[0] = c[0]; buf_[1] = c[1]; buf_[2] = c[2]; buf_[3] = c[3];
    bufpos_ = 0;
    ++counter_;
}

std::uint32_t RngState::next_u32() {
    if (bufpos_ >= 4) refill();
    return buf_[bufpos_++];
}

std::uint64_t RngState::next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return (hi << 32) | lo;
}

double RngState::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double RngState::uniform_open() {
    return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
}

double RngState::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double RngState::normal() { return norm_ppf(uniform_open()); }

double RngState::normal(double mu, double sigma) { return mu + sigma * normal(); }

double RngState::lognormal(double mu_log, double sigma_log) {
    return std::exp(normal(mu_log, sigma_log));
}

int RngState::bernoulli(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("bernoulli: p outside [0,1]");
    return uniform() < p ? 1 : 0;
}

long RngState::binomial(long n, double p) {
    if (n < 0) throw DomainError("binomial: n < 0");
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("binomial: p outside [0,1]");
    long count = 0;
    for (long i = 0; i < n; ++i) count += uniform() < p ? 1 : 0;
    return count;
}

std::vector<int> RngState::multinomial_noreplace(const std::vector<double>& weights, int k) {
    const int n = static_cast<int>(weights.size());
    if (k < 0 || k > n) throw DomainError("multinomial_noreplace: k outside [0,n]");
    // Weighted sampling without replacement via exponential keys:
    // pick the k smallest of E_i / w_i with E_i ~ Exp(1).
    std::vector<std::pair<double, int>> keys(n);
    for (int i = 0; i < n; ++i) {
        const double w = weights[i];
        if (!(w >= 0.0) || !std::isfinite(w))
            throw DomainError("multinomial_noreplace: bad weight");
        const double e = -std::log(uniform_open());
        keys[i] = {w > 0.0 ? e / w : std::numeric_limits<double>::infinity(), i};
    }
    std::partial_sort(keys.begin(), keys.begin() + k, keys.end());
    std::vector<int> out(k);
    for (int i = 0; i < k; ++i) out[i] = keys[i].second;
    return out;
}

std::vector<int> RngState::permutation(int n) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    for (int i = n - 1; i > 0; --i) {
        const int j = static_cast<int>(next_u64() % static_cast<std::uint64_t>(i + 1));
        std::swap(p[i], p[j]);
    }
    return p;
}

} // namespace nqe::numerics
