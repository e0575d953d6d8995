#include "banditlb/rng.hpp"

#include <cmath>

#include "banditlb/errors.hpp"

namespace banditlb {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(product >> 32);
    lo = static_cast<std::uint32_t>(product);
}

} // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM0, counter[0], hi0, lo0);
        mulhilo(kPhiloxM1, counter[2], hi1, lo1);
        counter = {hi1 ^ counter[1] ^ key[0], lo1, hi0 ^ counter[3] ^ key[1], lo0};
        key[0] += kPhiloxW0;
        key[1] += kPhiloxW1;
    }
    return counter;
}

std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t hash = 0xCBF29CE484222325ull;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001B3ull;
    }
    return hash;
}

RngStream::RngStream(std::uint64_t key, std::uint64_t stream)
    : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)},
      stream_(stream) {}

RngStream RngStream::derive(std::uint64_t master_seed, std::uint64_t cell,
                            std::uint64_t replication) {
    std::uint64_t h = 0x243F6A8885A308D3ull; // pi fraction, arbitrary fixed start
    h = mix64(h ^ master_seed) + 0x9E3779B97F4A7C15ull;
    h = mix64(h ^ cell) + 0x9E3779B97F4A7C15ull;
    h = mix64(h ^ replication) + 0x9E3779B97F4A7C15ull;
    const std::uint64_t key = mix64(h);
    const std::uint64_t stream = mix64(h ^ 0x6A09E667F3BCC909ull);
    return RngStream(key, stream);
}

void RngStream::refill() {
    const std::array<std::uint32_t, 4> counter = {
        static_cast<std::uint32_t>(block_),
        static_cast<std::uint32_t>(block_ >> 32),
        static_cast<std::uint32_t>(stream_),
        static_cast<std::uint32_t>(stream_ >> 32),
    };
    buffer_ = philox4x32(counter, key_);
    ++block_;
    position_ = 0;
}

std::uint32_t RngStream::next_u32() {
    if (position_ == 4) refill();
    return buffer_[position_++];
}

std::uint64_t RngStream::next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return (hi << 32) | lo;
}

double RngStream::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_open_double() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::next_gaussian(double mean, double stddev) {
    return mean + stddev * normal_icdf(next_open_double());
}

std::uint64_t RngStream::next_uniform_int(std::uint64_t n) {
    if (n == 0) throw ArgumentError("next_uniform_int: n must be positive");
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t draw;
    do {
        draw = next_u64();
    } while (draw >= limit);
    return draw % n;
}

int RngStream::next_categorical(std::span<const double> probabilities) {
    if (probabilities.empty()) throw ArgumentError("next_categorical: empty distribution");
    const double u = next_double();
    double cumulative = 0.0;
    int last_positive = -1;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        const double p = probabilities[i];
        if (p > 0.0) last_positive = static_cast<int>(i);
        cumulative += p;
        if (u < cumulative && p > 0.0) return static_cast<int>(i);
    }
    if (last_positive < 0) throw ArgumentError("next_categorical: all-zero distribution");
    return last_positive;
}

// AS241 rational approximations, relative error below 1e-15 across (0,1).
double normal_icdf(double p) {
    if (!(p > 0.0 && p < 1.0)) throw ArgumentError("normal_icdf: p must lie in (0,1)");

    static constexpr double a[8] = {
        3.3871328727963666080e0,  1.3314166789178437745e2,  1.9715909503065514427e3,
        1.3731693765509461125e4,  4.5921953931549871457e4,  6.7265770927008700853e4,
        3.3430575583588128105e4,  2.5090809287301226727e3};
    static constexpr double b[8] = {
        1.0,                      4.2313330701600911252e1,  6.8718700749205790830e2,
        5.3941960214247511077e3,  2.1213794301586595867e4,  3.9307895800092710610e4,
        2.8729085735721942674e4,  5.2264952788528545610e3};
    static constexpr double c[8] = {
        1.42343711074968357734e0, 4.63033784615654529590e0, 5.76949722146069140550e0,
        3.64784832476320460504e0, 1.27045825245236838258e0, 2.41780725177450611770e-1,
        2.27238449892691845833e-2, 7.74545014278341407640e-4};
    static constexpr double d[8] = {
        1.0,                      2.05319162663775882187e0, 1.67638483018380384940e0,
        6.89767334985100004550e-1, 1.48103976427480074590e-1, 1.51986665636164571966e-2,
        5.47593808499534494600e-4, 1.05075007164441684324e-9};
    static constexpr double e[8] = {
        6.65790464350110377720e0, 5.46378491116411436990e0, 1.78482653991729133580e0,
        2.96560571828504891230e-1, 2.65321895265761230930e-2, 1.24266094738807843860e-3,
        2.71155556874348757815e-5, 2.01033439929228813265e-7};
    static constexpr double f[8] = {
        1.0,                      5.99832206555887937690e-1, 1.36929880922735805310e-1,
        1.48753612908506148525e-2, 7.86869131145613259100e-4, 1.84631831751005468180e-5,
        1.42151175831644588870e-7, 2.04426310338993978564e-15};

    auto eval = [](const double (&coeff)[8], double r) {
        double acc = coeff[7];
        for (int i = 6; i >= 0; --i) acc = acc * r + coeff[i];
        return acc;
    };

    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q * eval(a, r) / eval(b, r);
    }
    double r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double value;
    if (r <= 5.0) {
        r -= 1.6;
        value = eval(c, r) / eval(d, r);
    } else {
        r -= 5.0;
        value = eval(e, r) / eval(f, r);
    }
    return (q < 0.0) ? -value : value;
}

} // namespace banditlb
