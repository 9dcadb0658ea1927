#pragma once

#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace semimt {

namespace detail {
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
}  // namespace detail

// Deterministic RNG wrapper. All floating-point draws are derived from raw
// 64-bit outputs so streams are identical across standard library
// implementations (std distributions are not portable).
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed), seed_(seed) {}

    uint64_t bits() { return eng_(); }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n), n >= 1.
    uint64_t below(uint64_t n) {
        return static_cast<uint64_t>((static_cast<unsigned __int128>(eng_()) * n) >> 64);
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

    // Independent stream derived from the construction seed and a tag;
    // does not advance this generator.
    Rng fork(uint64_t tag) const { return Rng(detail::splitmix64(seed_ ^ detail::splitmix64(tag + 1))); }

    std::string state() const {
        std::ostringstream os;
        os << seed_ << ' ' << eng_;
        return os.str();
    }

    static Rng from_state(const std::string& s) {
        std::istringstream is(s);
        Rng r(0);
        is >> r.seed_ >> r.eng_;
        return r;
    }

private:
    std::mt19937_64 eng_;
    uint64_t seed_;
};

}  // namespace semimt
