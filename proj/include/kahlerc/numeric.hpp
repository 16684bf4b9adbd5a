#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

// Scalar layer shared by the whole library. All internal arithmetic runs in
// extended precision so that residuals of identities stay far below the
// tolerances they are checked against.

namespace kahlerc {

using real = long double;
using cplx = std::complex<real>;

inline constexpr real kDefaultTol = 1e-12L;

// |a - b| measured against max(|a|, |b|) with an absolute floor.
inline bool near(const cplx& a, const cplx& b, real tol = kDefaultTol) {
    const real scale = std::max(std::abs(a), std::abs(b));
    return std::abs(a - b) <= tol * std::max(scale, real(1));
}

inline bool near(real a, real b, real tol = kDefaultTol) {
    return near(cplx(a), cplx(b), tol);
}

// Error taxonomy: evaluation outside a model's domain, malformed arguments,
// and integrator accuracy failures are distinct conditions for callers.
class domain_error : public std::runtime_error {
  public:
    explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

class argument_error : public std::invalid_argument {
  public:
    explicit argument_error(const std::string& what) : std::invalid_argument(what) {}
};

class accuracy_error : public std::runtime_error {
  public:
    explicit accuracy_error(const std::string& what) : std::runtime_error(what) {}
};

// Deterministic uniform sampler. std::uniform_real_distribution is
// implementation-defined, so the mapping from raw bits is done by hand to
// keep reports byte-identical across toolchains.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

    std::uint64_t next_u64() {
        // splitmix64
        std::uint64_t x = (state_ += 0x9e3779b97f4a7c15ULL);
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    // uniform in [0, 1)
    real uniform() { return real(next_u64() >> 11) * 0x1.0p-53L; }

    real uniform(real lo, real hi) { return lo + (hi - lo) * uniform(); }

    cplx complex_in_disk(real radius) {
        // rejection sampling keeps the distribution rotation-invariant
        for (;;) {
            const real x = uniform(-1, 1);
            const real y = uniform(-1, 1);
            if (x * x + y * y <= 1) return cplx(radius * x, radius * y);
        }
    }

    std::vector<cplx> complex_vector(std::size_t n, real radius) {
        std::vector<cplx> v(n);
        for (auto& z : v) z = complex_in_disk(radius);
        return v;
    }

  private:
    std::uint64_t state_;
};

}  // namespace kahlerc
