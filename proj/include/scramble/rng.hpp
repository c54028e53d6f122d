#ifndef SCRAMBLE_RNG_HPP
#define SCRAMBLE_RNG_HPP

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>

namespace scramble {

// SplitMix64 output function (Steele/Lea/Flood). Bijective on 64-bit words.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Counter-based generator: the k-th output is splitmix64(seed + k*phi),
// so any output can be regenerated from (seed, k) alone. Gaussian
// variates come from Box-Muller on the uniform stream, which keeps
// realizations identical across standard-library implementations.
class CounterRng {
  public:
    explicit CounterRng(uint64_t seed) : seed_(seed) {}

    uint64_t next_u64() { return splitmix64(seed_ + (counter_++) * 0x9E3779B97F4A7C15ull); }

    // Uniform in (0, 1); 53-bit mantissa, never exactly 0.
    double next_uniform() {
        const uint64_t bits = next_u64() >> 11;
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * M_PI * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

  private:
    uint64_t seed_;
    uint64_t counter_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Haar-distributed unitary via QR of a complex Ginibre matrix with the
// R-diagonal phase fix.
inline Eigen::MatrixXcd haar_unitary(Eigen::Index dim, CounterRng& rng) {
    Eigen::MatrixXcd g(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j)
        for (Eigen::Index i = 0; i < dim; ++i)
            g(i, j) = std::complex<double>(rng.next_gaussian(), rng.next_gaussian());
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index k = 0; k < dim; ++k) {
        std::complex<double> d = r(k, k);
        q.col(k) *= d / std::abs(d);
    }
    return q;
}

}  // namespace scramble

#endif
