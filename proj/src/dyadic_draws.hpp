#ifndef POLYDEQ_SRC_DYADIC_DRAWS_HPP
#define POLYDEQ_SRC_DYADIC_DRAWS_HPP

#include <cstdint>
#include <random>
#include <utility>

#include "polydeq/scalar.hpp"

namespace polydeq::detail {

// Seeded draw pool shared by the instance generator and the built-in example.
// All randomness flows through explicit draws on one engine so a seed pins
// the output bit for bit; no ambient RNG.
class DyadicDraws {
public:
    explicit DyadicDraws(std::uint64_t seed) : engine_(seed) {}

    bool bernoulli(double p) {
        const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        return u < p;
    }

    // Dyadic rational in [-1, 1]: k / 2^j with j in 0..6. Exactly
    // representable in both regimes.
    std::pair<long, long> dyadic() {
        const long j = static_cast<long>(engine_() % 7);
        const long scale = 1L << j;
        const long k = static_cast<long>(engine_() % (2 * scale + 1)) - scale;
        return {k, scale};
    }

    Scalar scalar(Regime regime) {
        const auto [kr, sr] = dyadic();
        const auto [ki, si] = dyadic();
        if (regime == Regime::Exact) {
            Rational re(kr, sr);
            Rational im(ki, si);
            re.canonicalize();
            im.canonicalize();
            return Scalar::exact(re, im);
        }
        return Scalar::floating(static_cast<double>(kr) / static_cast<double>(sr),
                                static_cast<double>(ki) / static_cast<double>(si));
    }

    Scalar nonzero_scalar(Regime regime) {
        for (;;) {
            Scalar s = scalar(regime);
            if (!s.is_zero()) return s;
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace polydeq::detail

#endif  // POLYDEQ_SRC_DYADIC_DRAWS_HPP
