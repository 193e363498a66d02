#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "polydeq/model.hpp"

using namespace polydeq;

namespace {

// Independent oracle: odometer over all exponent vectors with entries in
// 0..M, keeping those that sum to M, sorted descending lexicographically.
std::vector<std::vector<int>> brute_force_indices(int n_vars, int degree) {
    std::vector<std::vector<int>> out;
    std::vector<int> v(static_cast<std::size_t>(n_vars), 0);
    for (;;) {
        if (std::accumulate(v.begin(), v.end(), 0) == degree) out.push_back(v);
        int i = n_vars - 1;
        while (i >= 0 && v[static_cast<std::size_t>(i)] == degree) {
            v[static_cast<std::size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
        v[static_cast<std::size_t>(i)] += 1;
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a > b; });
    return out;
}

// Independent oracle: Pascal's triangle.
std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::vector<std::uint64_t> row(static_cast<std::size_t>(n) + 1, 0);
    row[0] = 1;
    for (int i = 1; i <= n; ++i) {
        for (int j = i; j > 0; --j) row[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(j - 1)];
    }
    return row[static_cast<std::size_t>(k)];
}

}  // namespace

TEST_CASE("enumerate_multi_indices canonical order for N=2, M=4") {
    const auto indices = enumerate_multi_indices(2, 4);
    REQUIRE(indices.size() == 5);
    CHECK(indices[0] == MultiIndex({4, 0}));
    CHECK(indices[1] == MultiIndex({3, 1}));
    CHECK(indices[2] == MultiIndex({2, 2}));
    CHECK(indices[3] == MultiIndex({1, 3}));
    CHECK(indices[4] == MultiIndex({0, 4}));
}

TEST_CASE("enumerate_multi_indices single variable") {
    const auto indices = enumerate_multi_indices(1, 3);
    REQUIRE(indices.size() == 1);
    CHECK(indices[0] == MultiIndex({3}));
}

TEST_CASE("enumeration agrees with the brute-force oracle up to N, M = 8") {
    DescLex less;
    for (int n_vars = 1; n_vars <= 8; ++n_vars) {
        for (int degree = 0; degree <= 8; ++degree) {
            const auto got = enumerate_multi_indices(n_vars, degree);
            const auto expected = brute_force_indices(n_vars, degree);
            REQUIRE(got.size() == expected.size());
            CHECK(got.size() == multi_index_count(n_vars, degree));
            CHECK(multi_index_count(n_vars, degree) ==
                  binomial(degree + n_vars - 1, n_vars - 1));
            for (std::size_t i = 0; i < got.size(); ++i) {
                CHECK(got[i].exponents == expected[i]);
                CHECK(got[i].degree() == degree);
                if (i > 0) CHECK(less(got[i - 1], got[i]));  // strictly decreasing
            }
        }
    }
}

TEST_CASE("multi_index_count examples") {
    CHECK(multi_index_count(2, 4) == 5);
    CHECK(multi_index_count(1, 7) == 1);
    CHECK(multi_index_count(4, 3) == 20);
    CHECK(multi_index_count(3, 2) == 6);
}

TEST_CASE("monomial_eval basics") {
    // (0,...,0,M) with z_N = 1 evaluates to 1 whatever the other entries are.
    std::vector<Scalar> z{Scalar::exact(17L), Scalar::exact(-3L), Scalar::exact(1L)};
    CHECK(monomial_eval(MultiIndex({0, 0, 4}), z) == Scalar::exact(1L));

    std::vector<Scalar> z32{Scalar::exact(3L), Scalar::exact(2L)};
    CHECK(monomial_eval(MultiIndex({2, 1}), z32) == Scalar::exact(18L));

    // 2 * (1+i)^3 = 2 * (-2+2i) = -4+4i
    std::vector<Scalar> zc{Scalar::exact(2L), Scalar::exact(1L, 1L)};
    CHECK(monomial_eval(MultiIndex({1, 3}), zc) == Scalar::exact(-4L, 4L));
}

TEST_CASE("monomial homogeneity at the monomial level") {
    std::mt19937_64 rng(23);
    auto random_scalar = [&rng] {
        Rational re(static_cast<long>(rng() % 21) - 10,
                    static_cast<long>(rng() % 9) + 1);
        Rational im(static_cast<long>(rng() % 21) - 10,
                    static_cast<long>(rng() % 9) + 1);
        re.canonicalize();
        im.canonicalize();
        return Scalar::exact(re, im);
    };
    for (int trial = 0; trial < 50; ++trial) {
        const int n_vars = 1 + static_cast<int>(rng() % 4);
        const int degree = 2 + static_cast<int>(rng() % 3);
        const auto basis = enumerate_multi_indices(n_vars, degree);
        const MultiIndex& mi = basis[rng() % basis.size()];
        std::vector<Scalar> z;
        for (int i = 0; i < n_vars; ++i) z.push_back(random_scalar());
        Scalar lambda = random_scalar();
        while (lambda.is_zero()) lambda = random_scalar();
        std::vector<Scalar> scaled;
        for (const Scalar& c : z) scaled.push_back(c * lambda);
        CHECK(monomial_eval(mi, scaled) ==
              pow_int(lambda, static_cast<long>(degree)) * monomial_eval(mi, z));
    }
}

TEST_CASE("validate_system accepts a full N=2, M=4 system") {
    HomogeneousSystem sys(2, 4, Regime::Exact);
    long v = 1;
    for (int n = 0; n < 2; ++n) {
        for (const MultiIndex& mi : enumerate_multi_indices(2, 4)) {
            sys.set_coefficient(n, mi, Scalar::exact(v++));
        }
    }
    CHECK(sys.term_count() == 10);
    CHECK(validate_system(sys).empty());
}

TEST_CASE("validate_system reports degree mismatches") {
    HomogeneousSystem sys(2, 4, Regime::Exact);
    sys.set_coefficient(0, MultiIndex({3, 0}), Scalar::exact(1L));
    const auto violations = validate_system(sys);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].equation == 1);
    CHECK(violations[0].index == MultiIndex({3, 0}));
    CHECK(to_string(violations[0]).find("degree mismatch") != std::string::npos);
}

TEST_CASE("validate_system rejects degree below 2") {
    HomogeneousSystem sys(2, 1, Regime::Exact);
    const auto violations = validate_system(sys);
    REQUIRE(violations.size() == 1);
    CHECK(to_string(violations[0]).find("degree must be >= 2") !=
          std::string::npos);
}

TEST_CASE("validate_system reports wrong index length and negative exponents") {
    HomogeneousSystem sys(2, 3, Regime::Exact);
    sys.set_coefficient(0, MultiIndex({3}), Scalar::exact(1L));
    sys.set_coefficient(1, MultiIndex({4, -1}), Scalar::exact(1L));
    const auto violations = validate_system(sys);
    CHECK(violations.size() == 2);
}

TEST_CASE("system storage basics") {
    HomogeneousSystem sys(2, 2, Regime::Exact);
    CHECK_THROWS_AS(sys.set_coefficient(2, MultiIndex({1, 1}), Scalar::exact(1L)),
                    DomainError);
    CHECK_THROWS_AS(sys.set_coefficient(0, MultiIndex({1, 1}), Scalar::floating(1.0)),
                    RegimeError);
    sys.set_coefficient(0, MultiIndex({1, 1}), Scalar::exact(5L));
    sys.set_coefficient(0, MultiIndex({1, 1}), Scalar::exact(7L));  // replace
    CHECK(sys.term_count() == 1);
    CHECK(sys.coefficient(0, MultiIndex({1, 1})) == Scalar::exact(7L));
    CHECK(sys.coefficient(0, MultiIndex({2, 0})) == Scalar::exact(0L));
    CHECK(sys.find_coefficient(1, MultiIndex({1, 1})) == nullptr);
}

TEST_CASE("state helpers") {
    StateVector state;
    state.z = {Scalar::exact(3L), Scalar::exact(2L)};
    CHECK(state_regime(state) == Regime::Exact);
    const StateVector scaled = scale_state(state, Scalar::exact(2L));
    CHECK(scaled.z[0] == Scalar::exact(6L));
    CHECK(scaled.z[1] == Scalar::exact(4L));

    StateVector mixed;
    mixed.z = {Scalar::exact(1L), Scalar::floating(1.0)};
    CHECK_THROWS_AS(state_regime(mixed), RegimeError);
    StateVector empty;
    CHECK_THROWS_AS(state_regime(empty), DomainError);
}
