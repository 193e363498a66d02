#ifndef POLYDEQ_MODEL_HPP
#define POLYDEQ_MODEL_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "polydeq/scalar.hpp"

namespace polydeq {

// Exponent vector (m_1, ..., m_N) of one monomial z_1^{m_1}...z_N^{m_N}.
// Valid indices have every m_l >= 0 and sum equal to the system degree;
// validate_system reports entries that break this.
struct MultiIndex {
    std::vector<int> exponents;

    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> e) : exponents(std::move(e)) {}

    int size() const { return static_cast<int>(exponents.size()); }
    long degree() const;

    bool operator==(const MultiIndex& rhs) const = default;
};

std::string to_string(const MultiIndex& mi);

// Canonical ordering of monomials: descending lexicographic, so that
// (M,0,...,0) comes first and (0,...,0,M) last. "The m-th coefficient" in
// flattened notation always refers to this order.
struct DescLex {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const {
        return std::lexicographical_compare(b.exponents.begin(),
                                            b.exponents.end(),
                                            a.exponents.begin(),
                                            a.exponents.end());
    }
};

// State (z_1(s), ..., z_N(s)) at one step.
struct StateVector {
    std::vector<Scalar> z;
    int step = 0;
};

// Regime of a state vector; throws RegimeError if components disagree and
// DomainError if empty.
Regime state_regime(const StateVector& state);

StateVector scale_state(const StateVector& state, const Scalar& factor);
StateVector to_float(const StateVector& state);

// One violation found by validate_system. `equation` is 1-based to match the
// JSON documents and CLI; 0 marks a system-level finding.
struct Violation {
    std::string message;
    int equation = 0;
    std::optional<MultiIndex> index;
};

std::string to_string(const Violation& v);

// System of N first-order difference equations whose right-hand sides are
// homogeneous polynomials of degree M, stored sparsely: absent (equation,
// index) entries mean coefficient zero. Equations are indexed 0..N-1 in this
// API; JSON documents use 1..N.
class HomogeneousSystem {
public:
    HomogeneousSystem(int n_vars, int degree, Regime regime);

    int n_vars() const { return n_vars_; }
    int degree() const { return degree_; }
    Regime regime() const { return regime_; }

    using TermMap = std::map<MultiIndex, Scalar, DescLex>;

    // Stores (or replaces) one coefficient. The index degree is not checked
    // here; validate_system reports mismatches. Regime mismatches and
    // out-of-range equations are structural and throw.
    void set_coefficient(int equation, MultiIndex index, Scalar value);

    // Stored coefficient or nullptr when absent.
    const Scalar* find_coefficient(int equation, const MultiIndex& index) const;

    // Stored coefficient or the regime's zero when absent.
    Scalar coefficient(int equation, const MultiIndex& index) const;

    const TermMap& terms(int equation) const;

    std::size_t term_count() const;

    HomogeneousSystem to_float() const;

private:
    int n_vars_;
    int degree_;
    Regime regime_;
    std::vector<TermMap> terms_;
};

// All exponent vectors with sum M over N variables, descending lexicographic.
// Length is C(M+N-1, N-1).
std::vector<MultiIndex> enumerate_multi_indices(int n_vars, int degree);

// C(M+N-1, N-1); throws DomainError if the count does not fit in 64 bits.
std::uint64_t multi_index_count(int n_vars, int degree);

// prod_l z_l^{m_l} with the 0^0 = 1 convention.
Scalar monomial_eval(const MultiIndex& mi, const std::vector<Scalar>& z);

// Checks every invariant that is representable in a constructed system:
// degree >= 2, index lengths, nonnegative exponents, index degrees equal M.
// Returns an empty list when the system is well formed.
std::vector<Violation> validate_system(const HomogeneousSystem& sys);

}  // namespace polydeq

#endif  // POLYDEQ_MODEL_HPP
