#include "polydeq/model.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace polydeq {

long MultiIndex::degree() const {
    return std::accumulate(exponents.begin(), exponents.end(), 0L);
}

std::string to_string(const MultiIndex& mi) {
    std::ostringstream out;
    out << "(";
    for (std::size_t i = 0; i < mi.exponents.size(); ++i) {
        if (i) out << ",";
        out << mi.exponents[i];
    }
    out << ")";
    return out.str();
}

Regime state_regime(const StateVector& state) {
    if (state.z.empty()) throw DomainError("empty state vector");
    const Regime r = state.z.front().regime();
    for (const Scalar& c : state.z) {
        if (c.regime() != r) {
            throw RegimeError("state vector mixes exact and float components");
        }
    }
    return r;
}

StateVector scale_state(const StateVector& state, const Scalar& factor) {
    StateVector out;
    out.step = state.step;
    out.z.reserve(state.z.size());
    for (const Scalar& c : state.z) out.z.push_back(c * factor);
    return out;
}

StateVector to_float(const StateVector& state) {
    StateVector out;
    out.step = state.step;
    out.z.reserve(state.z.size());
    for (const Scalar& c : state.z) out.z.push_back(to_float(c));
    return out;
}

std::string to_string(const Violation& v) {
    std::ostringstream out;
    if (v.equation > 0) {
        out << "equation " << v.equation;
        if (v.index) out << " " << to_string(*v.index);
        out << ": ";
    }
    out << v.message;
    return out.str();
}

HomogeneousSystem::HomogeneousSystem(int n_vars, int degree, Regime regime)
    : n_vars_(n_vars), degree_(degree), regime_(regime) {
    if (n_vars < 1) {
        throw DomainError("system needs at least one variable, got n_vars = " +
                          std::to_string(n_vars));
    }
    if (degree < 0) {
        throw DomainError("negative degree " + std::to_string(degree));
    }
    terms_.resize(static_cast<std::size_t>(n_vars));
}

void HomogeneousSystem::set_coefficient(int equation, MultiIndex index,
                                        Scalar value) {
    if (equation < 0 || equation >= n_vars_) {
        throw DomainError("equation index " + std::to_string(equation + 1) +
                          " outside 1.." + std::to_string(n_vars_));
    }
    if (value.regime() != regime_) {
        throw RegimeError("coefficient regime " + std::string(regime_name(value.regime())) +
                          " does not match system regime " + regime_name(regime_));
    }
    terms_[static_cast<std::size_t>(equation)].insert_or_assign(std::move(index),
                                                                std::move(value));
}

const Scalar* HomogeneousSystem::find_coefficient(int equation,
                                                  const MultiIndex& index) const {
    const auto& map = terms(equation);
    const auto it = map.find(index);
    return it == map.end() ? nullptr : &it->second;
}

Scalar HomogeneousSystem::coefficient(int equation,
                                      const MultiIndex& index) const {
    const Scalar* c = find_coefficient(equation, index);
    return c ? *c : Scalar::zero(regime_);
}

const HomogeneousSystem::TermMap& HomogeneousSystem::terms(int equation) const {
    if (equation < 0 || equation >= n_vars_) {
        throw DomainError("equation index " + std::to_string(equation + 1) +
                          " outside 1.." + std::to_string(n_vars_));
    }
    return terms_[static_cast<std::size_t>(equation)];
}

std::size_t HomogeneousSystem::term_count() const {
    std::size_t total = 0;
    for (const auto& map : terms_) total += map.size();
    return total;
}

HomogeneousSystem HomogeneousSystem::to_float() const {
    HomogeneousSystem out(n_vars_, degree_, Regime::Float);
    for (int n = 0; n < n_vars_; ++n) {
        for (const auto& [index, value] : terms(n)) {
            out.set_coefficient(n, index, polydeq::to_float(value));
        }
    }
    return out;
}

std::vector<MultiIndex> enumerate_multi_indices(int n_vars, int degree) {
    if (n_vars < 1) throw DomainError("enumerate_multi_indices: n_vars < 1");
    if (degree < 0) throw DomainError("enumerate_multi_indices: degree < 0");

    std::vector<MultiIndex> out;
    std::vector<int> current(static_cast<std::size_t>(n_vars), 0);
    current[0] = degree;
    for (;;) {
        out.push_back(MultiIndex(current));
        // Descending lexicographic successor: move one unit from the last
        // positive entry left of the tail and collect the tail behind it.
        int k = -1;
        for (int i = n_vars - 2; i >= 0; --i) {
            if (current[static_cast<std::size_t>(i)] > 0) {
                k = i;
                break;
            }
        }
        if (k < 0) break;
        const int tail = current[static_cast<std::size_t>(n_vars - 1)];
        current[static_cast<std::size_t>(k)] -= 1;
        current[static_cast<std::size_t>(k + 1)] = tail + 1;
        for (int j = k + 2; j < n_vars; ++j) current[static_cast<std::size_t>(j)] = 0;
    }
    return out;
}

std::uint64_t multi_index_count(int n_vars, int degree) {
    if (n_vars < 1) throw DomainError("multi_index_count: n_vars < 1");
    if (degree < 0) throw DomainError("multi_index_count: degree < 0");
    BigInt count;
    mpz_bin_uiui(count.get_mpz_t(),
                 static_cast<unsigned long>(degree + n_vars - 1),
                 static_cast<unsigned long>(n_vars - 1));
    if (!count.fits_ulong_p()) {
        throw DomainError("multi_index_count(" + std::to_string(n_vars) + ", " +
                          std::to_string(degree) + ") exceeds 64 bits");
    }
    return static_cast<std::uint64_t>(count.get_ui());
}

Scalar monomial_eval(const MultiIndex& mi, const std::vector<Scalar>& z) {
    if (mi.exponents.size() != z.size()) {
        throw DomainError("monomial_eval: index length " +
                          std::to_string(mi.exponents.size()) +
                          " does not match state length " +
                          std::to_string(z.size()));
    }
    if (z.empty()) throw DomainError("monomial_eval: empty state");
    Scalar result = Scalar::one(z.front().regime());
    for (std::size_t l = 0; l < z.size(); ++l) {
        const int m = mi.exponents[l];
        if (m == 0) continue;  // 0^0 = 1
        if (m < 0) {
            throw DomainError("monomial_eval: negative exponent in " +
                              to_string(mi));
        }
        result *= pow_int(z[l], static_cast<long>(m));
    }
    return result;
}

std::vector<Violation> validate_system(const HomogeneousSystem& sys) {
    std::vector<Violation> out;
    if (sys.degree() < 2) {
        out.push_back({"degree must be >= 2 (degree-" +
                           std::to_string(sys.degree()) +
                           " systems are out of scope)",
                       0, std::nullopt});
    }
    for (int n = 0; n < sys.n_vars(); ++n) {
        for (const auto& [index, value] : sys.terms(n)) {
            (void)value;
            if (index.size() != sys.n_vars()) {
                out.push_back({"index length " + std::to_string(index.size()) +
                                   " does not match n_vars " +
                                   std::to_string(sys.n_vars()),
                               n + 1, index});
                continue;
            }
            bool negative = false;
            for (int m : index.exponents) {
                if (m < 0) negative = true;
            }
            if (negative) {
                out.push_back({"negative exponent", n + 1, index});
                continue;
            }
            if (index.degree() != sys.degree()) {
                out.push_back({"degree mismatch: index sums to " +
                                   std::to_string(index.degree()) +
                                   ", system degree is " +
                                   std::to_string(sys.degree()),
                               n + 1, index});
            }
        }
    }
    return out;
}

}  // namespace polydeq
