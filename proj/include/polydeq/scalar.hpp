#ifndef POLYDEQ_SCALAR_HPP
#define POLYDEQ_SCALAR_HPP

#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include <gmpxx.h>

namespace polydeq {

// Numeric regime of a scalar. Exact scalars are Gaussian rationals
// (arbitrary-precision rational real/imaginary parts); Float scalars are
// complex doubles with an overflow guard. A scalar's regime is fixed at
// construction and mixing regimes in arithmetic is an error.
enum class Regime { Exact, Float };

const char* regime_name(Regime r);

using BigInt = mpz_class;
using Rational = mpq_class;

// Exponents such as M^s - 1 and (M^s - 1)/(M - 1) outgrow machine words for
// small s already; they are always carried as big integers.
using BigExponent = BigInt;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Mixed-regime arithmetic or regime-mismatched access.
class RegimeError : public Error {
public:
    using Error::Error;
};

// Violated precondition (division by zero, z_N(0) = 0, invalid argument).
class DomainError : public Error {
public:
    using Error::Error;
};

// Float-regime magnitude left the guarded range. Carries the offending
// magnitude so reports can show how far the value ran away.
class OverflowError : public Error {
public:
    OverflowError(const std::string& msg, double magnitude)
        : Error(msg), magnitude(magnitude) {}
    double magnitude;
};

// Exact-regime operand outgrew the configured bit-size budget.
class SizeBudgetError : public Error {
public:
    SizeBudgetError(const std::string& msg, std::size_t bits, std::size_t budget)
        : Error(msg), bits(bits), budget(budget) {}
    std::size_t bits;
    std::size_t budget;
};

// Any float-regime operation whose result magnitude exceeds this raises
// OverflowError instead of continuing with inf/NaN.
inline constexpr double kFloatOverflowLimit = 1e100;

struct ExactComplex {
    Rational re;
    Rational im;
};

// Complex number in one of the two regimes. Value semantics throughout;
// arithmetic never mutates operands and exact operations never round.
class Scalar {
public:
    Scalar() : value_(ExactComplex{Rational(0), Rational(0)}) {}

    static Scalar exact(Rational re, Rational im = Rational(0));
    static Scalar exact(long re, long im = 0);
    static Scalar floating(double re, double im = 0.0);
    static Scalar floating(std::complex<double> z);
    static Scalar zero(Regime regime);
    static Scalar one(Regime regime);

    Regime regime() const {
        return std::holds_alternative<ExactComplex>(value_) ? Regime::Exact
                                                            : Regime::Float;
    }
    bool is_exact() const { return regime() == Regime::Exact; }
    bool is_zero() const;

    // Regime-checked access.
    const ExactComplex& exact_value() const;
    std::complex<double> float_value() const;

    Scalar operator-() const;
    Scalar& operator+=(const Scalar& rhs);
    Scalar& operator-=(const Scalar& rhs);
    Scalar& operator*=(const Scalar& rhs);
    Scalar& operator/=(const Scalar& rhs);

    friend Scalar operator+(Scalar lhs, const Scalar& rhs) { return lhs += rhs; }
    friend Scalar operator-(Scalar lhs, const Scalar& rhs) { return lhs -= rhs; }
    friend Scalar operator*(Scalar lhs, const Scalar& rhs) { return lhs *= rhs; }
    friend Scalar operator/(Scalar lhs, const Scalar& rhs) { return lhs /= rhs; }

    // Value equality within one regime; scalars of different regimes are
    // never equal (they are distinct typed values, not convertible numbers).
    bool operator==(const Scalar& rhs) const;
    bool operator!=(const Scalar& rhs) const { return !(*this == rhs); }

private:
    explicit Scalar(ExactComplex v) : value_(std::move(v)) {}
    explicit Scalar(std::complex<double> v) : value_(v) {}

    std::variant<ExactComplex, std::complex<double>> value_;
};

// base^e by repeated squaring, with 0^0 = 1 and 0^e = 0 for e >= 1.
// Exact regime: when bit_budget is set, throws SizeBudgetError as soon as the
// (estimated or actual) operand size exceeds the budget. Float regime: throws
// OverflowError past the guarded magnitude range.
Scalar pow_int(const Scalar& base, const BigExponent& exponent,
               std::optional<std::size_t> bit_budget = std::nullopt);
Scalar pow_int(const Scalar& base, long exponent,
               std::optional<std::size_t> bit_budget = std::nullopt);

// Lossy but deterministic Exact -> Float conversion: each part rounds to the
// nearest double (ties to even). Float input passes through unchanged.
// Throws OverflowError when a part exceeds the double range.
Scalar to_float(const Scalar& x);

// Nearest-double conversion of a rational, ties to even.
double to_double(const Rational& q);

// Largest bit size over numerators/denominators of both parts (exact regime);
// 0 for float scalars. Drives the size-budget truncation in dynamics.
std::size_t bit_size(const Scalar& x);

// |z| as a double. For exact scalars this is an approximation; it saturates
// to inf instead of throwing, which is what reports and certificates need.
double magnitude(const Scalar& x);

std::string to_string(const Scalar& x);

// Textual rational syntax used in JSON documents: "p" or "p/q" with optional
// leading minus. Throws DomainError on malformed input or zero denominator.
Rational rational_from_string(std::string_view text);
std::string rational_to_string(const Rational& q);

// Decimal rendering with at most `digits` significant digits, scientific
// notation for magnitudes outside [1e-4, 1e16). Used by the CSV writer.
std::string rational_to_decimal(const Rational& q, int digits);

}  // namespace polydeq

#endif  // POLYDEQ_SCALAR_HPP
