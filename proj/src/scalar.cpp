#include "polydeq/scalar.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include <mpfr.h>

namespace polydeq {

const char* regime_name(Regime r) {
    return r == Regime::Exact ? "exact" : "float";
}

namespace {

void require_same_regime(const Scalar& a, const Scalar& b, const char* op) {
    if (a.regime() != b.regime()) {
        throw RegimeError(std::string("mixed-regime ") + op + ": " +
                          regime_name(a.regime()) + " vs " +
                          regime_name(b.regime()) +
                          " (convert explicitly with to_float)");
    }
}

// Raises past the guard instead of letting inf/NaN poison later comparisons.
std::complex<double> guard(std::complex<double> z, const char* op) {
    const double mag = std::abs(z);
    if (!std::isfinite(mag) || mag > kFloatOverflowLimit) {
        throw OverflowError(std::string("float overflow in ") + op +
                                ": |result| = " + std::to_string(mag),
                            mag);
    }
    return z;
}

std::size_t rational_bits(const Rational& q) {
    const std::size_t num = mpz_sizeinbase(q.get_num_mpz_t(), 2);
    const std::size_t den = mpz_sizeinbase(q.get_den_mpz_t(), 2);
    return std::max(num, den);
}

}  // namespace

Scalar Scalar::exact(Rational re, Rational im) {
    return Scalar(ExactComplex{std::move(re), std::move(im)});
}

Scalar Scalar::exact(long re, long im) {
    return Scalar(ExactComplex{Rational(re), Rational(im)});
}

Scalar Scalar::floating(double re, double im) {
    return Scalar(std::complex<double>(re, im));
}

Scalar Scalar::floating(std::complex<double> z) { return Scalar(z); }

Scalar Scalar::zero(Regime regime) {
    return regime == Regime::Exact ? exact(0L) : floating(0.0);
}

Scalar Scalar::one(Regime regime) {
    return regime == Regime::Exact ? exact(1L) : floating(1.0);
}

bool Scalar::is_zero() const {
    if (const auto* e = std::get_if<ExactComplex>(&value_)) {
        return sgn(e->re) == 0 && sgn(e->im) == 0;
    }
    const auto& z = std::get<std::complex<double>>(value_);
    return z.real() == 0.0 && z.imag() == 0.0;
}

const ExactComplex& Scalar::exact_value() const {
    if (const auto* e = std::get_if<ExactComplex>(&value_)) return *e;
    throw RegimeError("exact_value() on a float-regime scalar");
}

std::complex<double> Scalar::float_value() const {
    if (const auto* z = std::get_if<std::complex<double>>(&value_)) return *z;
    throw RegimeError("float_value() on an exact-regime scalar");
}

Scalar Scalar::operator-() const {
    if (const auto* e = std::get_if<ExactComplex>(&value_)) {
        return Scalar(ExactComplex{-e->re, -e->im});
    }
    return Scalar(-std::get<std::complex<double>>(value_));
}

Scalar& Scalar::operator+=(const Scalar& rhs) {
    require_same_regime(*this, rhs, "addition");
    if (auto* e = std::get_if<ExactComplex>(&value_)) {
        const auto& r = rhs.exact_value();
        e->re += r.re;
        e->im += r.im;
    } else {
        auto& z = std::get<std::complex<double>>(value_);
        z = guard(z + rhs.float_value(), "addition");
    }
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& rhs) {
    require_same_regime(*this, rhs, "subtraction");
    if (auto* e = std::get_if<ExactComplex>(&value_)) {
        const auto& r = rhs.exact_value();
        e->re -= r.re;
        e->im -= r.im;
    } else {
        auto& z = std::get<std::complex<double>>(value_);
        z = guard(z - rhs.float_value(), "subtraction");
    }
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& rhs) {
    require_same_regime(*this, rhs, "multiplication");
    if (auto* e = std::get_if<ExactComplex>(&value_)) {
        const auto& r = rhs.exact_value();
        Rational re = e->re * r.re - e->im * r.im;
        Rational im = e->re * r.im + e->im * r.re;
        e->re = std::move(re);
        e->im = std::move(im);
    } else {
        auto& z = std::get<std::complex<double>>(value_);
        z = guard(z * rhs.float_value(), "multiplication");
    }
    return *this;
}

Scalar& Scalar::operator/=(const Scalar& rhs) {
    require_same_regime(*this, rhs, "division");
    if (rhs.is_zero()) throw DomainError("division by the zero scalar");
    if (auto* e = std::get_if<ExactComplex>(&value_)) {
        const auto& r = rhs.exact_value();
        Rational denom = r.re * r.re + r.im * r.im;
        Rational re = (e->re * r.re + e->im * r.im) / denom;
        Rational im = (e->im * r.re - e->re * r.im) / denom;
        e->re = std::move(re);
        e->im = std::move(im);
    } else {
        auto& z = std::get<std::complex<double>>(value_);
        z = guard(z / rhs.float_value(), "division");
    }
    return *this;
}

bool Scalar::operator==(const Scalar& rhs) const {
    if (regime() != rhs.regime()) return false;
    if (const auto* e = std::get_if<ExactComplex>(&value_)) {
        const auto& r = rhs.exact_value();
        return e->re == r.re && e->im == r.im;
    }
    return std::get<std::complex<double>>(value_) == rhs.float_value();
}

Scalar pow_int(const Scalar& base, const BigExponent& exponent,
               std::optional<std::size_t> bit_budget) {
    if (sgn(exponent) < 0) {
        throw DomainError("pow_int: exponent must be nonnegative, got " +
                          exponent.get_str());
    }
    if (sgn(exponent) == 0) return Scalar::one(base.regime());  // 0^0 = 1
    if (base.is_zero()) return Scalar::zero(base.regime());

    if (base.is_exact() && bit_budget) {
        // Result size is about e * bits(base); refuse up front rather than
        // grinding out a number that will be discarded.
        BigInt estimate = exponent * static_cast<unsigned long>(bit_size(base));
        if (estimate > static_cast<unsigned long>(*bit_budget)) {
            const std::size_t bits =
                estimate.fits_ulong_p() ? estimate.get_ui() : SIZE_MAX;
            throw SizeBudgetError(
                "pow_int: estimated result size " + estimate.get_str() +
                    " bits exceeds budget " + std::to_string(*bit_budget),
                bits, *bit_budget);
        }
    }

    // Square-and-multiply, most significant exponent bit first.
    Scalar result = Scalar::one(base.regime());
    const mp_bitcnt_t nbits = mpz_sizeinbase(exponent.get_mpz_t(), 2);
    for (mp_bitcnt_t i = nbits; i-- > 0;) {
        result *= result;
        if (mpz_tstbit(exponent.get_mpz_t(), i)) result *= base;
        if (bit_budget && result.is_exact() && bit_size(result) > *bit_budget) {
            throw SizeBudgetError("pow_int: operand of " +
                                      std::to_string(bit_size(result)) +
                                      " bits exceeds budget " +
                                      std::to_string(*bit_budget),
                                  bit_size(result), *bit_budget);
        }
    }
    return result;
}

Scalar pow_int(const Scalar& base, long exponent,
               std::optional<std::size_t> bit_budget) {
    return pow_int(base, BigExponent(exponent), bit_budget);
}

double to_double(const Rational& q) {
    if (sgn(q) == 0) return 0.0;
    mpfr_t f;
    mpfr_init2(f, 53);
    mpfr_set_q(f, q.get_mpq_t(), MPFR_RNDN);
    const double d = mpfr_get_d(f, MPFR_RNDN);
    mpfr_clear(f);
    if (!std::isfinite(d)) {
        throw OverflowError(
            "to_float: rational magnitude exceeds the double range",
            std::abs(d));
    }
    return d;
}

Scalar to_float(const Scalar& x) {
    if (!x.is_exact()) return x;
    const auto& e = x.exact_value();
    return Scalar::floating(to_double(e.re), to_double(e.im));
}

std::size_t bit_size(const Scalar& x) {
    if (!x.is_exact()) return 0;
    const auto& e = x.exact_value();
    return std::max(rational_bits(e.re), rational_bits(e.im));
}

double magnitude(const Scalar& x) {
    if (x.is_exact()) {
        const auto& e = x.exact_value();
        return std::hypot(e.re.get_d(), e.im.get_d());
    }
    return std::abs(x.float_value());
}

std::string to_string(const Scalar& x) {
    std::ostringstream out;
    if (x.is_exact()) {
        const auto& e = x.exact_value();
        out << e.re.get_str();
        if (sgn(e.im) != 0) {
            out << (sgn(e.im) > 0 ? "+" : "-");
            Rational a = abs(e.im);
            out << a.get_str() << "i";
        }
    } else {
        const auto z = x.float_value();
        out.precision(17);
        out << z.real();
        if (z.imag() != 0.0) {
            out << (std::signbit(z.imag()) ? "-" : "+") << std::abs(z.imag())
                << "i";
        }
    }
    return out.str();
}

Rational rational_from_string(std::string_view text) {
    // Accepted: [+-]digits, optionally followed by /digits.
    auto fail = [&] {
        throw DomainError("malformed rational \"" + std::string(text) +
                          "\" (expected \"p\" or \"p/q\")");
    };
    if (text.empty()) fail();
    std::size_t i = 0;
    if (text[i] == '+' || text[i] == '-') ++i;
    std::size_t digits = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        ++i;
        ++digits;
    }
    if (digits == 0) fail();
    if (i < text.size()) {
        if (text[i] != '/') fail();
        ++i;
        digits = 0;
        while (i < text.size() &&
               std::isdigit(static_cast<unsigned char>(text[i]))) {
            ++i;
            ++digits;
        }
        if (digits == 0 || i != text.size()) fail();
    }

    std::string body(text);
    if (body[0] == '+') body.erase(0, 1);
    Rational q;
    if (q.set_str(body, 10) != 0) fail();
    if (mpz_sgn(q.get_den_mpz_t()) == 0) {
        throw DomainError("rational \"" + std::string(text) +
                          "\" has zero denominator");
    }
    q.canonicalize();
    return q;
}

std::string rational_to_string(const Rational& q) { return q.get_str(); }

std::string rational_to_decimal(const Rational& q, int digits) {
    if (digits < 1) digits = 1;
    if (sgn(q) == 0) return "0";
    const int prec_bits = 64 + static_cast<int>(digits * 3.33);
    mpf_class f(q, prec_bits);
    mp_exp_t exp10 = 0;
    std::string mant = f.get_str(exp10, 10, static_cast<std::size_t>(digits));
    std::string sign;
    if (!mant.empty() && mant[0] == '-') {
        sign = "-";
        mant.erase(0, 1);
    }
    // mant is the significand with the decimal point implied before it and
    // scaled by 10^exp10; render plainly when the exponent is tame.
    if (exp10 >= -3 && exp10 <= 17) {
        if (exp10 <= 0) {
            return sign + "0." + std::string(static_cast<std::size_t>(-exp10), '0') + mant;
        }
        if (static_cast<std::size_t>(exp10) >= mant.size()) {
            return sign + mant +
                   std::string(static_cast<std::size_t>(exp10) - mant.size(), '0');
        }
        return sign + mant.substr(0, static_cast<std::size_t>(exp10)) + "." +
               mant.substr(static_cast<std::size_t>(exp10));
    }
    std::string head = mant.substr(0, 1);
    std::string tail = mant.size() > 1 ? "." + mant.substr(1) : "";
    return sign + head + tail + "e" + std::to_string(exp10 - 1);
}

}  // namespace polydeq
