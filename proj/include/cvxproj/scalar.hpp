#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Core>

#include <cmath>
#include <ostream>
#include <string>
#include <string_view>

namespace cvxproj {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

enum class ScalarKind { float64, rational, quad_sqrt2 };

std::string_view to_string(ScalarKind k);
ScalarKind scalar_kind_from_string(std::string_view s);

// Element a + b*sqrt(2) of Q(sqrt 2). Components are kept reduced by the
// underlying rational type.
class QuadSqrt2 {
public:
    QuadSqrt2() = default;
    QuadSqrt2(int a) : a_(a) {}  // NOLINT: implicit integer literals are convenient in Eigen code
    QuadSqrt2(long a) : a_(a) {}  // NOLINT
    QuadSqrt2(Rational a) : a_(std::move(a)) {}  // NOLINT
    QuadSqrt2(Rational a, Rational b) : a_(std::move(a)), b_(std::move(b)) {}

    static QuadSqrt2 sqrt2() { return {Rational(0), Rational(1)}; }

    const Rational& a() const { return a_; }
    const Rational& b() const { return b_; }

    QuadSqrt2 conjugate() const { return {a_, -b_}; }
    Rational norm() const { return a_ * a_ - 2 * b_ * b_; }

    QuadSqrt2& operator+=(const QuadSqrt2& o) { a_ += o.a_; b_ += o.b_; return *this; }
    QuadSqrt2& operator-=(const QuadSqrt2& o) { a_ -= o.a_; b_ -= o.b_; return *this; }
    QuadSqrt2& operator*=(const QuadSqrt2& o) {
        Rational na = a_ * o.a_ + 2 * b_ * o.b_;
        Rational nb = a_ * o.b_ + b_ * o.a_;
        a_ = std::move(na);
        b_ = std::move(nb);
        return *this;
    }
    QuadSqrt2& operator/=(const QuadSqrt2& o);

    friend QuadSqrt2 operator+(QuadSqrt2 x, const QuadSqrt2& y) { return x += y; }
    friend QuadSqrt2 operator-(QuadSqrt2 x, const QuadSqrt2& y) { return x -= y; }
    friend QuadSqrt2 operator*(QuadSqrt2 x, const QuadSqrt2& y) { return x *= y; }
    friend QuadSqrt2 operator/(QuadSqrt2 x, const QuadSqrt2& y) { return x /= y; }
    friend QuadSqrt2 operator-(const QuadSqrt2& x) { return {-x.a_, -x.b_}; }
    friend bool operator==(const QuadSqrt2& x, const QuadSqrt2& y) { return x.a_ == y.a_ && x.b_ == y.b_; }
    friend bool operator!=(const QuadSqrt2& x, const QuadSqrt2& y) { return !(x == y); }
    friend bool operator<(const QuadSqrt2& x, const QuadSqrt2& y);
    friend bool operator>(const QuadSqrt2& x, const QuadSqrt2& y) { return y < x; }
    friend bool operator<=(const QuadSqrt2& x, const QuadSqrt2& y) { return !(y < x); }
    friend bool operator>=(const QuadSqrt2& x, const QuadSqrt2& y) { return !(x < y); }
    friend std::ostream& operator<<(std::ostream& os, const QuadSqrt2& q);

private:
    Rational a_{0};
    Rational b_{0};
};

// Exact sign in {-1, 0, 1}.
int sign(const Rational& x);
int sign(const QuadSqrt2& x);
// Integer power; negative exponents invert first.
QuadSqrt2 qpow(const QuadSqrt2& x, long e);
inline int sign(double x) { return (x > 0) - (x < 0); }

QuadSqrt2 abs(const QuadSqrt2& x);

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.convert_to<double>(); }
double to_double(const QuadSqrt2& x);

// a + b*sqrt(2) for sign_choice = +1, a - b*sqrt(2) for -1.
double galois_embed(const QuadSqrt2& q, int sign_choice);

template <class T> constexpr ScalarKind scalar_kind_of();
template <> constexpr ScalarKind scalar_kind_of<double>() { return ScalarKind::float64; }
template <> constexpr ScalarKind scalar_kind_of<Rational>() { return ScalarKind::rational; }
template <> constexpr ScalarKind scalar_kind_of<QuadSqrt2>() { return ScalarKind::quad_sqrt2; }

template <class T> inline constexpr bool is_exact_v = !std::is_same_v<T, double>;

// "p/q" or "p"; decimals like "0.5" are accepted and converted exactly.
Rational parse_rational(std::string_view s);
std::string format_rational(const Rational& r);

}  // namespace cvxproj

namespace Eigen {
template <>
struct NumTraits<cvxproj::QuadSqrt2> : GenericNumTraits<cvxproj::QuadSqrt2> {
    using Real = cvxproj::QuadSqrt2;
    using NonInteger = cvxproj::QuadSqrt2;
    using Nested = cvxproj::QuadSqrt2;
    using Literal = cvxproj::QuadSqrt2;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 4,
        AddCost = 16,
        MulCost = 64
    };
    static inline Real epsilon() { return Real(0); }
    static inline Real dummy_precision() { return Real(0); }
    static inline int digits10() { return 0; }
};

template <typename BinaryOp>
struct ScalarBinaryOpTraits<cvxproj::QuadSqrt2, int, BinaryOp> { using ReturnType = cvxproj::QuadSqrt2; };
template <typename BinaryOp>
struct ScalarBinaryOpTraits<int, cvxproj::QuadSqrt2, BinaryOp> { using ReturnType = cvxproj::QuadSqrt2; };
}  // namespace Eigen
