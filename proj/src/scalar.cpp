#include "cvxproj/scalar.hpp"

#include <stdexcept>
#include <cstdlib>

namespace cvxproj {

std::string_view to_string(ScalarKind k) {
    switch (k) {
        case ScalarKind::float64: return "float64";
        case ScalarKind::rational: return "rational";
        case ScalarKind::quad_sqrt2: return "quad_sqrt2";
    }
    return "float64";
}

ScalarKind scalar_kind_from_string(std::string_view s) {
    if (s == "float64") return ScalarKind::float64;
    if (s == "rational") return ScalarKind::rational;
    if (s == "quad_sqrt2") return ScalarKind::quad_sqrt2;
    throw std::invalid_argument("unknown scalar kind: " + std::string(s));
}

int sign(const Rational& x) { return x.sign(); }

int sign(const QuadSqrt2& x) {
    int sa = sign(x.a());
    int sb = sign(x.b());
    if (sa == 0) return sb;
    if (sb == 0 || sa == sb) return sa;
    // Opposite signs: compare a^2 with 2 b^2.
    int c = (x.a() * x.a()).compare(Rational(2) * x.b() * x.b());
    return c > 0 ? sa : (c < 0 ? sb : 0);
}

QuadSqrt2 abs(const QuadSqrt2& x) { return sign(x) < 0 ? -x : x; }

bool operator<(const QuadSqrt2& x, const QuadSqrt2& y) { return sign(y - x) > 0; }

QuadSqrt2& QuadSqrt2::operator/=(const QuadSqrt2& o) {
    Rational n = o.norm();
    if (n == 0) throw std::domain_error("division by zero in Q(sqrt 2)");
    *this *= o.conjugate();
    a_ /= n;
    b_ /= n;
    return *this;
}

std::ostream& operator<<(std::ostream& os, const QuadSqrt2& q) {
    return os << format_rational(q.a()) << "+" << format_rational(q.b()) << "*sqrt2";
}

double to_double(const QuadSqrt2& x) { return galois_embed(x, +1); }

double galois_embed(const QuadSqrt2& q, int sign_choice) {
    if (sign_choice != 1 && sign_choice != -1) throw std::invalid_argument("galois_embed: sign must be +1 or -1");
    const double r2 = std::sqrt(2.0);
    int sa = sign(q.a());
    int sb = sign(q.b()) * sign_choice;
    if (sa == 0 || sb == 0 || sa == sb) return to_double(q.a()) + sign_choice * to_double(q.b()) * r2;
    // Cancelling case: a + s b sqrt2 = (a^2 - 2 b^2) / (a - s b sqrt2), denominator has no cancellation.
    double denom = to_double(q.a()) - sign_choice * to_double(q.b()) * r2;
    return to_double(q.norm()) / denom;
}

Rational parse_rational(std::string_view s) {
    auto trim = [](std::string_view v) {
        while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) v.remove_prefix(1);
        while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) v.remove_suffix(1);
        return v;
    };
    s = trim(s);
    if (s.empty()) throw std::invalid_argument("empty rational");
    auto check_int = [](std::string_view v) {
        std::size_t i = (!v.empty() && (v[0] == '-' || v[0] == '+')) ? 1 : 0;
        if (i == v.size()) return false;
        for (; i < v.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(v[i]))) return false;
        return true;
    };
    auto to_int = [&](std::string_view v) {
        if (!check_int(v)) throw std::invalid_argument("malformed rational: " + std::string(s));
        if (v[0] == '+') v.remove_prefix(1);
        return Integer(std::string(v));
    };
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        Integer p = to_int(trim(s.substr(0, slash)));
        Integer q = to_int(trim(s.substr(slash + 1)));
        if (q == 0) throw std::invalid_argument("zero denominator: " + std::string(s));
        return Rational(p, q);
    }
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string_view ip = s.substr(0, dot), fp = s.substr(dot + 1);
        std::string digits = std::string(ip) + std::string(fp);
        if (ip.empty() || ip == "-" || ip == "+") digits = std::string(ip) + "0" + std::string(fp);
        Integer p = to_int(digits);
        Integer q = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(fp.size()));
        return Rational(p, q);
    }
    return Rational(to_int(s));
}

std::string format_rational(const Rational& r) {
    Integer p = boost::multiprecision::numerator(r);
    Integer q = boost::multiprecision::denominator(r);
    if (q == 1) return p.str();
    return p.str() + "/" + q.str();
}

QuadSqrt2 qpow(const QuadSqrt2& x, long e) {
    QuadSqrt2 base = e >= 0 ? x : QuadSqrt2(1) / x;
    QuadSqrt2 out(1);
    for (long i = 0; i < std::labs(e); ++i) out = out * base;
    return out;
}

}  // namespace cvxproj
