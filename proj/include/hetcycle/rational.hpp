#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace hetcycle {

// Exact rational scalar used for payoff data, vertex spectra and the
// skeleton-matrix regression identities. Field evaluation and eigen
// analysis additionally run in double precision.
using Rat = boost::multiprecision::cpp_rational;
using Int = boost::multiprecision::cpp_int;

inline double to_double(const Rat& q) { return q.convert_to<double>(); }

// Accepts "p/q", "p", or a plain decimal like "105.04".
inline Rat parse_rational(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    try {
        auto slash = s.find('/');
        if (slash != std::string::npos) {
            Int num(s.substr(0, slash));
            Int den(s.substr(slash + 1));
            if (den == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
            return Rat(num, den);
        }
        auto dot = s.find('.');
        if (dot == std::string::npos) return Rat(Int(s));
        std::string head = s.substr(0, dot), tail = s.substr(dot + 1);
        bool neg = !head.empty() && head[0] == '-';
        if (neg) head = head.substr(1);
        if (head.empty()) head = "0";
        Int den = 1;
        for (size_t i = 0; i < tail.size(); ++i) den *= 10;
        Rat v = Rat(Int(head)) + Rat(Int(tail.empty() ? "0" : tail), den);
        return neg ? -v : v;
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception&) {
        throw std::invalid_argument("not a rational literal: '" + s + "'");
    }
}

inline std::string to_string(const Rat& q) {
    std::string s = numerator(q).str();
    if (denominator(q) != 1) s += "/" + denominator(q).str();
    return s;
}

} // namespace hetcycle
