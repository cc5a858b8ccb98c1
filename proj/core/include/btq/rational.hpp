#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace btq {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Exact rationals serialize as "num/den" (den > 0, reduced), integers as "num".
inline std::string rat_to_string(const Rat& r)
{
    Int num = boost::multiprecision::numerator(r);
    Int den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

inline Rat rat_from_string(const std::string& s)
{
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(Int(s));
    return Rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
}

} // namespace btq
