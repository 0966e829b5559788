#ifndef LDP_RATIONAL_HPP
#define LDP_RATIONAL_HPP

#include <boost/rational.hpp>

#include <cstdint>
#include <string>

#include "ldp/errors.hpp"

namespace ldp {

/// Exact rational arithmetic for work densities, local demands and
/// priorities. Tie-breaks in the scheduler depend on exact comparison;
/// floating point is never used on these paths.
using Rat = boost::rational<std::int64_t>;

inline double to_double(const Rat& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

inline std::string to_string(const Rat& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

/// Parses "3/4" or "3". Inverse of to_string.
inline Rat parse_rational(const std::string& text) {
    try {
        const auto slash = text.find('/');
        if (slash == std::string::npos) return Rat(std::stoll(text));
        const std::int64_t num = std::stoll(text.substr(0, slash));
        const std::int64_t den = std::stoll(text.substr(slash + 1));
        if (den == 0) throw InputError("rational with zero denominator: " + text);
        return Rat(num, den);
    } catch (const std::invalid_argument&) {
        throw InputError("malformed rational: " + text);
    } catch (const std::out_of_range&) {
        throw InputError("rational out of range: " + text);
    }
}

} // namespace ldp

#endif // LDP_RATIONAL_HPP
