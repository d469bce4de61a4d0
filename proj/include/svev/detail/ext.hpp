#pragma once

#include <boost/multiprecision/float128.hpp>

#include <cmath>

namespace svev {

// Extended working precision: IEEE binary128 (113-bit significand) via libquadmath.
using ext_real = boost::multiprecision::float128;

namespace detail {

// Neumaier-compensated accumulator.
template <class R>
struct CompensatedSum {
    R sum = 0;
    R comp = 0;
    void add(const R& x) {
        using std::abs;
        R t = sum + x;
        if (abs(sum) >= abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    R value() const { return sum + comp; }
};

template <class R>
inline R to_real(double x) { return R(x); }

}  // namespace detail
}  // namespace svev
