#pragma once

#include "svev/detail/ext.hpp"
#include "svev/errors.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace svev::detail {

// L_j^{(alpha)}(x) = sum_k binom(j+alpha, j-k) (-x)^k / k!
template <class R>
R laguerre_sum(int j, const R& alpha, const R& x) {
    if (j < 0) throw DomainError("laguerre_poly: negative degree");
    R t = 1;
    for (int i = 1; i <= j; ++i) t *= (alpha + i) / i;
    CompensatedSum<R> s;
    for (int k = 0; k <= j; ++k) {
        s.add(t);
        if (k < j) t *= -x * R(j - k) / (R(k + 1) * (alpha + k + 1));
    }
    return s.value();
}

// P_j^{(a,b)}(x) = Gamma(j+a+1)/(j! Gamma(j+a+b+1))
//                 * sum_k binom(j,k) Gamma(j+a+b+k+1)/Gamma(a+k+1) ((x-1)/2)^k
template <class R>
R jacobi_sum(int j, const R& a, const R& b, const R& x) {
    if (j < 0) throw DomainError("jacobi_poly: negative degree");
    R t = 1;
    for (int i = 1; i <= j; ++i) t *= (a + i) / i;
    const R z = (x - 1) / 2;
    CompensatedSum<R> s;
    for (int k = 0; k <= j; ++k) {
        s.add(t);
        if (k < j) t *= R(j - k) / R(k + 1) * (a + b + j + k + 1) / (a + k + 1) * z;
    }
    return s.value();
}

template <class R>
struct PfqValue {
    R value;
    R achieved;
    int terms;
};

template <class R>
PfqValue<R> pfq_sum(const std::vector<R>& up, const std::vector<R>& lo, const R& x,
                    double term_tol, int max_terms) {
    using std::abs;
    for (const R& b : lo) {
        using std::floor;
        if (b <= 0 && floor(b) == b)
            throw DomainError("hyp_pfq: lower parameter is a non-positive integer");
    }
    if (!(term_tol > 0) || max_terms < 1) throw DomainError("hyp_pfq: invalid truncation settings");
    CompensatedSum<R> s;
    R t = 1;
    s.add(t);
    if (x == 0) return {R(1), R(0), 1};
    int small_run = 0;
    for (int k = 0; k + 1 < max_terms; ++k) {
        R ratio = x / R(k + 1);
        for (const R& a : up) ratio *= (a + k);
        for (const R& b : lo) ratio /= (b + k);
        t *= ratio;
        s.add(t);
        if (t == 0) return {s.value(), R(0), k + 2};
        const R cur = s.value();
        const R rel = cur != 0 ? abs(t / cur) : abs(t);
        // only stop once the terms are shrinking, two in a row below tolerance
        if (rel < R(term_tol) && abs(ratio) < 1) {
            if (++small_run >= 2) return {cur, rel, k + 2};
        } else {
            small_run = 0;
        }
    }
    const R cur = s.value();
    throw NonConvergence("hyp_pfq: max_terms reached before term_tol",
                         static_cast<double>(cur),
                         static_cast<double>(cur != 0 ? abs(t / cur) : abs(t)));
}

}  // namespace svev::detail
