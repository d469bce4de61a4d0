#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace svev::detail {

// Determinant by LU with partial pivoting; M is row-major k x k and is overwritten.
template <class R>
R det_lu(std::vector<R>& M, int k) {
    using std::abs;
    R det = 1;
    for (int col = 0; col < k; ++col) {
        int piv = col;
        for (int r = col + 1; r < k; ++r)
            if (abs(M[r * k + col]) > abs(M[piv * k + col])) piv = r;
        if (M[piv * k + col] == 0) return R(0);
        if (piv != col) {
            for (int c = 0; c < k; ++c) std::swap(M[col * k + c], M[piv * k + c]);
            det = -det;
        }
        const R d = M[col * k + col];
        det *= d;
        for (int r = col + 1; r < k; ++r) {
            const R f = M[r * k + col] / d;
            if (f == 0) continue;
            for (int c = col; c < k; ++c) M[r * k + c] -= f * M[col * k + c];
        }
    }
    return det;
}

// Solves M x = b by LU with scaled partial pivoting. Returns the growth factor
// max|U| / max|M|, or a negative value when M is singular.
template <class R>
R solve_lu(std::vector<R> M, std::vector<R>& b, int k) {
    using std::abs;
    R maxa = 0;
    std::vector<R> scale(k, R(0));
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) {
            const R v = abs(M[r * k + c]);
            if (v > maxa) maxa = v;
            if (v > scale[r]) scale[r] = v;
        }
    for (int r = 0; r < k; ++r)
        if (scale[r] == 0) return R(-1);
    R maxu = maxa;
    for (int col = 0; col < k; ++col) {
        int piv = col;
        R best = abs(M[col * k + col]) / scale[col];
        for (int r = col + 1; r < k; ++r) {
            const R v = abs(M[r * k + col]) / scale[r];
            if (v > best) best = v, piv = r;
        }
        if (best == 0) return R(-1);
        if (piv != col) {
            for (int c = 0; c < k; ++c) std::swap(M[col * k + c], M[piv * k + c]);
            std::swap(b[col], b[piv]);
            std::swap(scale[col], scale[piv]);
        }
        const R d = M[col * k + col];
        for (int r = col + 1; r < k; ++r) {
            const R f = M[r * k + col] / d;
            if (f == 0) continue;
            for (int c = col; c < k; ++c) {
                M[r * k + c] -= f * M[col * k + c];
                const R v = abs(M[r * k + c]);
                if (v > maxu) maxu = v;
            }
            b[r] -= f * b[col];
        }
    }
    for (int r = k - 1; r >= 0; --r) {
        R s = b[r];
        for (int c = r + 1; c < k; ++c) s -= M[r * k + c] * b[c];
        b[r] = s / M[r * k + r];
    }
    return maxu / maxa;
}

// Fornberg's finite-difference weights: w[d][i] approximates f^(d)(z) ~ sum_i w[d][i] f(x_i).
inline std::vector<std::vector<double>> fornberg_weights(double z, const std::vector<double>& x, int m) {
    const int n = static_cast<int>(x.size());
    std::vector<std::vector<double>> c(m + 1, std::vector<double>(n, 0.0));
    double c1 = 1.0, c4 = x[0] - z;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - z;
        for (int j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    return c;
}

}  // namespace svev::detail
