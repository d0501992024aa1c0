// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace uavris {

using cdouble = std::complex<double>;
using CVec = std::vector<cdouble>;

// Dense row-major complex matrix, sized for small antenna arrays.
struct CMat {
    int rows = 0;
    int cols = 0;
    std::vector<cdouble> a;

    CMat() = default;
    CMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    cdouble& operator()(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    const cdouble& operator()(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }
};

// y = M x
inline CVec matvec(const CMat& m, const CVec& x) {
    CVec y(static_cast<size_t>(m.rows), cdouble(0.0, 0.0));
    for (int r = 0; r < m.rows; ++r) {
        cdouble acc(0.0, 0.0);
        const cdouble* row = &m.a[static_cast<size_t>(r) * m.cols];
        for (int c = 0; c < m.cols; ++c) acc += row[c] * x[static_cast<size_t>(c)];
        y[static_cast<size_t>(r)] = acc;
    }
    return y;
}

// <u, v> = sum_i conj(u_i) v_i
inline cdouble inner(const CVec& u, const CVec& v) {
    cdouble acc(0.0, 0.0);
    for (size_t i = 0; i < u.size(); ++i) acc += std::conj(u[i]) * v[i];
    return acc;
}

inline double norm2(const CVec& v) {
    double acc = 0.0;
    for (const auto& c : v) acc += std::norm(c);
    return acc;
}

// Kronecker product of two column vectors: out[i*b.size()+j] = a[i]*b[j]
inline CVec kron(const CVec& a, const CVec& b) {
    CVec out;
    out.reserve(a.size() * b.size());
    for (const auto& ai : a)
        for (const auto& bj : b) out.push_back(ai * bj);
    return out;
}

}  // namespace uavris
