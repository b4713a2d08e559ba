#ifndef BOWTIE_SMITH_HPP
#define BOWTIE_SMITH_HPP

#include <cstdint>
#include <cstdlib>
#include <vector>

namespace bowtie {

/// Dense integer matrix with row-major storage, just big enough for the
/// Smith-normal-form computations in the cohomology solver.
struct IntMatrix {
    int rows = 0, cols = 0;
    std::vector<std::int64_t> a;

    IntMatrix() = default;
    IntMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0) {}

    std::int64_t& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    std::int64_t at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

    static IntMatrix identity(int n) {
        IntMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }
};

struct SmithForm {
    IntMatrix s;  // diagonal
    IntMatrix u;  // unimodular, u * a * v = s
    IntMatrix v;
    int rank = 0;
};

/// Diagonal form over Z (Smith-style elimination without the divisibility
/// chain; solvability mod 1 only needs U, V unimodular and S diagonal).
/// The input matrices here have entries in {-1,0,1,2}, so 64-bit
/// intermediates are plenty at desk scale.
inline SmithForm smith_normal_form(IntMatrix a) {
    SmithForm f;
    f.u = IntMatrix::identity(a.rows);
    f.v = IntMatrix::identity(a.cols);

    auto swap_rows = [&](int i, int j) {
        for (int c = 0; c < a.cols; ++c) std::swap(a.at(i, c), a.at(j, c));
        for (int c = 0; c < f.u.cols; ++c) std::swap(f.u.at(i, c), f.u.at(j, c));
    };
    auto swap_cols = [&](int i, int j) {
        for (int r = 0; r < a.rows; ++r) std::swap(a.at(r, i), a.at(r, j));
        for (int r = 0; r < f.v.rows; ++r) std::swap(f.v.at(r, i), f.v.at(r, j));
    };
    auto add_row = [&](int dst, int src, std::int64_t m) {  // row dst += m * row src
        for (int c = 0; c < a.cols; ++c) a.at(dst, c) += m * a.at(src, c);
        for (int c = 0; c < f.u.cols; ++c) f.u.at(dst, c) += m * f.u.at(src, c);
    };
    auto add_col = [&](int dst, int src, std::int64_t m) {
        for (int r = 0; r < a.rows; ++r) a.at(r, dst) += m * a.at(r, src);
        for (int r = 0; r < f.v.rows; ++r) f.v.at(r, dst) += m * f.v.at(r, src);
    };
    auto negate_row = [&](int i) {
        for (int c = 0; c < a.cols; ++c) a.at(i, c) = -a.at(i, c);
        for (int c = 0; c < f.u.cols; ++c) f.u.at(i, c) = -f.u.at(i, c);
    };

    int t = 0;
    while (t < a.rows && t < a.cols) {
        // find a pivot with minimal absolute value in the trailing block
        int pi = -1, pj = -1;
        std::int64_t best = 0;
        for (int i = t; i < a.rows; ++i)
            for (int j = t; j < a.cols; ++j) {
                const std::int64_t v = std::abs(a.at(i, j));
                if (v != 0 && (pi < 0 || v < best)) {
                    best = v;
                    pi = i;
                    pj = j;
                }
            }
        if (pi < 0) break;  // trailing block is zero
        swap_rows(t, pi);
        swap_cols(t, pj);

        bool clean = false;
        while (!clean) {
            clean = true;
            for (int i = t + 1; i < a.rows; ++i) {
                if (a.at(i, t) == 0) continue;
                const std::int64_t q = a.at(i, t) / a.at(t, t);
                add_row(i, t, -q);
                if (a.at(i, t) != 0) {  // remainder smaller than pivot; rotate up
                    swap_rows(t, i);
                    clean = false;
                }
            }
            for (int j = t + 1; j < a.cols; ++j) {
                if (a.at(t, j) == 0) continue;
                const std::int64_t q = a.at(t, j) / a.at(t, t);
                add_col(j, t, -q);
                if (a.at(t, j) != 0) {
                    swap_cols(t, j);
                    clean = false;
                }
            }
        }
        if (a.at(t, t) < 0) negate_row(t);
        ++t;
    }
    f.rank = t;
    f.s = std::move(a);
    return f;
}

}  // namespace bowtie

#endif
