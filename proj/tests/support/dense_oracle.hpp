#pragma once

// Deliberately naive dense reference: its own basis enumeration (mode-major,
// unlike the engine), its own coordinate lookup and textbook Gaussian
// elimination. Used only to cross-check the sparse path at tiny cutoffs.

#include <functional>
#include <map>
#include <vector>

#include "twcoh/forms.hpp"

namespace oracle {

using twcoh::DifferentialForm;
using twcoh::FreqVector;
using twcoh::MultiIndex;
using twcoh::Scalar;
using twcoh::TrigPoly;

struct Dense {
    std::size_t rows = 0, cols = 0;
    std::vector<std::vector<Scalar>> a; // a[row][col]

    Dense(std::size_t r, std::size_t c) : rows(r), cols(c), a(r, std::vector<Scalar>(c)) {}
};

inline std::size_t rank(Dense m) {
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
        std::size_t p = r;
        while (p < m.rows && m.a[p][c].is_zero()) ++p;
        if (p == m.rows) continue;
        std::swap(m.a[p], m.a[r]);
        Scalar inv = m.a[r][c].inverse();
        for (std::size_t i = r + 1; i < m.rows; ++i) {
            if (m.a[i][c].is_zero()) continue;
            Scalar s = m.a[i][c] * inv;
            for (std::size_t k = c; k < m.cols; ++k) m.a[i][k] -= s * m.a[r][k];
        }
        ++r;
    }
    return r;
}

/// Columns side by side.
inline Dense hstack(const Dense& x, const Dense& y) {
    Dense out(x.rows, x.cols + y.cols);
    for (std::size_t i = 0; i < x.rows; ++i) {
        for (std::size_t j = 0; j < x.cols; ++j) out.a[i][j] = x.a[i][j];
        for (std::size_t j = 0; j < y.cols; ++j) out.a[i][x.cols + j] = y.a[i][j];
    }
    return out;
}

inline Dense product(const Dense& x, const Dense& y) {
    Dense out(x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t k = 0; k < x.cols; ++k)
            if (!x.a[i][k].is_zero())
                for (std::size_t j = 0; j < y.cols; ++j) out.a[i][j] += x.a[i][k] * y.a[k][j];
    return out;
}

/// Null space basis as columns, via reduced row echelon form.
inline Dense null_space(Dense m) {
    std::vector<std::size_t> pivot_cols;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
        std::size_t p = r;
        while (p < m.rows && m.a[p][c].is_zero()) ++p;
        if (p == m.rows) continue;
        std::swap(m.a[p], m.a[r]);
        Scalar inv = m.a[r][c].inverse();
        for (auto& x : m.a[r]) x *= inv;
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == r || m.a[i][c].is_zero()) continue;
            Scalar s = m.a[i][c];
            for (std::size_t k = 0; k < m.cols; ++k) m.a[i][k] -= s * m.a[r][k];
        }
        pivot_cols.push_back(c);
        ++r;
    }
    std::vector<bool> is_pivot(m.cols, false);
    for (auto c : pivot_cols) is_pivot[c] = true;
    Dense out(m.cols, m.cols - pivot_cols.size());
    std::size_t j = 0;
    for (std::size_t f = 0; f < m.cols; ++f) {
        if (is_pivot[f]) continue;
        out.a[f][j] = Scalar(1);
        for (std::size_t i = 0; i < pivot_cols.size(); ++i) out.a[pivot_cols[i]][j] = -m.a[i][f];
        ++j;
    }
    return out;
}

/// Full-cube basis of r-forms with |k_j| ≤ D_j, enumerated mode-major.
struct Cube {
    std::size_t n;
    std::vector<std::pair<FreqVector, MultiIndex>> elems;
    std::map<std::pair<std::vector<int>, MultiIndex>, std::size_t> where;

    Cube(std::size_t dim, int degree, const std::vector<int>& D) : Cube(dim, degree, negate(D), D) {}

    /// Box lo_j ≤ k_j ≤ hi_j; lo = hi pins an axis (one fiber of a conserved frequency).
    Cube(std::size_t dim, int degree, const std::vector<int>& lo, const std::vector<int>& hi) : n(dim) {
        std::vector<MultiIndex> idx;
        for (unsigned mask = 0; mask < (1U << dim); ++mask) {
            MultiIndex I;
            for (std::size_t j = 0; j < dim; ++j)
                if (mask & (1U << j)) I.push_back(static_cast<int>(j));
            if (static_cast<int>(I.size()) == degree) idx.push_back(I);
        }
        bool empty = false;
        for (std::size_t j = 0; j < dim; ++j) empty = empty || lo[j] > hi[j];
        if (empty) return;
        std::vector<int> k = lo;
        while (true) {
            for (const auto& I : idx) {
                where[{k, I}] = elems.size();
                elems.emplace_back(FreqVector(k), I);
            }
            std::size_t j = 0;
            while (j < dim && k[j] == hi[j]) k[j] = lo[j], ++j;
            if (j == dim) break;
            ++k[j];
        }
    }
    static std::vector<int> negate(std::vector<int> v) {
        for (int& x : v) x = -x;
        return v;
    }
    std::size_t size() const { return elems.size(); }
    DifferentialForm element(std::size_t p) const {
        return DifferentialForm::basis(n, elems[p].second, TrigPoly::monomial(elems[p].first));
    }
};

using FormOp = std::function<DifferentialForm(const DifferentialForm&)>;

/// Dense matrix of `op` from `src` to `dst`; returns false in `fits` if an image escapes `dst`.
inline Dense matrix(const FormOp& op, const Cube& src, const Cube& dst, bool* fits = nullptr) {
    Dense m(dst.size(), src.size());
    if (fits) *fits = true;
    for (std::size_t j = 0; j < src.size(); ++j) {
        DifferentialForm img = op(src.element(j));
        for (const auto& [I, c] : img.components())
            for (const auto& [k, v] : c.terms()) {
                auto it = dst.where.find({k.k, I});
                if (it == dst.where.end()) {
                    if (fits) *fits = false;
                    continue;
                }
                m.a[it->second][j] += v;
            }
    }
    return m;
}

struct Strand {
    std::size_t kernel = 0, incoming_rank = 0, quotient_by = 0;
    long dim = 0;
};

inline std::vector<int> shift(std::vector<int> D, const std::vector<int>& w, int sign) {
    for (std::size_t j = 0; j < D.size(); ++j) D[j] += sign * w[j];
    return D;
}

/// ker(op on (r, D) → (r+1, D+w)) modulo the part of im(op from (r−1, D−w)) lying in it.
inline Strand strand(const FormOp& op, std::size_t n, int r, const std::vector<int>& D, const std::vector<int>& w) {
    Cube here(n, r, D), up(n, r + 1, shift(D, w, 1)), down(n, r - 1, shift(D, w, -1));
    Dense out = matrix(op, here, up), in = matrix(op, down, here);
    Dense K = null_space(out);
    Strand s;
    s.kernel = K.cols;
    s.incoming_rank = rank(in);
    s.quotient_by = s.incoming_rank + s.kernel - rank(hstack(K, in));
    s.dim = static_cast<long>(s.kernel) - static_cast<long>(s.quotient_by);
    return s;
}

// --- direct sums and conserved-frequency fibers ----------------------------

/// One summand: forms of `degree` on T^dim with |k_j| ≤ D_j.
struct BlockSpec {
    std::size_t dim;
    int degree;
    std::vector<int> D;
};

/// Axes whose frequency no operator changes, pinned to `value` (same length as `axes`).
struct Fiber {
    std::vector<std::size_t> axes;
    std::vector<int> value;
};

/// ⊕ of cubes, each optionally cut down to a fiber. A fiber only applies to
/// blocks living on the torus the axes refer to (`fiber_dim`).
struct Sum {
    std::vector<Cube> cubes;
    std::vector<int> degrees;
    std::vector<std::size_t> offset;
    std::size_t total = 0;

    Sum(const std::vector<BlockSpec>& specs, const Fiber& fiber = {}, std::size_t fiber_dim = 0) {
        for (const auto& b : specs) {
            std::vector<int> lo = Cube::negate(b.D), hi = b.D;
            if (b.dim == fiber_dim)
                for (std::size_t a = 0; a < fiber.axes.size(); ++a) {
                    std::size_t ax = fiber.axes[a];
                    int v = fiber.value[a];
                    if (v < lo[ax] || v > hi[ax]) lo[ax] = 1, hi[ax] = 0; // fiber outside this box: empty
                    else lo[ax] = hi[ax] = v;
                }
            bool usable = b.degree >= 0 && b.degree <= static_cast<int>(b.dim);
            cubes.emplace_back(b.dim, usable ? b.degree : -1, lo, hi);
            degrees.push_back(b.degree);
            offset.push_back(total);
            total += cubes.back().size();
        }
    }
    std::vector<DifferentialForm> zero() const {
        std::vector<DifferentialForm> out;
        for (std::size_t b = 0; b < cubes.size(); ++b) out.emplace_back(cubes[b].n, std::max(degrees[b], 0));
        return out;
    }
    std::vector<DifferentialForm> element(std::size_t p) const {
        std::size_t b = 0;
        while (b + 1 < cubes.size() && p >= offset[b + 1]) ++b;
        auto out = zero();
        out[b] = cubes[b].element(p - offset[b]);
        return out;
    }
};

using CochainOp = std::function<std::vector<DifferentialForm>(const std::vector<DifferentialForm>&)>;

/// Dense matrix of `op`; `escaped` counts image terms with no slot in `dst`.
inline Dense matrix(const CochainOp& op, const Sum& src, const Sum& dst, std::size_t* escaped) {
    Dense m(dst.total, src.total);
    for (std::size_t j = 0; j < src.total; ++j) {
        auto img = op(src.element(j));
        for (std::size_t b = 0; b < img.size() && b < dst.cubes.size(); ++b)
            for (const auto& [I, c] : img[b].components())
                for (const auto& [k, v] : c.terms()) {
                    auto it = dst.cubes[b].where.find({k.k, I});
                    if (it == dst.cubes[b].where.end()) {
                        ++*escaped;
                        continue;
                    }
                    m.a[dst.offset[b] + it->second][j] += v;
                }
    }
    return m;
}

using LayoutFn = std::function<std::vector<BlockSpec>(int r, const std::vector<int>& D)>;

struct Totals {
    std::size_t kernel = 0, incoming_rank = 0, quotient_by = 0;
    std::size_t escaped = 0; // non-zero means a fiber was not invariant: the split is invalid
    bool covered = true;     // fibers partition the full space
};

/// strand() on a direct sum, summed over fibers of the conserved axes.
inline Totals fibered_strand(const CochainOp& op, const LayoutFn& layout, int r, const std::vector<int>& D,
                             const std::vector<int>& w, const std::vector<Fiber>& fibers, std::size_t fiber_dim) {
    Totals t;
    std::size_t seen = 0;
    for (const auto& fb : fibers) {
        Sum here(layout(r, D), fb, fiber_dim), up(layout(r + 1, shift(D, w, 1)), fb, fiber_dim),
            down(layout(r - 1, shift(D, w, -1)), fb, fiber_dim);
        Dense out = matrix(op, here, up, &t.escaped), in = matrix(op, down, here, &t.escaped);
        Dense K = null_space(out);
        std::size_t inc = rank(in);
        t.kernel += K.cols;
        t.incoming_rank += inc;
        t.quotient_by += inc + K.cols - rank(hstack(K, in));
        seen += here.total;
    }
    t.covered = seen == Sum(layout(r, D)).total;
    return t;
}

/// Rank of the map induced by `c` from ker(d_src) at D into (target at D + w_c + w_tgt) / im(d_tgt).
inline std::size_t fibered_induced_rank(const FormOp& d_src, const FormOp& d_tgt, const FormOp& c, std::size_t n, int r_src,
                                        int r_tgt, const std::vector<int>& D, const std::vector<int>& w_src,
                                        const std::vector<int>& w_c, const std::vector<int>& w_tgt,
                                        const std::vector<Fiber>& fibers, std::size_t* escaped) {
    std::size_t total = 0;
    auto lift = [](const FormOp& f) { return CochainOp([f](const std::vector<DifferentialForm>& x) {
        return std::vector<DifferentialForm>{f(x.at(0))}; }); };
    std::vector<int> Dm = shift(D, w_c, 1), Dt = shift(Dm, w_tgt, 1);
    for (const auto& fb : fibers) {
        Sum here({{n, r_src, D}}, fb, n), up({{n, r_src + 1, shift(D, w_src, 1)}}, fb, n);
        Sum ambient({{n, r_tgt, Dt}}, fb, n), below({{n, r_tgt - 1, Dm}}, fb, n);
        Dense K = null_space(matrix(lift(d_src), here, up, escaped));
        Dense image = product(matrix(lift(c), here, ambient, escaped), K);
        Dense bounds = matrix(lift(d_tgt), below, ambient, escaped);
        total += rank(hstack(image, bounds)) - rank(bounds);
    }
    return total;
}

/// Every value of the pinned axes with |k| ≤ reach; no axes gives the single trivial fiber.
inline std::vector<Fiber> fibers(const std::vector<std::size_t>& axes, int reach) {
    std::vector<Fiber> out;
    std::vector<int> v(axes.size(), -reach);
    while (true) {
        out.push_back({axes, v});
        std::size_t j = 0;
        while (j < v.size() && v[j] == reach) v[j] = -reach, ++j;
        if (j == v.size()) break;
        ++v[j];
    }
    return out;
}

} // namespace oracle
