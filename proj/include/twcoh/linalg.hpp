#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "scalar.hpp"

namespace twcoh {

/// Sparse exact vector: entries sorted by index, no zeros stored.
class SparseVector {
public:
    using Entry = std::pair<std::size_t, Scalar>;

    SparseVector() = default;

    /// Builds from unsorted entries, summing duplicates.
    static SparseVector from_entries(std::vector<Entry> entries) {
        std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
        SparseVector v;
        for (auto& [i, x] : entries) {
            if (!v.data_.empty() && v.data_.back().first == i)
                v.data_.back().second += x;
            else
                v.data_.emplace_back(i, std::move(x));
            if (v.data_.back().second.is_zero()) v.data_.pop_back();
        }
        return v;
    }

    const std::vector<Entry>& entries() const noexcept { return data_; }
    bool empty() const noexcept { return data_.empty(); }
    std::size_t nnz() const noexcept { return data_.size(); }
    std::size_t lead() const { return data_.front().first; }
    const Scalar& lead_value() const { return data_.front().second; }

    Scalar at(std::size_t i) const {
        auto it = std::lower_bound(data_.begin(), data_.end(), i, [](const Entry& e, std::size_t k) { return e.first < k; });
        return (it != data_.end() && it->first == i) ? it->second : Scalar();
    }

    /// this += s · other
    void axpy(const Scalar& s, const SparseVector& other) {
        if (s.is_zero() || other.empty()) return;
        std::vector<Entry> out;
        out.reserve(data_.size() + other.data_.size());
        auto a = data_.begin();
        auto b = other.data_.begin();
        while (a != data_.end() || b != other.data_.end()) {
            if (b == other.data_.end() || (a != data_.end() && a->first < b->first)) {
                out.push_back(std::move(*a++));
            } else if (a == data_.end() || b->first < a->first) {
                out.emplace_back(b->first, Scalar());
                out.back().second.add_product(s, b->second);
                ++b;
            } else {
                a->second.add_product(s, b->second);
                if (!a->second.is_zero()) out.push_back(std::move(*a));
                ++a;
                ++b;
            }
        }
        data_ = std::move(out);
    }

    void scale(const Scalar& s) {
        if (s.is_zero()) {
            data_.clear();
            return;
        }
        for (auto& e : data_) e.second *= s;
    }

    friend bool operator==(const SparseVector&, const SparseVector&) = default;

private:
    std::vector<Entry> data_;
};

/// Exact sparse matrix stored by columns.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), columns_(cols) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return columns_.size(); }
    const SparseVector& column(std::size_t j) const { return columns_[j]; }
    const std::vector<SparseVector>& columns() const noexcept { return columns_; }

    void set_column(std::size_t j, SparseVector v) {
        if (!v.empty() && v.entries().back().first >= rows_) throw AssemblyError("column entry outside row range");
        columns_[j] = std::move(v);
    }

    std::size_t nnz() const {
        std::size_t n = 0;
        for (const auto& c : columns_) n += c.nnz();
        return n;
    }
    bool is_zero() const { return nnz() == 0; }

    Scalar at(std::size_t i, std::size_t j) const { return columns_[j].at(i); }

    SparseVector apply(const SparseVector& x) const {
        SparseVector out;
        for (const auto& [j, v] : x.entries()) out.axpy(v, columns_[j]);
        return out;
    }

    /// this · other
    SparseMatrix multiply(const SparseMatrix& other) const {
        if (other.rows() != cols()) throw DimensionMismatch("matrix product shape mismatch");
        SparseMatrix out(rows_, other.cols());
        for (std::size_t j = 0; j < other.cols(); ++j) out.columns_[j] = apply(other.column(j));
        return out;
    }

    /// Rows as sparse vectors over column indices.
    std::vector<SparseVector> row_vectors() const {
        std::vector<std::vector<SparseVector::Entry>> rows(rows_);
        for (std::size_t j = 0; j < columns_.size(); ++j)
            for (const auto& [i, v] : columns_[j].entries()) rows[i].emplace_back(j, v);
        std::vector<SparseVector> out;
        out.reserve(rows_);
        for (auto& r : rows) out.push_back(SparseVector::from_entries(std::move(r)));
        return out;
    }

    friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::vector<SparseVector> columns_;
};

/// Incremental row echelon form over the Gaussian rationals. Pivot rows are
/// normalized so their leading entry is 1; each new vector is reduced only
/// at its leading position until it either vanishes or claims a new pivot.
class Echelon {
public:
    /// Returns true when `v` was independent of the rows inserted so far.
    bool insert(SparseVector v) {
        while (!v.empty()) {
            auto it = pivots_.find(v.lead());
            if (it == pivots_.end()) {
                v.scale(v.lead_value().inverse());
                pivots_.emplace(v.lead(), std::move(v));
                return true;
            }
            v.axpy(-v.lead_value(), it->second);
        }
        return false;
    }

    std::size_t rank() const noexcept { return pivots_.size(); }
    const std::map<std::size_t, SparseVector>& pivots() const noexcept { return pivots_; }

    /// Brings the stored rows to reduced row echelon form.
    void reduce_fully() {
        for (auto it = pivots_.rbegin(); it != pivots_.rend(); ++it) {
            SparseVector& row = it->second;
            // Entries beyond the lead that sit on other pivot columns.
            std::vector<std::pair<std::size_t, Scalar>> hits;
            for (const auto& [c, x] : row.entries())
                if (c != it->first && pivots_.count(c)) hits.emplace_back(c, x);
            for (const auto& [c, x] : hits) {
                Scalar coeff = row.at(c);
                if (!coeff.is_zero()) row.axpy(-coeff, pivots_.at(c));
            }
        }
    }

private:
    std::map<std::size_t, SparseVector> pivots_;
};

namespace detail {

struct DisjointSets {
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    std::vector<std::size_t> parent;
};

/// Groups vectors whose supports are connected through shared coordinates.
inline std::vector<std::vector<std::size_t>> connected_groups(const std::vector<SparseVector>& vectors,
                                                             std::size_t ambient) {
    DisjointSets sets(ambient);
    for (const auto& v : vectors)
        for (std::size_t k = 1; k < v.nnz(); ++k) sets.unite(v.entries()[0].first, v.entries()[k].first);
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t idx = 0; idx < vectors.size(); ++idx)
        if (!vectors[idx].empty()) groups[sets.find(vectors[idx].lead())].push_back(idx);
    std::vector<std::vector<std::size_t>> out;
    out.reserve(groups.size());
    for (auto& [root, members] : groups) out.push_back(std::move(members));
    return out;
}

inline std::size_t ambient_of(const std::vector<SparseVector>& vectors) {
    std::size_t n = 0;
    for (const auto& v : vectors)
        if (!v.empty()) n = std::max(n, v.entries().back().first + 1);
    return n;
}

} // namespace detail

/// Dimension of the span of `vectors`. Independent coordinate blocks are
/// eliminated separately; inside a block, sparser vectors go first.
inline std::size_t span_rank(const std::vector<SparseVector>& vectors) {
    std::size_t total = 0;
    for (auto& group : detail::connected_groups(vectors, detail::ambient_of(vectors))) {
        std::stable_sort(group.begin(), group.end(),
                         [&](std::size_t a, std::size_t b) { return vectors[a].nnz() < vectors[b].nnz(); });
        Echelon ech;
        for (std::size_t idx : group) ech.insert(vectors[idx]);
        total += ech.rank();
    }
    return total;
}

inline std::size_t exact_rank(const SparseMatrix& m) { return span_rank(m.columns()); }

/// dim span(base ∪ extra) − dim span(base), in one elimination pass: per
/// coordinate block the base vectors go in first and only the extra vectors
/// that still claim a pivot are counted.
inline std::size_t relative_rank(const std::vector<SparseVector>& base, const std::vector<SparseVector>& extra) {
    std::vector<SparseVector> all = base;
    all.insert(all.end(), extra.begin(), extra.end());
    std::size_t total = 0;
    for (auto& group : detail::connected_groups(all, detail::ambient_of(all))) {
        std::stable_sort(group.begin(), group.end(), [&](std::size_t a, std::size_t b) {
            bool ea = a >= base.size(), eb = b >= base.size();
            if (ea != eb) return !ea;
            return all[a].nnz() < all[b].nnz();
        });
        Echelon ech;
        for (std::size_t idx : group) {
            bool fresh = ech.insert(all[idx]);
            if (fresh && idx >= base.size()) ++total;
        }
    }
    return total;
}

/// Basis of {x : M x = 0}: one vector per free column of the reduced row
/// echelon form, so the vectors are independent and span the kernel.
inline std::vector<SparseVector> kernel_basis(const SparseMatrix& m) {
    std::vector<SparseVector> rows = m.row_vectors();
    std::vector<bool> touched(m.cols(), false);
    for (const auto& r : rows)
        for (const auto& [c, x] : r.entries()) touched[c] = true;

    std::vector<SparseVector> out;
    std::vector<std::pair<std::size_t, SparseVector>> keyed;
    for (std::size_t c = 0; c < m.cols(); ++c)
        if (!touched[c]) keyed.emplace_back(c, SparseVector::from_entries({{c, Scalar(1)}}));

    for (auto& group : detail::connected_groups(rows, m.cols())) {
        std::stable_sort(group.begin(), group.end(),
                         [&](std::size_t a, std::size_t b) { return rows[a].nnz() < rows[b].nnz(); });
        Echelon ech;
        std::vector<std::size_t> columns;
        for (std::size_t idx : group) {
            for (const auto& [c, x] : rows[idx].entries()) columns.push_back(c);
            ech.insert(rows[idx]);
        }
        ech.reduce_fully();
        std::sort(columns.begin(), columns.end());
        columns.erase(std::unique(columns.begin(), columns.end()), columns.end());
        const auto& piv = ech.pivots();
        // For a free column f: x_f = 1, x_p = −R[p][f] for each pivot row p.
        std::map<std::size_t, std::vector<SparseVector::Entry>> free_vectors;
        for (std::size_t c : columns)
            if (!piv.count(c)) free_vectors[c].emplace_back(c, Scalar(1));
        for (const auto& [p, row] : piv)
            for (const auto& [c, x] : row.entries())
                if (c != p) free_vectors.at(c).emplace_back(p, -x);
        for (auto& [c, entries] : free_vectors) keyed.emplace_back(c, SparseVector::from_entries(std::move(entries)));
    }
    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    out.reserve(keyed.size());
    for (auto& [c, v] : keyed) out.push_back(std::move(v));
    return out;
}

} // namespace twcoh
