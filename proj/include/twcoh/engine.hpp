#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <tuple>
#include <variant>
#include <vector>

#include "bidegree.hpp"
#include "linalg.hpp"
#include "twisted_ops.hpp"

namespace twcoh {

/// Per-axis frequency cutoff |k_j| ≤ c_j. A negative entry means "empty".
using Cutoff = std::vector<int>;

inline Cutoff uniform_cutoff(std::size_t dim, int D) { return Cutoff(dim, D); }
inline Cutoff operator+(Cutoff a, const Cutoff& b) {
    for (std::size_t j = 0; j < a.size(); ++j) a[j] += b[j];
    return a;
}
inline Cutoff operator-(Cutoff a, const Cutoff& b) {
    for (std::size_t j = 0; j < a.size(); ++j) a[j] -= b[j];
    return a;
}
inline Cutoff cutoff_max(Cutoff a, const Cutoff& b) {
    for (std::size_t j = 0; j < a.size(); ++j) a[j] = std::max(a[j], b[j]);
    return a;
}
inline std::string to_string(const Cutoff& c) {
    std::string out = "(";
    for (std::size_t j = 0; j < c.size(); ++j) out += (j ? "," : "") + std::to_string(c[j]);
    return out + ")";
}

/// Ordered basis {e^{i<k,t>} dt_I : |k_j| ≤ cutoff_j, |I| = degree}, ordered
/// lexicographically by (I, k). With `holomorphic` set, the forms are in the
/// dz/dz̄ frame and only multi-indices of bidegree (p, degree − p) are kept.
class BasisSpec {
public:
    BasisSpec(std::size_t dim, int degree, Cutoff cutoff, std::optional<int> holomorphic = std::nullopt)
        : dim_(dim), degree_(degree), cutoff_(std::move(cutoff)), holomorphic_(holomorphic) {
        if (cutoff_.size() != dim_) throw DimensionMismatch("cutoff vector length differs from torus dimension");
        if (holomorphic_) detail::require_even(dim_);
        enumerate_indices();
        modes_ = 1;
        radix_.assign(dim_, 1);
        for (std::size_t j = dim_; j-- > 0;) {
            if (cutoff_[j] < 0) {
                modes_ = 0;
                break;
            }
            radix_[j] = modes_;
            modes_ *= static_cast<std::size_t>(2 * cutoff_[j] + 1);
        }
    }
    static BasisSpec uniform(std::size_t dim, int degree, int D) { return {dim, degree, uniform_cutoff(dim, D)}; }

    std::size_t dim() const noexcept { return dim_; }
    int degree() const noexcept { return degree_; }
    const Cutoff& cutoff() const noexcept { return cutoff_; }
    std::optional<int> holomorphic() const noexcept { return holomorphic_; }
    const std::vector<MultiIndex>& indices() const noexcept { return indices_; }
    std::size_t modes() const noexcept { return modes_; }
    std::size_t size() const noexcept { return modes_ * indices_.size(); }

    std::optional<std::size_t> position(const MultiIndex& I, const FreqVector& k) const {
        auto it = index_pos_.find(I);
        if (it == index_pos_.end() || modes_ == 0) return std::nullopt;
        std::size_t m = 0;
        for (std::size_t j = 0; j < dim_; ++j) {
            if (std::abs(k[j]) > cutoff_[j]) return std::nullopt;
            m += static_cast<std::size_t>(k[j] + cutoff_[j]) * radix_[j];
        }
        return it->second * modes_ + m;
    }

    FreqVector mode(std::size_t m) const {
        FreqVector k(dim_);
        for (std::size_t j = 0; j < dim_; ++j) {
            k[j] = static_cast<int>(m / radix_[j]) - cutoff_[j];
            m %= radix_[j];
        }
        return k;
    }

    DifferentialForm element(std::size_t pos) const {
        return DifferentialForm::basis(dim_, indices_[pos / modes_], TrigPoly::monomial(mode(pos % modes_)));
    }

    std::string describe(std::size_t pos) const {
        std::ostringstream os;
        os << "e^{i(";
        FreqVector k = mode(pos % modes_);
        for (std::size_t j = 0; j < dim_; ++j) os << (j ? "," : "") << k[j];
        os << ")t}";
        for (int j : indices_[pos / modes_]) os << (holomorphic_ ? (j % 2 ? " dzbar" : " dz") : " dt") << (holomorphic_ ? j / 2 + 1 : j + 1);
        return os.str();
    }

private:
    void enumerate_indices() {
        if (degree_ < 0 || degree_ > static_cast<int>(dim_)) return;
        MultiIndex I(static_cast<std::size_t>(degree_));
        std::function<void(std::size_t, int)> rec = [&](std::size_t slot, int start) {
            if (slot == I.size()) {
                if (!holomorphic_ || detail::holomorphic_count(I) == *holomorphic_) {
                    index_pos_.emplace(I, indices_.size());
                    indices_.push_back(I);
                }
                return;
            }
            for (int j = start; j < static_cast<int>(dim_); ++j) {
                I[slot] = j;
                rec(slot + 1, j + 1);
            }
        };
        rec(0, 0);
    }

    std::size_t dim_;
    int degree_;
    Cutoff cutoff_;
    std::optional<int> holomorphic_;
    std::vector<MultiIndex> indices_;
    std::map<MultiIndex, std::size_t> index_pos_;
    std::vector<std::size_t> radix_;
    std::size_t modes_ = 0;
};

/// An element of a direct sum of form spaces, one form per summand.
using Cochain = std::vector<DifferentialForm>;

/// Direct sum of truncated bases; coordinates are concatenated block by block.
class Layout {
public:
    Layout() = default;
    explicit Layout(std::vector<BasisSpec> blocks) : blocks_(std::move(blocks)) {
        std::size_t off = 0;
        for (const auto& b : blocks_) {
            offsets_.push_back(off);
            off += b.size();
        }
        size_ = off;
    }
    Layout(BasisSpec single) : Layout(std::vector<BasisSpec>{std::move(single)}) {} // NOLINT

    const std::vector<BasisSpec>& blocks() const noexcept { return blocks_; }
    std::size_t size() const noexcept { return size_; }

    Cochain zero() const {
        Cochain out;
        for (const auto& b : blocks_) out.emplace_back(b.dim(), std::max(b.degree(), 0));
        return out;
    }

    Cochain element(std::size_t pos) const {
        Cochain out = zero();
        auto [b, local] = locate(pos);
        out[b] = blocks_[b].element(local);
        return out;
    }

    std::string describe(std::size_t pos) const {
        auto [b, local] = locate(pos);
        return "block " + std::to_string(b) + ": " + blocks_[b].describe(local);
    }

    /// Coordinates of `x`; nullopt names the first term that has no basis slot.
    std::variant<SparseVector, std::string> try_coordinates(const Cochain& x) const {
        if (x.size() != blocks_.size()) return std::string("cochain has the wrong number of summands");
        std::vector<SparseVector::Entry> entries;
        for (std::size_t b = 0; b < blocks_.size(); ++b) {
            const auto& spec = blocks_[b];
            if (x[b].dim() != spec.dim() || (x[b].degree() != spec.degree() && !x[b].is_zero()))
                return "summand " + std::to_string(b) + " has the wrong shape";
            for (const auto& [I, c] : x[b].components())
                for (const auto& [k, v] : c.terms()) {
                    auto pos = spec.position(I, k);
                    if (!pos) {
                        std::ostringstream os;
                        os << "term " << v << "·e^{i(";
                        for (std::size_t j = 0; j < k.dim(); ++j) os << (j ? "," : "") << k[j];
                        os << ")t} on index (";
                        for (std::size_t j = 0; j < I.size(); ++j) os << (j ? "," : "") << I[j] + 1;
                        os << ") of summand " << b << " lies outside cutoff " << to_string(spec.cutoff());
                        return os.str();
                    }
                    entries.emplace_back(offsets_[b] + *pos, v);
                }
        }
        return SparseVector::from_entries(std::move(entries));
    }

    SparseVector coordinates(const Cochain& x) const {
        auto r = try_coordinates(x);
        if (auto* msg = std::get_if<std::string>(&r)) throw AssemblyError(*msg);
        return std::get<SparseVector>(std::move(r));
    }

    Cochain from_coordinates(const SparseVector& v) const {
        Cochain out = zero();
        for (const auto& [pos, x] : v.entries()) {
            auto [b, local] = locate(pos);
            out[b] += x * blocks_[b].element(local);
        }
        return out;
    }

private:
    std::pair<std::size_t, std::size_t> locate(std::size_t pos) const {
        std::size_t b = static_cast<std::size_t>(std::upper_bound(offsets_.begin(), offsets_.end(), pos) - offsets_.begin()) - 1;
        while (blocks_[b].size() == 0) ++b;
        return {b, pos - offsets_[b]};
    }

    std::vector<BasisSpec> blocks_;
    std::vector<std::size_t> offsets_;
    std::size_t size_ = 0;
};

using LinearOp = std::function<Cochain(const Cochain&)>;

/// Exact matrix of a linear operator between two truncated layouts.
struct OperatorMatrix {
    std::string name;
    Layout source;
    Layout target;
    SparseMatrix entries;
};

/// Column j holds the target coordinates of op(source basis element j).
inline OperatorMatrix assemble(const std::string& name, const LinearOp& op, const Layout& source, const Layout& target) {
    OperatorMatrix out{name, source, target, SparseMatrix(target.size(), source.size())};
    for (std::size_t j = 0; j < source.size(); ++j) {
        auto coords = target.try_coordinates(op(source.element(j)));
        if (auto* msg = std::get_if<std::string>(&coords))
            throw AssemblyError(name + " applied to basis element " + std::to_string(j) + " [" + source.describe(j) +
                                "]: " + *msg);
        out.entries.set_column(j, std::get<SparseVector>(std::move(coords)));
    }
    return out;
}

// --- wedge symbols ----------------------------------------------------------

/// Operators that act on a monomial e^{i<k,t>} dt_I as
///   e^{i<k,t>} dt_I ↦ e^{i<k,t>} (g · i<k,dt> + c) ∧ dt_I
/// with a fixed function g and a fixed form c. Every twisted differential
/// on r-forms, and every constant wedge, has this shape; assembling from the
/// symbol skips the symbolic form arithmetic of the generic path.
struct WedgeSymbol {
    int shift = 1;          // degree raise; the derivative part needs shift 1
    TrigPoly derivative;    // g; zero when the operator has no derivative part
    DifferentialForm constant;

    static WedgeSymbol constant_wedge(DifferentialForm c) {
        int deg = c.degree();
        TrigPoly zero(c.dim());
        return {deg, std::move(zero), std::move(c)};
    }
    WedgeSymbol negated() const { return {shift, Scalar(-1) * derivative, Scalar(-1) * constant}; }
};

/// (target block, source block, symbol) entries of a block operator.
struct BlockSymbol {
    std::vector<std::tuple<std::size_t, std::size_t, WedgeSymbol>> entries;
};

namespace detail {

struct SymbolTerm {
    std::size_t target_index; // index position in the target block
    FreqVector shift;
    Scalar value;    // multiplied by i·k_axis when `axis` is set
    int axis = -1;
};

/// Precomputes, for every source multi-index, the target slots it can reach.
inline std::vector<std::vector<SymbolTerm>> symbol_terms(const WedgeSymbol& sym, const BasisSpec& src, const BasisSpec& tgt) {
    std::vector<std::vector<SymbolTerm>> out(src.indices().size());
    std::map<MultiIndex, std::size_t> where;
    for (std::size_t q = 0; q < tgt.indices().size(); ++q) where.emplace(tgt.indices()[q], q);
    auto slot = [&](const MultiIndex& J) -> std::optional<std::size_t> {
        auto it = where.find(J);
        if (it == where.end()) return std::nullopt;
        return it->second;
    };
    for (std::size_t p = 0; p < src.indices().size(); ++p) {
        const MultiIndex& I = src.indices()[p];
        if (!sym.derivative.is_zero())
            for (std::size_t j = 0; j < src.dim(); ++j) {
                auto merged = merge_indices(MultiIndex{static_cast<int>(j)}, I);
                if (!merged) continue;
                auto q = slot(merged->second);
                if (!q) throw AssemblyError("symbol reaches a multi-index outside the target block");
                for (const auto& [a, c] : sym.derivative.terms())
                    out[p].push_back({*q, a, Scalar(merged->first) * Scalar::i() * c, static_cast<int>(j)});
            }
        for (const auto& [J, cj] : sym.constant.components()) {
            auto merged = merge_indices(J, I);
            if (!merged) continue;
            auto q = slot(merged->second);
            if (!q) throw AssemblyError("symbol reaches a multi-index outside the target block");
            for (const auto& [b, c] : cj.terms()) out[p].push_back({*q, b, Scalar(merged->first) * c, -1});
        }
    }
    return out;
}

} // namespace detail

/// Same matrix as the generic assemble() for an operator with this block symbol.
inline OperatorMatrix assemble_symbol(const std::string& name, const BlockSymbol& symbol, const Layout& source,
                                      const Layout& target) {
    std::vector<std::size_t> src_off, tgt_off;
    for (std::size_t b = 0, off = 0; b < source.blocks().size(); off += source.blocks()[b].size(), ++b) src_off.push_back(off);
    for (std::size_t b = 0, off = 0; b < target.blocks().size(); off += target.blocks()[b].size(), ++b) tgt_off.push_back(off);
    std::vector<std::vector<SparseVector::Entry>> columns(source.size());
    for (const auto& [tb, sb, sym] : symbol.entries) {
        const BasisSpec& src = source.blocks().at(sb);
        const BasisSpec& tgt = target.blocks().at(tb);
        if (src.size() == 0) continue;
        if (tgt.degree() != src.degree() + sym.shift) throw AssemblyError(name + ": symbol degree shift does not match the layouts");
        auto terms = detail::symbol_terms(sym, src, tgt);
        for (std::size_t pos = 0; pos < src.size(); ++pos) {
            std::size_t p = pos / src.modes();
            FreqVector k = src.mode(pos % src.modes());
            auto& col = columns[src_off[sb] + pos];
            for (const auto& t : terms[p]) {
                if (t.axis >= 0 && k[static_cast<std::size_t>(t.axis)] == 0) continue;
                FreqVector kk = k + t.shift;
                auto where = tgt.position(tgt.indices()[t.target_index], kk);
                if (!where) {
                    std::ostringstream os;
                    os << name << " applied to basis element " << src_off[sb] + pos << " [" << source.describe(src_off[sb] + pos)
                       << "]: term on index (";
                    for (std::size_t j = 0; j < tgt.indices()[t.target_index].size(); ++j)
                        os << (j ? "," : "") << tgt.indices()[t.target_index][j] + 1;
                    os << ") at frequency (";
                    for (std::size_t j = 0; j < kk.dim(); ++j) os << (j ? "," : "") << kk[j];
                    os << ") of summand " << tb << " lies outside cutoff " << to_string(tgt.cutoff());
                    throw AssemblyError(os.str());
                }
                Scalar v = t.value;
                if (t.axis >= 0) v *= Scalar(k[static_cast<std::size_t>(t.axis)]);
                col.emplace_back(tgt_off[tb] + *where, std::move(v));
            }
        }
    }
    OperatorMatrix out{name, source, target, SparseMatrix(target.size(), source.size())};
    for (std::size_t j = 0; j < columns.size(); ++j) out.entries.set_column(j, SparseVector::from_entries(std::move(columns[j])));
    return out;
}

// --- single-torus operators -----------------------------------------------

enum class OperatorKind { d, d_theta, d_f, d_f_theta, d_theta_f };

inline std::string to_string(OperatorKind k) {
    switch (k) {
    case OperatorKind::d: return "d";
    case OperatorKind::d_theta: return "d_theta";
    case OperatorKind::d_f: return "d_f";
    case OperatorKind::d_f_theta: return "d_f_theta";
    case OperatorKind::d_theta_f: return "d_theta_f";
    }
    return "?";
}

inline OperatorKind operator_kind_from_string(const std::string& s) {
    for (auto k : {OperatorKind::d, OperatorKind::d_theta, OperatorKind::d_f, OperatorKind::d_f_theta, OperatorKind::d_theta_f})
        if (to_string(k) == s) return k;
    throw InvalidInput("unknown operator '" + s + "' (expected d, d_theta, d_f, d_f_theta or d_theta_f)");
}

inline std::function<DifferentialForm(const DifferentialForm&)> form_operator(OperatorKind kind, const TwistData& tw) {
    switch (kind) {
    case OperatorKind::d: return [](const DifferentialForm& x) { return ext_d(x); };
    case OperatorKind::d_theta: return [tw](const DifferentialForm& x) { return d_theta(tw, x); };
    case OperatorKind::d_f: return [tw](const DifferentialForm& x) { return d_f(tw, x); };
    case OperatorKind::d_f_theta: return [tw](const DifferentialForm& x) { return d_f_theta(tw, x); };
    case OperatorKind::d_theta_f: return [tw](const DifferentialForm& x) { return d_theta_f(tw, x); };
    }
    throw InvalidInput("unknown operator kind");
}

/// Per-axis bound w: frequencies ≤ D map to frequencies ≤ D + w.
inline Cutoff growth_bound(OperatorKind kind, const TwistData& tw) {
    std::size_t n = tw.dim();
    switch (kind) {
    case OperatorKind::d: return Cutoff(n, 0);
    case OperatorKind::d_theta: return tw.theta().degree_vector();
    case OperatorKind::d_f: return tw.f().degree_vector();
    case OperatorKind::d_f_theta:
    case OperatorKind::d_theta_f: return tw.growth();
    }
    return Cutoff(n, 0);
}

/// Symbol of a single-torus operator on r-forms:
/// d_{f,θ} = f d − r df∧ − fθ∧, d_{θ,f} = f d − fθ∧ − r(df − fθ)∧.
inline WedgeSymbol operator_symbol(OperatorKind kind, const TwistData& tw, int r) {
    std::size_t n = tw.dim();
    TrigPoly one = TrigPoly::constant(n, Scalar(1));
    DifferentialForm df = ext_d(tw.f());
    DifferentialForm ftheta = tw.f() * tw.theta();
    Scalar rr(r);
    switch (kind) {
    case OperatorKind::d: return {1, one, DifferentialForm(n, 1)};
    case OperatorKind::d_theta: return {1, one, Scalar(-1) * tw.theta()};
    case OperatorKind::d_f: return {1, tw.f(), Scalar(-1) * (rr * df)};
    case OperatorKind::d_f_theta: return {1, tw.f(), Scalar(-1) * (rr * df + ftheta)};
    case OperatorKind::d_theta_f: return {1, tw.f(), rr * ftheta - rr * df - ftheta};
    }
    throw InvalidInput("unknown operator kind");
}

inline LinearOp lift(std::function<DifferentialForm(const DifferentialForm&)> op) {
    return [op = std::move(op)](const Cochain& x) { return Cochain{op(x.at(0))}; };
}

/// Matrix of a single-torus operator on `source`, into degree+1 at cutoff + w.
/// A smaller explicit target cutoff is allowed; terms that do not fit raise AssemblyError.
inline OperatorMatrix assemble(OperatorKind kind, const TwistData& tw, const BasisSpec& source,
                               std::optional<Cutoff> target_cutoff = std::nullopt) {
    Cutoff tc = target_cutoff ? *target_cutoff : source.cutoff() + growth_bound(kind, tw);
    BasisSpec target(source.dim(), source.degree() + 1, tc, std::nullopt);
    return assemble(to_string(kind), lift(form_operator(kind, tw)), Layout(source), Layout(target));
}

// --- cochain complexes ----------------------------------------------------

/// A graded family of truncated spaces with a differential. `growth` is the
/// per-axis frequency bound on the parameter torus of the cutoffs.
struct CochainComplex {
    std::string name;
    std::size_t cutoff_dim = 0;
    int max_degree = 0;
    Cutoff growth;
    bool nilpotent = true;
    std::function<Layout(int, const Cutoff&)> layout;
    std::function<Cochain(int, const Cochain&)> differential;
    // Optional fast path; must describe the same operator as `differential`.
    std::function<BlockSymbol(int)> symbol;

    Layout layout_at(int r, const Cutoff& D) const {
        if (r < 0 || r > max_degree) return Layout(std::vector<BasisSpec>{});
        return layout(r, D);
    }
    OperatorMatrix matrix(int r, const Cutoff& D_source, const Cutoff& D_target) const {
        Layout source = layout_at(r, D_source), target = layout_at(r + 1, D_target);
        if (source.blocks().empty() || target.blocks().empty())
            return {name, source, target, SparseMatrix(target.size(), source.size())};
        std::string label = name + " [degree " + std::to_string(r) + "]";
        if (symbol) return assemble_symbol(label, symbol(r), source, target);
        return assemble(label, [this, r](const Cochain& x) { return differential(r, x); }, source, target);
    }
};

/// (Ω^•(T^n), op) for one of the single-torus operators.
inline CochainComplex single_torus_complex(OperatorKind kind, const TwistData& tw) {
    CochainComplex c;
    c.name = to_string(kind);
    c.cutoff_dim = tw.dim();
    c.max_degree = static_cast<int>(tw.dim());
    c.growth = growth_bound(kind, tw);
    c.nilpotent = kind != OperatorKind::d_theta_f;
    std::size_t n = tw.dim();
    c.layout = [n](int r, const Cutoff& D) { return Layout(BasisSpec(n, r, D)); };
    auto op = form_operator(kind, tw);
    c.differential = [op](int, const Cochain& x) { return Cochain{op(x.at(0))}; };
    c.symbol = [kind, tw](int r) { return BlockSymbol{{{0, 0, operator_symbol(kind, tw, r)}}}; };
    return c;
}

// --- cohomology -------------------------------------------------------------

struct CohomologyRow {
    int cutoff = 0;
    std::size_t space_dim = 0;     // dim of the truncated space at (r, D)
    std::size_t kernel = 0;        // dim ker(out-map)
    std::size_t incoming_rank = 0; // rank of the map from (r-1, D-w)
    std::size_t quotient_by = 0;   // dim of what is divided out (= incoming_rank for complexes)
    long dim = 0;                  // kernel − quotient_by
};

struct DegreeReport {
    int degree = 0;
    std::string label;
    std::vector<CohomologyRow> rows;
    bool stabilized = false;
    std::optional<long> stabilized_dim;
    std::string note;
};

struct CohomologyReport {
    std::string complex_name;
    int stability = 3;
    std::vector<DegreeReport> degrees;

    const DegreeReport& degree(int r) const {
        for (const auto& d : degrees)
            if (d.degree == r) return d;
        throw InvalidInput("degree " + std::to_string(r) + " not in report");
    }
};

/// Default truncation schedule D = 2…8 and stability window.
inline std::vector<int> default_schedule() { return {2, 3, 4, 5, 6, 7, 8}; }
inline constexpr int kDefaultStability = 3;

inline std::vector<int> schedule_range(int lo, int hi) {
    if (hi < lo) throw InvalidInput("schedule must be increasing");
    std::vector<int> out;
    for (int D = lo; D <= hi; ++D) out.push_back(D);
    return out;
}

inline void finalize_stability(DegreeReport& rep, int s) {
    rep.stabilized = false;
    rep.stabilized_dim.reset();
    if (s <= 0 || rep.rows.size() < static_cast<std::size_t>(s)) return;
    long last = rep.rows.back().dim;
    for (std::size_t k = rep.rows.size() - static_cast<std::size_t>(s); k < rep.rows.size(); ++k)
        if (rep.rows[k].dim != last) return;
    rep.stabilized = true;
    rep.stabilized_dim = last;
}

inline void check_schedule(const std::vector<int>& schedule) {
    if (schedule.empty()) throw InvalidInput("empty truncation schedule");
    for (std::size_t k = 1; k < schedule.size(); ++k)
        if (schedule[k] <= schedule[k - 1]) throw InvalidInput("schedule must be strictly increasing");
    if (schedule.front() < 0) throw InvalidInput("cutoffs must be non-negative");
}

/// dim H(r, D) = dim ker(L(r,D) → L(r+1,D+w)) − rank(L(r−1,D−w) → L(r,D)).
/// For nilpotent families the truncated composition is checked to vanish.
/// When `kernel_out` is given it receives a basis of the truncated cocycles.
inline CohomologyRow cohomology_row(const CochainComplex& cx, int r, const Cutoff& D,
                                    std::vector<SparseVector>* kernel_out = nullptr) {
    const Cutoff& w = cx.growth;
    OperatorMatrix out = cx.matrix(r, D, D + w);
    OperatorMatrix in = cx.matrix(r - 1, D - w, D);
    CohomologyRow row;
    row.space_dim = out.source.size();
    std::vector<SparseVector> cocycles;
    bool need_kernel = kernel_out || !cx.nilpotent;
    if (need_kernel) {
        cocycles = kernel_basis(out.entries);
        row.kernel = cocycles.size();
    } else {
        row.kernel = row.space_dim - exact_rank(out.entries);
    }
    row.incoming_rank = exact_rank(in.entries);
    if (cx.nilpotent) {
        if (!out.entries.multiply(in.entries).is_zero())
            throw ComplexPropertyViolation(cx.name + ": truncated composition d∘d ≠ 0 at degree " + std::to_string(r) +
                                           ", cutoff " + to_string(D) + " (misconfigured operator, e.g. non-closed θ)");
        row.quotient_by = row.incoming_rank;
    } else {
        // Twisted quotient ker / (im ∩ ker): dim(I ∩ K) = dim I + dim K − dim(I + K).
        std::size_t joint = row.kernel + relative_rank(cocycles, in.entries.columns());
        row.quotient_by = row.incoming_rank + row.kernel - joint;
    }
    row.dim = static_cast<long>(row.kernel) - static_cast<long>(row.quotient_by);
    if (kernel_out) *kernel_out = std::move(cocycles);
    return row;
}

inline CohomologyReport cohomology_dim(const CochainComplex& cx, const std::vector<int>& degrees,
                                       const std::vector<int>& schedule, int stability = kDefaultStability) {
    check_schedule(schedule);
    CohomologyReport rep{cx.name, stability, {}};
    for (int r : degrees) {
        DegreeReport dr;
        dr.degree = r;
        dr.label = "H^" + std::to_string(r);
        bool all_zero_ops = true;
        for (int D : schedule) {
            Cutoff c = uniform_cutoff(cx.cutoff_dim, D);
            CohomologyRow row = cohomology_row(cx, r, c);
            row.cutoff = D;
            if (row.kernel != row.space_dim || row.incoming_rank != 0) all_zero_ops = false;
            dr.rows.push_back(row);
        }
        finalize_stability(dr, stability);
        if (all_zero_ops && !dr.stabilized && dr.rows.back().space_dim > 0)
            dr.note = "operator vanishes on every truncation; the quotient is the whole truncated space";
        rep.degrees.push_back(std::move(dr));
    }
    return rep;
}

/// Quotient dimensions ker d_{θ,f} / (im d_{θ,f} ∩ ker d_{θ,f}).
inline CohomologyReport twisted_cohomology_dim(const TwistData& tw, const std::vector<int>& degrees,
                                               const std::vector<int>& schedule, int stability = kDefaultStability) {
    return cohomology_dim(single_torus_complex(OperatorKind::d_theta_f, tw), degrees, schedule, stability);
}

// --- induced maps -----------------------------------------------------------

/// A degree-shifting linear map between two complexes with a per-axis growth.
struct ChainMap {
    std::string name;
    Cutoff growth;
    std::function<Cochain(const Cochain&)> apply;
};

inline ChainMap identity_chain_map(std::size_t cutoff_dim) {
    return {"identity", Cutoff(cutoff_dim, 0), [](const Cochain& x) { return x; }};
}
inline ChainMap zero_chain_map(const CochainComplex& target, int target_degree) {
    return {"zero", Cutoff(target.cutoff_dim, 0), [target, target_degree](const Cochain&) {
                return target.layout_at(target_degree, Cutoff(target.cutoff_dim, 0)).zero();
            }};
}

/// Rank of the map induced on cohomology: dim((c(K_src) + I_tgt) / I_tgt),
/// with K_src the truncated cocycles at (r_src, D) and I_tgt the boundaries
/// from cutoff D + w_c inside the widened target at D + w_c + w_tgt.
/// `source_kernel` may pass cocycles already computed by cohomology_row at
/// the same (r_src, D); `verify` checks c∘d = d∘c on every source basis element.
inline std::size_t induced_map_rank(const CochainComplex& source, int r_src, const CochainComplex& target, int r_tgt,
                                    const ChainMap& map, int D,
                                    const std::vector<SparseVector>* source_kernel = nullptr, bool verify = true) {
    Cutoff Ds = uniform_cutoff(source.cutoff_dim, D);
    Cutoff Dm = Ds + map.growth;
    Cutoff Dt = Dm + target.growth;
    Layout src_layout = source.layout_at(r_src, Ds);
    Layout ambient = target.layout_at(r_tgt, Dt);

    for (std::size_t j = 0; verify && j < src_layout.size(); ++j) {
        if (r_tgt + 1 > target.max_degree) break;
        Cochain x = src_layout.element(j);
        Cochain lhs = target.differential(r_tgt, map.apply(x));
        bool commutes = true;
        if (r_src + 1 > source.max_degree) {
            for (const auto& part : lhs) commutes = commutes && part.is_zero();
        } else {
            commutes = lhs == map.apply(source.differential(r_src, x));
        }
        if (!commutes)
            throw ChainMapViolation(map.name + " does not commute with the differentials on basis element [" +
                                    src_layout.describe(j) + "]");
    }

    std::vector<SparseVector> computed;
    if (!source_kernel) {
        computed = kernel_basis(source.matrix(r_src, Ds, Ds + source.growth).entries);
        source_kernel = &computed;
    }
    std::vector<SparseVector> images;
    images.reserve(source_kernel->size());
    for (const auto& k : *source_kernel) images.push_back(ambient.coordinates(map.apply(src_layout.from_coordinates(k))));
    return relative_rank(target.matrix(r_tgt - 1, Dm, Dt).entries.columns(), images);
}

// --- Bott–Chern type groups -------------------------------------------------

/// dim(ker ∂_{f,θ} ∩ ker ∂̄_{f,θ}) − dim im(∂_{f,θ}∂̄_{f,θ}) on bidegree (p,q).
inline CohomologyRow bott_chern_row(const TwistData& tw, int p, int q, const Cutoff& D) {
    detail::require_even(tw.dim());
    std::size_t n = tw.dim();
    Cutoff w = tw.growth();
    auto space = [n](int a, int b, const Cutoff& c) {
        if (a < 0 || b < 0) return BasisSpec(n, 0, Cutoff(n, -1), 0);
        return BasisSpec(n, a + b, c, a);
    };
    Layout here(space(p, q, D));
    Layout joint(std::vector<BasisSpec>{space(p + 1, q, D + w), space(p, q + 1, D + w)});
    Layout below(space(p - 1, q - 1, D - w - w));
    auto split = [tw](const Cochain& x) {
        BidegreeForm b(x.at(0));
        return Cochain{del_f_theta(tw, b).frame(), delbar_f_theta(tw, b).frame()};
    };
    auto mixed = [tw](const Cochain& x) {
        return Cochain{del_f_theta(tw, delbar_f_theta(tw, BidegreeForm(x.at(0)))).frame()};
    };
    OperatorMatrix out = assemble("(del_f_theta, delbar_f_theta)", split, here, joint);
    OperatorMatrix in = assemble("del_f_theta delbar_f_theta", mixed, below, here);
    if (!out.entries.multiply(in.entries).is_zero())
        throw ComplexPropertyViolation("image of ∂_{f,θ}∂̄_{f,θ} is not inside ker ∂_{f,θ} ∩ ker ∂̄_{f,θ}");
    CohomologyRow row;
    row.space_dim = here.size();
    row.kernel = row.space_dim - exact_rank(out.entries);
    row.incoming_rank = exact_rank(in.entries);
    row.quotient_by = row.incoming_rank;
    row.dim = static_cast<long>(row.kernel) - static_cast<long>(row.quotient_by);
    return row;
}

inline DegreeReport bott_chern_dim(const TwistData& tw, int p, int q, const std::vector<int>& schedule,
                                   int stability = kDefaultStability) {
    check_schedule(schedule);
    DegreeReport dr;
    dr.degree = p + q;
    dr.label = "H_BC^{" + std::to_string(p) + "," + std::to_string(q) + "}";
    for (int D : schedule) {
        CohomologyRow row = bott_chern_row(tw, p, q, uniform_cutoff(tw.dim(), D));
        row.cutoff = D;
        dr.rows.push_back(row);
    }
    finalize_stability(dr, stability);
    return dr;
}

} // namespace twcoh
