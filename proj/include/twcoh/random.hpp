#pragma once

#include <random>

#include "forms.hpp"
#include "twisted_ops.hpp"

namespace twcoh {

/// Seeded generator of small exact test inputs. Deterministic for a seed.
class RandomInputs {
public:
    explicit RandomInputs(std::uint64_t seed, int max_degree = 2, int max_terms = 3)
        : rng_(seed), max_degree_(max_degree), max_terms_(max_terms) {}

    std::mt19937_64& engine() noexcept { return rng_; }

    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    mpq_class rational() {
        mpq_class q(uniform(-4, 4), uniform(1, 3));
        q.canonicalize();
        return q;
    }

    Scalar scalar() {
        if (uniform(0, 1) == 0) return Scalar(rational());
        return Scalar(rational(), rational());
    }

    Scalar nonzero_scalar() {
        Scalar s;
        while (s.is_zero()) s = scalar();
        return s;
    }

    FreqVector freq(std::size_t dim, int max_degree) {
        FreqVector k(dim);
        for (std::size_t j = 0; j < dim; ++j) k[j] = uniform(-max_degree, max_degree);
        return k;
    }

    TrigPoly poly(std::size_t dim) { return poly(dim, max_degree_); }
    TrigPoly poly(std::size_t dim, int max_degree) {
        TrigPoly p(dim);
        int terms = uniform(1, max_terms_);
        for (int t = 0; t < terms; ++t) p.add_term(freq(dim, max_degree), scalar());
        return p;
    }

    TrigPoly unit(std::size_t dim) { return TrigPoly::monomial(freq(dim, 1), nonzero_scalar()); }

    MultiIndex multi_index(std::size_t dim, int degree) {
        std::vector<int> all(dim);
        for (std::size_t j = 0; j < dim; ++j) all[j] = static_cast<int>(j);
        std::shuffle(all.begin(), all.end(), rng_);
        MultiIndex I(all.begin(), all.begin() + degree);
        std::sort(I.begin(), I.end());
        return I;
    }

    DifferentialForm form(std::size_t dim, int degree) {
        DifferentialForm out(dim, degree);
        if (degree > static_cast<int>(dim)) return out;
        int comps = uniform(1, 2);
        for (int c = 0; c < comps; ++c) out.add(multi_index(dim, degree), poly(dim));
        return out;
    }

    DifferentialForm form_up_to(std::size_t dim, int max_form_degree) {
        return form(dim, uniform(0, std::min<int>(max_form_degree, static_cast<int>(dim))));
    }

    /// Closed 1-form: constant harmonic part plus an exact part dg.
    DifferentialForm closed_one_form(std::size_t dim) {
        DifferentialForm out(dim, 1);
        for (std::size_t j = 0; j < dim; ++j)
            if (uniform(0, 1)) out.add({static_cast<int>(j)}, TrigPoly::constant(dim, scalar()));
        if (uniform(0, 1)) out += ext_d(poly(dim, 1));
        return out;
    }

    TwistData twist(std::size_t dim) { return {poly(dim), closed_one_form(dim)}; }

private:
    std::mt19937_64 rng_;
    int max_degree_;
    int max_terms_;
};

} // namespace twcoh
