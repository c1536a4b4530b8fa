#include "effstiff/sampler.hpp"

#include <cmath>
#include <string>

#include "effstiff/errors.hpp"

namespace effstiff {

double chernoff_constant(double kappa_max) {
    if (!(kappa_max > 1.0) || !std::isfinite(kappa_max)) {
        throw DomainError("chernoff_constant: kappa_max must be a finite value > 1");
    }
    // ln(2k / (k + 1)) = log1p((k - 1) / (k + 1)); written this way the
    // denominator keeps its accuracy as k approaches 1.
    const double k = kappa_max;
    const double e = k - 1.0;
    return (k + 1.0) / (2.0 * k * std::log1p(e / (k + 1.0)) - e);
}

std::string_view to_string(SampleMode m) {
    switch (m) {
        case SampleMode::Exact:
            return "exact";
        case SampleMode::Approx:
            return "approx";
        case SampleMode::Upper:
            return "upper";
    }
    return "unknown";
}

SampleMode parse_sample_mode(std::string_view s) {
    for (auto m : {SampleMode::Exact, SampleMode::Approx, SampleMode::Upper}) {
        if (s == to_string(m)) {
            return m;
        }
    }
    throw DomainError("unknown sampling mode '" + std::string(s) + "'");
}

double sample_bound(double kappa_max, double delta, double total_leverage, std::size_t n,
                    std::size_t d, SampleMode mode, std::optional<double> beta) {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw DomainError("sample_size: delta must lie in (0, 1)");
    }
    if (!(total_leverage > 0.0) || !std::isfinite(total_leverage)) {
        throw DomainError("sample_size: total leverage must be positive");
    }
    if (n <= d) {
        throw DomainError("sample_size: need n > d");
    }
    double scale = 1.0;
    if (mode == SampleMode::Approx) {
        if (!beta || !(*beta >= 1.0) || !std::isfinite(*beta)) {
            throw DomainError("sample_size: approx mode needs an explicit beta >= 1");
        }
        scale = *beta;
    }
    const double c = chernoff_constant(kappa_max);
    return c * total_leverage * scale * std::log(2.0 * static_cast<double>(n - d) / delta);
}

std::size_t sample_size(double kappa_max, double delta, double total_leverage, std::size_t n,
                        std::size_t d, SampleMode mode, std::optional<double> beta) {
    return static_cast<std::size_t>(
        std::ceil(sample_bound(kappa_max, delta, total_leverage, n, d, mode, beta)));
}

std::size_t heuristic_sample_size(double total_leverage) {
    if (!(total_leverage > 0.0) || !std::isfinite(total_leverage)) {
        throw DomainError("heuristic_sample_size: total leverage must be positive");
    }
    const double m = std::ceil(total_leverage * std::log(total_leverage));
    return m < 1.0 ? 1 : static_cast<std::size_t>(m);
}

SamplingPlan make_plan(const Assembly& a, const LeverageTable& table, const PlanOptions& opts) {
    if (table.size() != a.m()) {
        throw DomainError("make_plan: leverage table has " + std::to_string(table.size()) +
                          " records for " + std::to_string(a.m()) + " elements");
    }
    double total = 0.0;
    for (std::size_t e = 0; e < table.size(); ++e) {
        if (table.records[e].element_id != e) {
            throw DomainError("make_plan: leverage records must be in element order");
        }
        total += table.records[e].tau;
    }
    if (!(total > 0.0)) {
        throw DomainError("make_plan: total leverage must be positive");
    }
    SamplingPlan plan;
    plan.kappa_max = opts.kappa_max;
    plan.delta = opts.delta;
    plan.seed = opts.seed;
    plan.mode = opts.mode;
    plan.beta = opts.beta;
    plan.probabilities.resize(a.m());
    for (std::size_t e = 0; e < a.m(); ++e) {
        plan.probabilities[e] = std::max(table.records[e].tau, kLeverageFloor) / total;
    }
    plan.samples = opts.samples ? *opts.samples
                                : sample_size(opts.kappa_max, opts.delta, total, a.n(), a.d(),
                                              opts.mode, opts.beta);
    if (plan.samples == 0) {
        throw DomainError("make_plan: sample count must be positive");
    }
    return plan;
}

SamplingPlan uniform_plan(const Assembly& a, const PlanOptions& opts) {
    if (!opts.samples || *opts.samples == 0) {
        throw DomainError("uniform_plan: an explicit positive sample count is required");
    }
    if (a.m() == 0) {
        throw DomainError("uniform_plan: model has no elements");
    }
    SamplingPlan plan;
    plan.kappa_max = opts.kappa_max;
    plan.delta = opts.delta;
    plan.seed = opts.seed;
    plan.mode = opts.mode;
    plan.beta = opts.beta;
    plan.samples = *opts.samples;
    plan.probabilities.assign(a.m(), 1.0 / static_cast<double>(a.m()));
    return plan;
}

AliasTable::AliasTable(std::span<const double> probabilities) {
    const std::size_t m = probabilities.size();
    if (m == 0) {
        throw DomainError("alias table: no outcomes");
    }
    double sum = 0.0;
    for (double p : probabilities) {
        if (!(p > 0.0) || !std::isfinite(p)) {
            throw DomainError("alias table: probabilities must be positive");
        }
        sum += p;
    }
    prob_.resize(m);
    alias_.resize(m);
    std::vector<double> scaled(m);
    std::vector<std::size_t> small;
    std::vector<std::size_t> large;
    for (std::size_t i = 0; i < m; ++i) {
        scaled[i] = probabilities[i] / sum * static_cast<double>(m);
        (scaled[i] < 1.0 ? small : large).push_back(i);
    }
    while (!small.empty() && !large.empty()) {
        const std::size_t l = small.back();
        small.pop_back();
        const std::size_t g = large.back();
        large.pop_back();
        prob_[l] = scaled[l];
        alias_[l] = g;
        scaled[g] = (scaled[g] + scaled[l]) - 1.0;
        (scaled[g] < 1.0 ? small : large).push_back(g);
    }
    // Leftovers differ from 1 only by roundoff.
    for (std::size_t i : large) {
        prob_[i] = 1.0;
        alias_[i] = i;
    }
    for (std::size_t i : small) {
        prob_[i] = 1.0;
        alias_[i] = i;
    }
}

std::size_t AliasTable::draw(Xoshiro256& rng) const {
    const std::size_t i = rng.below(prob_.size());
    return rng.uniform() < prob_[i] ? i : alias_[i];
}

Draws draw(const SamplingPlan& plan) {
    const AliasTable table(plan.probabilities);
    Xoshiro256 rng(plan.seed);
    Draws d;
    d.sequence.resize(plan.samples);
    d.counts.assign(plan.probabilities.size(), 0);
    for (std::size_t i = 0; i < plan.samples; ++i) {
        const std::size_t e = table.draw(rng);
        d.sequence[i] = e;
        ++d.counts[e];
    }
    return d;
}

SampledPreconditioner build_preconditioner(const Assembly& a, const SamplingPlan& plan,
                                           const Draws& draws) {
    if (draws.counts.size() != a.m() || plan.probabilities.size() != a.m()) {
        throw DomainError("build_preconditioner: draws do not match the model");
    }
    SampledPreconditioner p;
    p.samples = plan.samples;
    p.seed = plan.seed;
    p.element_coeffs.assign(a.m(), 0.0);
    const double m = static_cast<double>(plan.samples);
    for (std::size_t e = 0; e < a.m(); ++e) {
        if (draws.counts[e] > 0) {
            p.element_coeffs[e] =
                static_cast<double>(draws.counts[e]) / (m * plan.probabilities[e]);
            ++p.distinct_count;
        }
    }
    p.matrix = assemble_weighted(a, p.element_coeffs);
    try {
        const CholeskyFactor f = factor(p.matrix, a.d());
        p.detected_rank = f.detected_rank();
    } catch (const NumericalError&) {
        p.detected_rank = 0;
    }
    p.rank_ok = p.detected_rank == a.n() - a.d();
    return p;
}

std::uint64_t retry_seed(std::uint64_t seed, std::size_t attempt) {
    std::uint64_t state = seed;
    std::uint64_t s = seed;
    for (std::size_t k = 0; k < attempt; ++k) {
        s = splitmix64(state);
    }
    return s;
}

SparsifyResult sparsify(const Assembly& a, SamplingPlan plan, std::size_t retries) {
    const std::uint64_t base = plan.seed;
    SparsifyResult out;
    for (std::size_t attempt = 0; attempt <= retries; ++attempt) {
        plan.seed = retry_seed(base, attempt);
        out.draws = draw(plan);
        out.preconditioner = build_preconditioner(a, plan, out.draws);
        out.attempts = attempt + 1;
        if (out.preconditioner.rank_ok) {
            break;
        }
    }
    return out;
}

}  // namespace effstiff
