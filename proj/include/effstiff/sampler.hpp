#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "effstiff/assembly.hpp"
#include "effstiff/cholesky.hpp"
#include "effstiff/leverage.hpp"
#include "effstiff/rng.hpp"
#include "effstiff/sparse.hpp"

namespace effstiff {

// (k + 1) / (2 k ln(2k / (k + 1)) - k + 1). Raises DomainError for k <= 1.
double chernoff_constant(double kappa_max);

// exact: leverages are exact, M from tau_K.
// approx: leverages are (1 +- eps)-approximations, M scaled by an explicit beta.
// upper: leverages are upper bounds, M from their total.
enum class SampleMode { Exact, Approx, Upper };

std::string_view to_string(SampleMode m);
SampleMode parse_sample_mode(std::string_view s);

// Real-valued bound C(kappa) * total * [beta] * ln(2 (n - d) / delta), before
// the ceiling.
double sample_bound(double kappa_max, double delta, double total_leverage, std::size_t n,
                    std::size_t d, SampleMode mode, std::optional<double> beta = std::nullopt);
std::size_t sample_size(double kappa_max, double delta, double total_leverage, std::size_t n,
                        std::size_t d, SampleMode mode, std::optional<double> beta = std::nullopt);

// ceil(total * ln(total)), at least 1.
std::size_t heuristic_sample_size(double total_leverage);

struct SamplingPlan {
    Vector probabilities;
    double kappa_max = 0.0;
    double delta = 0.0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    SampleMode mode = SampleMode::Exact;
    std::optional<double> beta;
};

struct PlanOptions {
    double kappa_max = 3.0;
    double delta = 0.5;
    std::uint64_t seed = 0;
    SampleMode mode = SampleMode::Exact;
    std::optional<double> beta;
    // Overrides the Chernoff-bound count when set.
    std::optional<std::size_t> samples;
};

// p_e = tau_e / total. The table must hold one record per element, in order.
SamplingPlan make_plan(const Assembly& a, const LeverageTable& table, const PlanOptions& opts);

// Same element count and options, p_e = 1/m. Needs opts.samples.
SamplingPlan uniform_plan(const Assembly& a, const PlanOptions& opts);

// Vose alias table. Each draw consumes two generator outputs: below(m) picks
// a column, then uniform() decides between the column and its alias.
class AliasTable {
public:
    explicit AliasTable(std::span<const double> probabilities);

    std::size_t size() const { return prob_.size(); }
    std::size_t draw(Xoshiro256& rng) const;

private:
    std::vector<double> prob_;
    std::vector<std::size_t> alias_;
};

struct Draws {
    std::vector<std::size_t> sequence;  // J_1, ..., J_M
    std::vector<std::size_t> counts;    // per element, summing to M
};

Draws draw(const SamplingPlan& plan);

struct SampledPreconditioner {
    Vector element_coeffs;  // count_e / (M p_e), zero for unsampled elements
    SparseSymmetric matrix;
    std::size_t distinct_count = 0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    std::size_t detected_rank = 0;
    bool rank_ok = false;
};

SampledPreconditioner build_preconditioner(const Assembly& a, const SamplingPlan& plan,
                                           const Draws& draws);

// Seed of retry attempt k (k = 0 is the plan's own seed).
std::uint64_t retry_seed(std::uint64_t seed, std::size_t attempt);

struct SparsifyResult {
    SampledPreconditioner preconditioner;
    Draws draws;
    std::size_t attempts = 0;
};

// Draws and builds until rank_ok, trying at most 1 + retries seeds. The last
// attempt is returned even when it failed.
SparsifyResult sparsify(const Assembly& a, SamplingPlan plan, std::size_t retries = 3);

}  // namespace effstiff
