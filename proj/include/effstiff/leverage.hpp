#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "effstiff/assembly.hpp"
#include "effstiff/dense.hpp"

namespace effstiff {

enum class LeverageMethod { ExactSchur, ExactQr, Local, Removal };

std::string_view to_string(LeverageMethod m);
// Accepts "exact-schur", "exact-qr", "local", "removal".
LeverageMethod parse_leverage_method(std::string_view s);
bool is_exact(LeverageMethod m);

// Leverages are kept in [kLeverageFloor, 1] so sampling probabilities stay
// strictly positive.
inline constexpr double kLeverageFloor = 1e-14;
double clamp_leverage(double tau);

struct LeverageRecord {
    std::size_t element_id = 0;
    double tau = 0.0;
    LeverageMethod method = LeverageMethod::ExactSchur;
    std::optional<std::size_t> radius;
};

struct LeverageTable {
    std::vector<LeverageRecord> records;
    double total = 0.0;

    Vector taus() const;
    std::size_t size() const { return records.size(); }
};

// Schur complement of K onto the element's nodes.
SymmetricDense effective_stiffness(const Assembly& a, std::size_t e);

// lambda_max(K_e, S_e).
double leverage_exact_schur(const Assembly& a, std::size_t e);

// All leverages from one thin QR of the global factor, as lambda_max(U_e U_e^T)
// over the row blocks of an orthonormal basis of range(F). Elements without a
// factor are factored on the fly.
LeverageTable leverage_exact_qr(const Assembly& a);

// Leverage from the condition number of (K, K - K_e): 1 if removing e drops
// the rank, else (kappa - 1) / kappa. Densifies K; limited to n <= kRemovalMaxOrder.
inline constexpr std::size_t kRemovalMaxOrder = 2000;
double leverage_via_removal(const Assembly& a, std::size_t e);

// Upper bound on the leverage from the submodel spanned by the radius-ball
// around e. Degenerate local models yield 1.
double leverage_local(const Assembly& a, const RigidityGraph& g, std::size_t e,
                      std::size_t radius);

struct LeverageOptions {
    LeverageMethod method = LeverageMethod::ExactQr;
    std::optional<std::size_t> radius;               // required for Local
    std::optional<std::size_t> min_shared;           // Local; default_min_shared otherwise
    std::optional<std::vector<std::size_t>> subset;  // default: every element
    std::size_t threads = 1;
};

// Batch driver. Output order follows the subset (or element order) and does
// not depend on the thread count. Per-element failures are collected and
// raised together.
LeverageTable leverage_table(const Assembly& a, const LeverageOptions& opts);

}  // namespace effstiff
