#include "effstiff/leverage.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <string>
#include <thread>

#include "effstiff/cholesky.hpp"
#include "effstiff/eigen.hpp"
#include "effstiff/errors.hpp"
#include "effstiff/qr.hpp"

namespace effstiff {

std::string_view to_string(LeverageMethod m) {
    switch (m) {
        case LeverageMethod::ExactSchur:
            return "exact-schur";
        case LeverageMethod::ExactQr:
            return "exact-qr";
        case LeverageMethod::Local:
            return "local";
        case LeverageMethod::Removal:
            return "removal";
    }
    return "unknown";
}

LeverageMethod parse_leverage_method(std::string_view s) {
    for (auto m : {LeverageMethod::ExactSchur, LeverageMethod::ExactQr, LeverageMethod::Local,
                   LeverageMethod::Removal}) {
        if (s == to_string(m)) {
            return m;
        }
    }
    throw DomainError("unknown leverage method '" + std::string(s) + "'");
}

bool is_exact(LeverageMethod m) { return m != LeverageMethod::Local; }

double clamp_leverage(double tau) { return std::clamp(tau, kLeverageFloor, 1.0); }

Vector LeverageTable::taus() const {
    Vector t;
    t.reserve(records.size());
    for (const auto& r : records) {
        t.push_back(r.tau);
    }
    return t;
}

SymmetricDense effective_stiffness(const Assembly& a, std::size_t e) {
    return schur_complement(a.stiffness(), a.element(e).nodes);
}

double leverage_exact_schur(const Assembly& a, std::size_t e) {
    const SymmetricDense s = effective_stiffness(a, e);
    return clamp_leverage(pencil_eigs(a.element(e).k_tilde, s).max());
}

LeverageTable leverage_exact_qr(const Assembly& a) {
    const Assembly fa = a.factored() ? a : factor_all(a);
    const GlobalFactor g = build_global_factor(fa);
    const ThinQr qr = thin_qr(g.f, g.block_rows, fa.n() - fa.d());

    LeverageTable t;
    t.records.reserve(a.m());
    for (std::size_t e = 0; e < a.m(); ++e) {
        const DenseMatrix ue = qr.block(e);
        // U_e U_e^T is r x r.
        const DenseMatrix uut = ue * ue.transpose();
        const EigDecomposition eig = sym_eig(SymmetricDense::from_dense(uut), kRankTolerance, false);
        const double tau = clamp_leverage(eig.values.front());
        t.records.push_back({e, tau, LeverageMethod::ExactQr, std::nullopt});
        t.total += tau;
    }
    return t;
}

double leverage_via_removal(const Assembly& a, std::size_t e) {
    if (a.n() > kRemovalMaxOrder) {
        throw DomainError("leverage_via_removal: order " + std::to_string(a.n()) +
                          " exceeds the dense limit " + std::to_string(kRemovalMaxOrder));
    }
    const SymmetricDense k = a.stiffness().to_dense();
    const SymmetricDense reduced = (a.stiffness() - a.element_matrix(e)).to_dense();
    const std::size_t rank_k = sym_eig(k, kRankTolerance, false).rank;
    const std::size_t rank_reduced = sym_eig(reduced, kRankTolerance, false).rank;
    if (rank_reduced < rank_k) {
        return 1.0;
    }
    const double kappa = pencil_eigs(k, reduced).condition();
    return clamp_leverage((kappa - 1.0) / kappa);
}

double leverage_local(const Assembly& a, const RigidityGraph& g, std::size_t e,
                      std::size_t radius) {
    if (radius < 1) {
        throw DomainError("leverage_local: radius must be at least 1");
    }
    const std::vector<std::size_t> members = ball(g, e, radius);
    try {
        const Submodel sub = submodel(a, members);
        const auto it = std::lower_bound(sub.element_map.begin(), sub.element_map.end(), e);
        const auto local = static_cast<std::size_t>(it - sub.element_map.begin());
        const SymmetricDense s = effective_stiffness(sub.assembly, local);
        return clamp_leverage(pencil_eigs(sub.assembly.element(local).k_tilde, s).max());
    } catch (const Error&) {
        // Singular eliminated block or local null-space mismatch.
        return 1.0;
    }
}

LeverageTable leverage_table(const Assembly& a, const LeverageOptions& opts) {
    std::vector<std::size_t> ids;
    if (opts.subset) {
        if (opts.subset->empty()) {
            throw DomainError("leverage_table: empty element subset");
        }
        ids = *opts.subset;
        for (std::size_t e : ids) {
            if (e >= a.m()) {
                throw DomainError("leverage_table: unknown element id " + std::to_string(e));
            }
        }
    } else {
        ids.resize(a.m());
        for (std::size_t e = 0; e < a.m(); ++e) {
            ids[e] = e;
        }
    }
    if (opts.method == LeverageMethod::Local && (!opts.radius || *opts.radius < 1)) {
        throw DomainError("leverage_table: local method needs a radius >= 1");
    }

    LeverageTable t;
    t.records.resize(ids.size());
    const std::optional<std::size_t> radius =
        opts.method == LeverageMethod::Local ? opts.radius : std::nullopt;

    if (opts.method == LeverageMethod::ExactQr) {
        const LeverageTable all = leverage_exact_qr(a);
        for (std::size_t k = 0; k < ids.size(); ++k) {
            t.records[k] = all.records[ids[k]];
        }
    } else {
        RigidityGraph g;
        if (opts.method == LeverageMethod::Local) {
            g = rigidity_graph(a, opts.min_shared.value_or(default_min_shared(a)));
        }
        std::atomic<std::size_t> next{0};
        std::mutex failures_mutex;
        std::vector<std::pair<std::size_t, std::string>> failures;
        auto worker = [&] {
            for (std::size_t k = next++; k < ids.size(); k = next++) {
                const std::size_t e = ids[k];
                try {
                    double tau = 0.0;
                    switch (opts.method) {
                        case LeverageMethod::ExactSchur:
                            tau = leverage_exact_schur(a, e);
                            break;
                        case LeverageMethod::Removal:
                            tau = leverage_via_removal(a, e);
                            break;
                        case LeverageMethod::Local:
                            tau = leverage_local(a, g, e, *radius);
                            break;
                        case LeverageMethod::ExactQr:
                            break;
                    }
                    t.records[k] = {e, tau, opts.method, radius};
                } catch (const Error& err) {
                    std::lock_guard lock(failures_mutex);
                    failures.emplace_back(e, err.what());
                }
            }
        };
        const std::size_t threads = std::max<std::size_t>(1, std::min(opts.threads, ids.size()));
        std::vector<std::jthread> pool;
        for (std::size_t i = 1; i < threads; ++i) {
            pool.emplace_back(worker);
        }
        worker();
        pool.clear();

        if (!failures.empty()) {
            std::sort(failures.begin(), failures.end());
            std::string msg = "leverage computation failed for " +
                              std::to_string(failures.size()) + " element(s):";
            for (std::size_t i = 0; i < failures.size() && i < 10; ++i) {
                msg += " [" + std::to_string(failures[i].first) + "] " + failures[i].second + ";";
            }
            throw NotWellFormedError(msg);
        }
    }

    // Summed in record order so the total is independent of scheduling.
    for (const auto& r : t.records) {
        t.total += r.tau;
    }
    return t;
}

}  // namespace effstiff
