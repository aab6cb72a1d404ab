#include "ogw/tables.hpp"

#include <atomic>
#include <functional>
#include <thread>

namespace ogw {

namespace {

void enumerate_multisets(int max_index, int max_t,
                         const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int start) {
        fn(cur);
        if ((int)cur.size() == max_t)
            return;
        for (int i = start; i <= max_index; ++i) {
            cur.push_back(i);
            rec(i);
            cur.pop_back();
        }
    };
    rec(0);
}

template <typename Key, typename Fn>
std::vector<std::pair<Key, Rational>> run_jobs(std::vector<Key> keys, int jobs, Fn&& compute) {
    std::vector<std::pair<Key, Rational>> out(keys.size());
    if (jobs <= 1) {
        for (size_t i = 0; i < keys.size(); ++i)
            out[i] = {keys[i], compute(keys[i])};
        return out;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= keys.size())
                return;
            try {
                out[i] = {keys[i], compute(keys[i])};
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t)
        pool.emplace_back(worker);
    for (auto& th : pool)
        th.join();
    if (error)
        std::rethrow_exception(error);
    return out;
}

} // namespace

std::vector<std::pair<OpenKey, Rational>> build_open_table(OpenEngine& engine,
                                                           const TableBounds& bounds, int jobs) {
    const Model& m = engine.model();
    const Geometry& g = m.geom;
    std::vector<OpenKey> keys;
    for (const auto& beta : enumerate_rel_upto(g, bounds.max_energy)) {
        enumerate_multisets(m.coh.K(), bounds.max_ell, [&](const std::vector<int>& cons) {
            long long total = 0;
            for (int c : cons)
                total += m.coh.deg(c);
            long long rhs = g.n - 3 + g.maslov(beta) + 2LL * (long long)cons.size() - total;
            if (g.n == 1) {
                // k drops out of the degree equation; enumerate it directly
                if (rhs != 0)
                    return;
                for (int k = 0; k <= bounds.max_k; ++k)
                    keys.push_back(OpenKey{beta, k, sort_constraints(m.coh, cons)});
                return;
            }
            if (rhs < 0 || rhs % (g.n - 1) != 0)
                return;
            long long k = rhs / (g.n - 1);
            if (k > bounds.max_k)
                return;
            keys.push_back(OpenKey{beta, (int)k, sort_constraints(m.coh, cons)});
        });
    }
    return run_jobs(std::move(keys), jobs, [&](const OpenKey& k) { return engine.compute_key(k); });
}

std::vector<std::pair<ClosedKey, Rational>> build_closed_table(ClosedEngine& engine,
                                                               const TableBounds& bounds,
                                                               int jobs) {
    const Model& m = engine.model();
    const Geometry& g = m.geom;
    std::vector<ClosedKey> keys;
    for (const auto& beta : enumerate_abs_upto(g, bounds.max_energy)) {
        enumerate_multisets(m.coh.K(), bounds.max_ell, [&](const std::vector<int>& cons) {
            long long total = 0;
            for (int c : cons)
                total += m.coh.deg(c);
            if (2LL * g.n - 6 + 2 * g.chern(beta) + 2LL * (long long)cons.size() != total)
                return;
            keys.push_back(engine.canonical(beta, cons));
        });
    }
    return run_jobs(std::move(keys), jobs,
                    [&](const ClosedKey& k) { return engine.compute_key(k); });
}

} // namespace ogw
