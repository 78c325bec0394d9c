#pragma once

// Monte-Carlo estimation with a deterministic reduction.
//
// Samples are grouped into fixed blocks of 4096; workers claim blocks,
// and block sums are combined in block order at the end.  Together with
// one Philox stream per sample this makes every estimate bit-identical
// for any worker count.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "isolab/rng.hpp"

namespace isolab {

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    long long n_samples = 0;
    uint64_t seed = 0;
};

namespace detail {
constexpr long long kBlockSize = 4096;
}

inline int default_workers() {
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// sample_fn(rng, index) -> double.  Indices run over [0, n).
//
// Each block keeps a running mean and sum of squared deviations
// (Welford); blocks are merged in index order with the exact pooling
// rule.  This is stable under cancellation — a constant sampler yields
// the constant exactly and a standard error of exactly zero.
template <class SampleFn>
Estimate mc_estimate(uint64_t seed, long long n, SampleFn&& sample_fn, int workers = 0) {
    if (workers <= 0) workers = default_workers();
    const long long n_blocks = (n + detail::kBlockSize - 1) / detail::kBlockSize;
    std::vector<double> block_mean(static_cast<size_t>(n_blocks), 0.0);
    std::vector<double> block_m2(static_cast<size_t>(n_blocks), 0.0);
    std::vector<long long> block_n(static_cast<size_t>(n_blocks), 0);

    std::atomic<long long> next_block{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&]() {
        try {
            for (;;) {
                long long b = next_block.fetch_add(1);
                if (b >= n_blocks || failed.load(std::memory_order_relaxed)) return;
                long long lo = b * detail::kBlockSize;
                long long hi = std::min(n, lo + detail::kBlockSize);
                double mean = 0.0, m2 = 0.0;
                for (long long i = lo; i < hi; ++i) {
                    Philox rng(seed, static_cast<uint64_t>(i));
                    double v = sample_fn(rng, i);
                    double delta = v - mean;
                    mean += delta / static_cast<double>(i - lo + 1);
                    m2 += delta * (v - mean);
                }
                block_mean[static_cast<size_t>(b)] = mean;
                block_m2[static_cast<size_t>(b)] = m2;
                block_n[static_cast<size_t>(b)] = hi - lo;
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
            failed.store(true, std::memory_order_relaxed);
        }
    };

    if (workers == 1 || n_blocks == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        int k = static_cast<int>(std::min<long long>(workers, n_blocks));
        pool.reserve(static_cast<size_t>(k));
        for (int i = 0; i < k; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    double mean = 0.0, m2 = 0.0;
    long long count = 0;
    for (long long b = 0; b < n_blocks; ++b) {
        const double mb = block_mean[static_cast<size_t>(b)];
        const double m2b = block_m2[static_cast<size_t>(b)];
        const long long nb = block_n[static_cast<size_t>(b)];
        if (nb == 0) continue;
        if (count == 0) {
            mean = mb;
            m2 = m2b;
            count = nb;
            continue;
        }
        const double delta = mb - mean;
        const long long total = count + nb;
        mean += delta * static_cast<double>(nb) / static_cast<double>(total);
        m2 += m2b + delta * delta * static_cast<double>(count) *
                        static_cast<double>(nb) / static_cast<double>(total);
        count = total;
    }

    Estimate e;
    e.n_samples = n;
    e.seed = seed;
    e.mean = mean;
    if (n > 1) {
        double var = m2 / static_cast<double>(n - 1);
        if (var < 0.0) var = 0.0;
        e.std_error = std::sqrt(var / static_cast<double>(n));
    }
    return e;
}

// Mean and standard error of a correlated series via batch means.
inline Estimate batch_means(const std::vector<double>& series, int n_batches = 32,
                            uint64_t seed = 0) {
    Estimate e;
    e.seed = seed;
    e.n_samples = static_cast<long long>(series.size());
    if (series.empty()) return e;
    if (static_cast<int>(series.size()) < n_batches) n_batches = 1;

    const size_t m = series.size() / static_cast<size_t>(n_batches);
    double total = 0.0;
    for (double v : series) total += v;
    e.mean = total / static_cast<double>(series.size());

    if (n_batches < 2 || m == 0) return e;
    std::vector<double> bm(static_cast<size_t>(n_batches), 0.0);
    for (int b = 0; b < n_batches; ++b) {
        double s = 0.0;
        for (size_t i = 0; i < m; ++i) s += series[static_cast<size_t>(b) * m + i];
        bm[static_cast<size_t>(b)] = s / static_cast<double>(m);
    }
    double mu = 0.0;
    for (double v : bm) mu += v;
    mu /= n_batches;
    double var = 0.0;
    for (double v : bm) var += (v - mu) * (v - mu);
    var /= (n_batches - 1);
    e.std_error = std::sqrt(var / n_batches);
    return e;
}

}  // namespace isolab
