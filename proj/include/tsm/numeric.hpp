#pragma once

// Deterministic numeric utilities shared by the quadrature and verification
// layers: fixed-order pairwise summation, a static-partition parallel loop
// whose result layout is independent of the thread count, and shortest
// round-trip formatting for doubles in exported artifacts.

#include <charconv>
#include <complex>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace tsm {

// Pairwise (recursive halving) summation with a fixed association order: the
// result depends only on the value array, never on how the values were
// produced, which is what makes multithreaded runs byte-reproducible.
inline std::complex<double> pairwise_sum(const std::complex<double>* v, size_t count) {
    if (count <= 8) {
        std::complex<double> s = 0.0;
        for (size_t i = 0; i < count; ++i) s += v[i];
        return s;
    }
    const size_t h = count / 2;
    return pairwise_sum(v, h) + pairwise_sum(v + h, count - h);
}

inline double pairwise_sum(const double* v, size_t count) {
    if (count <= 8) {
        double s = 0.0;
        for (size_t i = 0; i < count; ++i) s += v[i];
        return s;
    }
    const size_t h = count / 2;
    return pairwise_sum(v, h) + pairwise_sum(v + h, count - h);
}

inline std::complex<double> pairwise_sum(const std::vector<std::complex<double>>& v) {
    return pairwise_sum(v.data(), v.size());
}

inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

// Thread-count resolution: an explicit positive request wins, then the
// TSM_THREADS environment variable, then 1.  The count never changes computed
// bytes -- only wall time -- because every parallel loop writes its results
// into preassigned slots and all reductions happen serially afterwards.
inline int resolve_threads(int requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("TSM_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 1;
}

// Runs fn(i) for i in [0, count) across a static partition.  Exceptions from
// workers are captured and the first one (lowest partition index) rethrown.
inline void parallel_for(size_t count, int threads, const std::function<void(size_t)>& fn) {
    threads = std::max(1, threads);
    if (threads == 1 || count <= 1) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const size_t t = std::min<size_t>(threads, count);
    std::vector<std::exception_ptr> errors(t);
    std::vector<std::thread> pool;
    pool.reserve(t);
    for (size_t w = 0; w < t; ++w) {
        const size_t lo = count * w / t, hi = count * (w + 1) / t;
        pool.emplace_back([&, lo, hi, w] {
            try {
                for (size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

// Shortest round-trip decimal form of a double (std::to_chars), used for all
// exported CSV/JSON numbers so artifacts are bitwise stable.
inline std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    if (res.ec != std::errc())
        throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, res.ptr);
}

}  // namespace tsm
