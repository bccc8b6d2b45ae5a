#pragma once

// Multi-indices over n complex coordinates, and the small combinatorial
// helpers (binomials, factorials, fixed-degree enumeration) shared by the
// polynomial and harmonic-space code.

#include "tsm/rational.hpp"

#include <numeric>
#include <sstream>
#include <string>
#include <vector>

namespace tsm {

using MultiIndex = std::vector<int>;

inline int degree(const MultiIndex& a) { return std::accumulate(a.begin(), a.end(), 0); }

inline BigInt factorial(int n) {
    BigInt f = 1;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

inline BigInt binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    BigInt b = 1;
    for (int j = 1; j <= k; ++j) {
        b *= n - k + j;
        b /= j;
    }
    return b;
}

// All multi-indices of length n with |a| = d, in ascending lexicographic
// order; this is the canonical enumeration used everywhere a monomial list
// needs a deterministic order.
inline std::vector<MultiIndex> multi_indices(int n, int d) {
    std::vector<MultiIndex> out;
    if (n <= 0) return out;
    MultiIndex cur(n, 0);
    // Recursive descent over positions; position i takes values 0..remaining.
    auto rec = [&](auto&& self, int pos, int remaining) -> void {
        if (pos == n - 1) {
            cur[pos] = remaining;
            out.push_back(cur);
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            cur[pos] = v;
            self(self, pos + 1, remaining - v);
        }
    };
    rec(rec, 0, d);
    return out;
}

inline std::string format_multi_index(const MultiIndex& a) {
    std::string s;
    for (size_t i = 0; i < a.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(a[i]);
    }
    return s;
}

inline MultiIndex parse_multi_index(const std::string& s) {
    MultiIndex out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) throw std::invalid_argument("malformed multi-index: '" + s + "'");
        out.push_back(std::stoi(tok));
    }
    if (out.empty()) throw std::invalid_argument("empty multi-index");
    for (int v : out)
        if (v < 0) throw std::invalid_argument("negative multi-index entry in '" + s + "'");
    return out;
}

}  // namespace tsm
