#pragma once

#include "qp/quiver.hpp"

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

namespace qp {

// Paths of degree d >= 1 are encoded as base-k numbers over arrow indices,
// first arrow in the most significant digit; the lazy path e_i of degree 0 is
// encoded by the node index. Key order therefore matches lexicographic order
// on arrow sequences, which is the canonical order used for cyclic words.
using PathKey = std::uint64_t;

inline void check_key_capacity(const Quiver& q, int degree) {
    if (degree > q.key_capacity())
        throw overflow_error("truncation degree " + std::to_string(degree) +
                             " exceeds the path-key capacity of this quiver");
}

inline PathKey encode_path(const Quiver& q, std::span<const int> arrows) {
    PathKey k = 0;
    for (int a : arrows) k = k * std::uint64_t(q.arrow_count()) + std::uint64_t(a);
    return k;
}

inline void decode_path(const Quiver& q, int degree, PathKey key, std::vector<int>& out) {
    out.resize(size_t(degree));
    const auto k = std::uint64_t(q.arrow_count());
    for (int i = degree - 1; i >= 0; --i) {
        out[size_t(i)] = int(key % k);
        key /= k;
    }
}

inline int first_arrow(const Quiver& q, int degree, PathKey key) {
    return int(key / q.pow_arrows(degree - 1));
}
inline int last_arrow(const Quiver& q, PathKey key) {
    return int(key % std::uint64_t(q.arrow_count()));
}

/// Source node of a path; degree 0 keys are node indices.
inline int path_src(const Quiver& q, int degree, PathKey key) {
    if (degree == 0) return int(key);
    return q.src(first_arrow(q, degree, key));
}
inline int path_tgt(const Quiver& q, int degree, PathKey key) {
    if (degree == 0) return int(key);
    return q.tgt(last_arrow(q, key));
}

inline bool path_composable(const Quiver& q, int d, PathKey key) {
    if (d <= 1) return true;
    const auto k = std::uint64_t(q.arrow_count());
    PathKey rest = key;
    int prev = -1;
    for (int i = d - 1; i >= 0; --i) {
        const int a = int(rest % k);
        rest /= k;
        if (prev >= 0 && q.tgt(a) != q.src(prev)) return false;
        prev = a;
    }
    return true;
}

inline PathKey concat_keys(const Quiver& q, PathKey u, int dv, PathKey v) {
    return u * q.pow_arrows(dv) + v;
}

inline bool path_closed(const Quiver& q, int d, PathKey key) {
    return path_src(q, d, key) == path_tgt(q, d, key);
}

/// One left rotation of a closed word: a_1 a_2 ... a_d -> a_2 ... a_d a_1.
inline PathKey rotate_once(const Quiver& q, int d, PathKey key) {
    const auto top = q.pow_arrows(d - 1);
    return (key % top) * std::uint64_t(q.arrow_count()) + key / top;
}

/// Canonical form of a closed word: the numerically (= lexicographically)
/// minimal rotation.
inline PathKey canonical_rotation(const Quiver& q, int d, PathKey key) {
    if (d <= 1) return key;
    PathKey best = key, cur = key;
    for (int i = 1; i < d; ++i) {
        cur = rotate_once(q, d, cur);
        best = std::min(best, cur);
    }
    return best;
}

/// All -distinct- rotations of a closed word (the canonical word repeats with
/// period d / r where r is the count returned here).
inline void distinct_rotations(const Quiver& q, int d, PathKey key, std::vector<PathKey>& out) {
    out.clear();
    PathKey cur = key;
    for (int i = 0; i < d; ++i) {
        if (std::find(out.begin(), out.end(), cur) == out.end()) out.push_back(cur);
        cur = rotate_once(q, d, cur);
    }
}

/// All composable paths grouped by degree (degree 0 holds the node keys).
/// Guarded against explosion; intended for desk-scale quivers.
inline std::vector<std::vector<PathKey>> enumerate_paths(const Quiver& q, int max_degree,
                                                         std::size_t limit = std::size_t(1) << 24) {
    check_key_capacity(q, max_degree);
    std::vector<std::vector<PathKey>> out(size_t(max_degree) + 1);
    for (int i = 0; i < q.node_count(); ++i) out[0].push_back(PathKey(i));
    std::size_t total = out[0].size();
    for (int d = 1; d <= max_degree; ++d) {
        const auto& prev = out[size_t(d - 1)];
        auto& cur = out[size_t(d)];
        for (PathKey k : prev) {
            const int node = d == 1 ? int(k) : path_tgt(q, d - 1, k);
            for (int a = 0; a < q.arrow_count(); ++a) {
                if (q.src(a) != node) continue;
                cur.push_back(d == 1 ? PathKey(a)
                                     : k * std::uint64_t(q.arrow_count()) + std::uint64_t(a));
            }
        }
        std::sort(cur.begin(), cur.end());
        total += cur.size();
        if (total > limit) throw math_error("path enumeration exceeds the configured budget");
    }
    return out;
}

inline std::string path_str(const Quiver& q, int d, PathKey key) {
    if (d == 0) return "e_" + q.node_id(int(key));
    std::vector<int> arr;
    decode_path(q, d, key, arr);
    std::string s;
    for (size_t i = 0; i < arr.size(); ++i) {
        if (i) s += ".";
        s += q.arrow(arr[i]).id;
    }
    return s;
}

} // namespace qp
