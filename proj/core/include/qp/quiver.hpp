#pragma once

#include "qp/errors.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace qp {

struct Arrow {
    std::string id;
    int src = 0; // node index
    int tgt = 0;
};

/// Finite directed multigraph with string node/arrow ids. Internal indices
/// follow declaration order; the arrow order seeds every deterministic
/// tie-break downstream. Immutable after construction.
class Quiver {
public:
    static std::shared_ptr<const Quiver>
    make(std::vector<std::string> nodes,
         std::vector<std::tuple<std::string, std::string, std::string>> arrows);

    int node_count() const { return int(nodes_.size()); }
    int arrow_count() const { return int(arrows_.size()); }

    const std::string& node_id(int i) const { return nodes_[size_t(i)]; }
    const Arrow& arrow(int i) const { return arrows_[size_t(i)]; }
    const std::vector<std::string>& nodes() const { return nodes_; }
    const std::vector<Arrow>& arrows() const { return arrows_; }

    int node_index(const std::string& id) const;
    int arrow_index(const std::string& id) const;

    int src(int a) const { return arrows_[size_t(a)].src; }
    int tgt(int a) const { return arrows_[size_t(a)].tgt; }

    bool operator==(const Quiver& o) const;

    // Radix powers used by the path-key encoding; degree must stay within
    // key_capacity() for any series on this quiver. Quivers with at most one
    // arrow have the single key 0 in every degree.
    std::uint64_t pow_arrows(int d) const { return arrows_.size() <= 1 ? 1 : powk_[size_t(d)]; }
    int key_capacity() const { return key_capacity_; }

private:
    std::vector<std::string> nodes_;
    std::vector<Arrow> arrows_;
    std::unordered_map<std::string, int> node_idx_;
    std::unordered_map<std::string, int> arrow_idx_;
    std::vector<std::uint64_t> powk_;
    int key_capacity_ = 0;
};

using QuiverPtr = std::shared_ptr<const Quiver>;

inline bool same_quiver(const QuiverPtr& a, const QuiverPtr& b) {
    return a == b || (a && b && *a == *b);
}

/// Node-indexed nonnegative integers.
struct DimVector {
    std::vector<std::int64_t> v;

    DimVector() = default;
    explicit DimVector(std::vector<std::int64_t> entries) : v(std::move(entries)) {}
    static DimVector zeros(int n) { return DimVector(std::vector<std::int64_t>(size_t(n), 0)); }

    std::int64_t operator[](int i) const { return v[size_t(i)]; }
    std::int64_t& operator[](int i) { return v[size_t(i)]; }
    int size() const { return int(v.size()); }
    std::int64_t total() const;

    bool operator==(const DimVector& o) const { return v == o.v; }
    bool operator<(const DimVector& o) const { return v < o.v; }
};

/// Arrow-count pairing chi(i,j) = #{a : i -> j} and its antisymmetrization.
struct EulerForm {
    int n = 0;
    std::vector<std::int64_t> chi_table; // row-major n x n

    static EulerForm of(const Quiver& q);

    std::int64_t chi(int i, int j) const { return chi_table[size_t(i) * size_t(n) + size_t(j)]; }
    std::int64_t chibar(int i, int j) const { return chi(i, j) - chi(j, i); }

    std::int64_t chibar(std::span<const std::int64_t> v, std::span<const std::int64_t> w) const;
};

/// (has loop, has 2-cycle).
std::pair<bool, bool> has_loops_or_two_cycles(const Quiver& q);

} // namespace qp
