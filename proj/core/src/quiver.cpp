#include "qp/quiver.hpp"

#include <limits>

namespace qp {

std::shared_ptr<const Quiver>
Quiver::make(std::vector<std::string> nodes,
             std::vector<std::tuple<std::string, std::string, std::string>> arrows) {
    auto q = std::make_shared<Quiver>();
    q->nodes_ = std::move(nodes);
    for (int i = 0; i < int(q->nodes_.size()); ++i) {
        if (q->nodes_[size_t(i)].empty()) throw input_error("empty node id");
        if (!q->node_idx_.emplace(q->nodes_[size_t(i)], i).second)
            throw input_error("duplicate node id '" + q->nodes_[size_t(i)] + "'");
    }
    for (auto& [id, src, tgt] : arrows) {
        if (id.empty()) throw input_error("empty arrow id");
        auto si = q->node_idx_.find(src);
        auto ti = q->node_idx_.find(tgt);
        if (si == q->node_idx_.end()) throw input_error("arrow '" + id + "': unknown source node '" + src + "'");
        if (ti == q->node_idx_.end()) throw input_error("arrow '" + id + "': unknown target node '" + tgt + "'");
        if (!q->arrow_idx_.emplace(id, int(q->arrows_.size())).second)
            throw input_error("duplicate arrow id '" + id + "'");
        q->arrows_.push_back(Arrow{id, si->second, ti->second});
    }

    const auto k = std::uint64_t(q->arrows_.size());
    q->powk_.push_back(1);
    if (k >= 2) {
        while (q->powk_.back() <= std::numeric_limits<std::uint64_t>::max() / k / 2)
            q->powk_.push_back(q->powk_.back() * k);
        q->key_capacity_ = int(q->powk_.size()) - 1;
    } else {
        // 0 or 1 arrows: keys are always 0, any degree fits
        q->key_capacity_ = std::numeric_limits<int>::max() / 2;
    }
    return q;
}

int Quiver::node_index(const std::string& id) const {
    auto it = node_idx_.find(id);
    if (it == node_idx_.end()) throw input_error("unknown node id '" + id + "'");
    return it->second;
}

int Quiver::arrow_index(const std::string& id) const {
    auto it = arrow_idx_.find(id);
    if (it == arrow_idx_.end()) throw input_error("unknown arrow id '" + id + "'");
    return it->second;
}

bool Quiver::operator==(const Quiver& o) const {
    if (nodes_ != o.nodes_) return false;
    if (arrows_.size() != o.arrows_.size()) return false;
    for (size_t i = 0; i < arrows_.size(); ++i) {
        if (arrows_[i].id != o.arrows_[i].id || arrows_[i].src != o.arrows_[i].src ||
            arrows_[i].tgt != o.arrows_[i].tgt)
            return false;
    }
    return true;
}

std::int64_t DimVector::total() const {
    std::int64_t s = 0;
    for (auto x : v) s += x;
    return s;
}

EulerForm EulerForm::of(const Quiver& q) {
    EulerForm e;
    e.n = q.node_count();
    e.chi_table.assign(size_t(e.n) * size_t(e.n), 0);
    for (const auto& a : q.arrows()) e.chi_table[size_t(a.src) * size_t(e.n) + size_t(a.tgt)] += 1;
    return e;
}

std::int64_t EulerForm::chibar(std::span<const std::int64_t> v, std::span<const std::int64_t> w) const {
    std::int64_t s = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += v[size_t(i)] * chibar(i, j) * w[size_t(j)];
    return s;
}

std::pair<bool, bool> has_loops_or_two_cycles(const Quiver& q) {
    bool loop = false, two = false;
    for (const auto& a : q.arrows())
        if (a.src == a.tgt) loop = true;
    const auto e = EulerForm::of(q);
    for (int i = 0; i < e.n && !two; ++i)
        for (int j = i + 1; j < e.n; ++j)
            if (e.chi(i, j) > 0 && e.chi(j, i) > 0) { two = true; break; }
    return {loop, two};
}

} // namespace qp
