#include "qp/mutation.hpp"

#include <algorithm>
#include <deque>

namespace qp {

std::vector<std::pair<int, int>> two_cycle_pairs(const Quiver& q) {
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < q.arrow_count(); ++a)
        for (int b = a + 1; b < q.arrow_count(); ++b)
            if (q.src(a) == q.tgt(b) && q.tgt(a) == q.src(b) && q.src(a) != q.tgt(a))
                out.push_back({a, b});
    return out;
}

namespace {

bool node_on_two_cycle(const Quiver& q, int node) {
    for (auto [a, b] : two_cycle_pairs(q))
        if (q.src(a) == node || q.tgt(a) == node) return true;
    return false;
}

} // namespace

template <class C>
QPPair<C> premutate(const QPPair<C>& qp, int node) {
    const Quiver& q = *qp.quiver;
    const int N = qp.trunc();
    if (node < 0 || node >= q.node_count()) throw input_error("premutate: unknown node");
    for (int a = 0; a < q.arrow_count(); ++a)
        if (q.src(a) == node && q.tgt(a) == node)
            throw math_error("premutate: loop at node '" + q.node_id(node) + "'");
    if (node_on_two_cycle(q, node))
        throw math_error("premutate: node '" + q.node_id(node) + "' lies on a 2-cycle");

    std::vector<int> in, out, survivors;
    for (int a = 0; a < q.arrow_count(); ++a) {
        if (q.tgt(a) == node) in.push_back(a);
        else if (q.src(a) == node) out.push_back(a);
        else survivors.push_back(a);
    }

    // new arrow list: survivors, then starred reversals, then composites
    std::vector<std::tuple<std::string, std::string, std::string>> arrows;
    std::vector<int> survivor_new(size_t(q.arrow_count()), -1);
    for (int a : survivors) {
        survivor_new[size_t(a)] = int(arrows.size());
        arrows.push_back({q.arrow(a).id, q.node_id(q.src(a)), q.node_id(q.tgt(a))});
    }
    std::vector<int> star_new(size_t(q.arrow_count()), -1);
    for (int a = 0; a < q.arrow_count(); ++a) {
        if (q.tgt(a) != node && q.src(a) != node) continue;
        star_new[size_t(a)] = int(arrows.size());
        arrows.push_back({q.arrow(a).id + "*", q.node_id(q.tgt(a)), q.node_id(q.src(a))});
    }
    std::vector<std::vector<int>> comp_new(size_t(q.arrow_count()),
                                           std::vector<int>(size_t(q.arrow_count()), -1));
    for (int a : in)
        for (int b : out) {
            comp_new[size_t(a)][size_t(b)] = int(arrows.size());
            arrows.push_back({"[" + q.arrow(a).id + "|" + q.arrow(b).id + "]",
                              q.node_id(q.src(a)), q.node_id(q.tgt(b))});
        }
    auto nq = Quiver::make(q.nodes(), std::move(arrows));
    check_key_capacity(*nq, N);

    // rewrite each cyclic word: rotate off the node, contract in-out passages
    std::vector<std::tuple<int, PathKey, C>> acc;
    std::vector<int> digits, rew;
    qp.potential.for_each([&](int d, PathKey key, const C& c) {
        if (d == 0) {
            acc.emplace_back(0, key, c);
            return;
        }
        decode_path(q, d, key, digits);
        int shift = -1;
        for (int i = 0; i < d; ++i)
            if (q.src(digits[size_t(i)]) != node) { shift = i; break; }
        if (shift < 0) throw math_error("premutate: cyclic word supported entirely at the node");
        rew.clear();
        for (int i = 0; i < d;) {
            const int a = digits[size_t((i + shift) % d)];
            if (q.tgt(a) == node) {
                if (i + 1 >= d) throw math_error("premutate: unmatched passage through the node");
                const int b = digits[size_t((i + 1 + shift) % d)];
                rew.push_back(comp_new[size_t(a)][size_t(b)]);
                i += 2;
            } else {
                rew.push_back(survivor_new[size_t(a)]);
                i += 1;
            }
        }
        acc.emplace_back(int(rew.size()), encode_path(*nq, rew), c);
    });
    for (int a : in)
        for (int b : out) {
            std::vector<int> w = {comp_new[size_t(a)][size_t(b)], star_new[size_t(b)], star_new[size_t(a)]};
            if (3 <= N) acc.emplace_back(3, encode_path(*nq, w), coeff_traits<C>::one());
        }
    return {nq, CyclicPotential<C>::from_accum(nq, N, std::move(acc))};
}

namespace {

/// Rotation-balanced splitting of the words containing y or z (all words
/// except the exact yz term): F = y f + g z + u with F = -(potential - yz),
/// returning the degree-d parts of f and g.
template <class C>
void split_degree(const Quiver& q, const CyclicPotential<C>& pot, int y, int z, int d,
                  detail::TermVec<C>& fd, detail::TermVec<C>& gd) {
    fd.clear();
    gd.clear();
    if (d + 1 > pot.trunc()) return;
    std::vector<PathKey> rots;
    std::vector<int> digits;
    for (const auto& [key, c] : pot.terms(d + 1)) {
        decode_path(q, d + 1, key, digits);
        bool has = false;
        for (int a : digits)
            if (a == y || a == z) { has = true; break; }
        if (!has) continue;
        distinct_rotations(q, d + 1, key, rots);
        const C share = (-c) / C(std::int64_t(rots.size()));
        for (PathKey r : rots) {
            // advance an x-initial rotation to its first y or z
            decode_path(q, d + 1, r, digits);
            int pos = 0;
            while (digits[size_t(pos)] != y && digits[size_t(pos)] != z) ++pos;
            PathKey rest = 0;
            for (int i = 1; i <= d; ++i)
                rest = rest * std::uint64_t(q.arrow_count()) +
                       std::uint64_t(digits[size_t((pos + i) % (d + 1))]);
            if (digits[size_t(pos)] == y)
                fd.push_back({rest, share});
            else
                gd.push_back({rest, share});
        }
    }
    detail::sort_combine(fd);
    detail::sort_combine(gd);
}

} // namespace

template <class C>
SplittingReport<C> split_trivial(const QPPair<C>& qp) {
    static_assert(coeff_traits<C>::is_exact, "splitting requires exact coefficients");
    const QuiverPtr& qptr = qp.quiver;
    const Quiver& q = *qptr;
    const int N = qp.trunc();
    const int k = q.arrow_count();

    // degree-2 pairing data
    std::vector<std::vector<C>> pairing(size_t(k), std::vector<C>(size_t(k), C{}));
    std::vector<int> digits;
    for (const auto& [key, c] : qp.potential.terms(2)) {
        decode_path(q, 2, key, digits);
        if (digits[0] == digits[1])
            throw math_error("split_trivial: square term " + q.arrow(digits[0]).id + "^2 in the degree-2 part");
        pairing[size_t(digits[0])][size_t(digits[1])] = c;
        pairing[size_t(digits[1])][size_t(digits[0])] = c;
    }
    std::vector<bool> involved(size_t(k), false);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            if (!coeff_traits<C>::is_zero(pairing[size_t(a)][size_t(b)])) involved[size_t(a)] = true;

    auto linear = Endomorphism<C>::identity(qptr, N);
    std::vector<std::pair<int, int>> pairs;

    // Blocks between distinct nodes: normalize a maximal nondegenerate
    // sub-pairing to sum alpha_c beta_c and decouple the rest. With pivot rows
    // R, columns Cl and P = [[p11 p12],[p21 p22]] (p11 invertible, rank gives
    // p22 = p21 p11^-1 p12), the substitutions
    //   alpha_removed += -(p11^-T p21^T) alpha_surviving
    //   beta_removed  ->  p11^-1 beta_removed - p11^-1 p12 beta_surviving
    // fix every surviving arrow and leave the kernel directions uncoupled.
    for (int i = 0; i < q.node_count(); ++i) {
        for (int j = i + 1; j < q.node_count(); ++j) {
            std::vector<int> A, B;
            for (int a = 0; a < k; ++a) {
                if (!involved[size_t(a)]) continue;
                if (q.src(a) == i && q.tgt(a) == j) A.push_back(a);
                if (q.src(a) == j && q.tgt(a) == i) B.push_back(a);
            }
            if (A.empty() || B.empty()) continue;
            const int na = int(A.size()), nb = int(B.size());
            auto P = [&](int r, int c2) { return pairing[size_t(A[size_t(r)])][size_t(B[size_t(c2)])]; };

            // greedy pivot selection on a Schur-reduced copy
            std::vector<std::vector<C>> M(size_t(na), std::vector<C>(size_t(nb), C{}));
            for (int r = 0; r < na; ++r)
                for (int c2 = 0; c2 < nb; ++c2) M[size_t(r)][size_t(c2)] = P(r, c2);
            std::vector<int> R, Cl;
            std::vector<bool> rused(size_t(na), false), cused(size_t(nb), false);
            while (true) {
                int pr = -1, pc = -1;
                for (int r = 0; r < na && pr < 0; ++r) {
                    if (rused[size_t(r)]) continue;
                    for (int c2 = 0; c2 < nb; ++c2)
                        if (!cused[size_t(c2)] && !coeff_traits<C>::is_zero(M[size_t(r)][size_t(c2)])) {
                            pr = r;
                            pc = c2;
                            break;
                        }
                }
                if (pr < 0) break;
                rused[size_t(pr)] = cused[size_t(pc)] = true;
                R.push_back(pr);
                Cl.push_back(pc);
                const C inv = coeff_traits<C>::one() / M[size_t(pr)][size_t(pc)];
                for (int r = 0; r < na; ++r) {
                    if (rused[size_t(r)]) continue;
                    const C f = M[size_t(r)][size_t(pc)] * inv;
                    if (coeff_traits<C>::is_zero(f)) continue;
                    for (int c2 = 0; c2 < nb; ++c2)
                        if (!cused[size_t(c2)]) M[size_t(r)][size_t(c2)] -= f * M[size_t(pr)][size_t(c2)];
                }
            }
            const int rho = int(R.size());
            if (rho == 0) continue;
            std::vector<int> Rbar, Cbar;
            for (int r = 0; r < na; ++r)
                if (std::find(R.begin(), R.end(), r) == R.end()) Rbar.push_back(r);
            for (int c2 = 0; c2 < nb; ++c2)
                if (std::find(Cl.begin(), Cl.end(), c2) == Cl.end()) Cbar.push_back(c2);

            // p11^-1 by Gauss-Jordan
            std::vector<std::vector<C>> G(size_t(rho), std::vector<C>(size_t(2 * rho), C{}));
            for (int r = 0; r < rho; ++r) {
                for (int c2 = 0; c2 < rho; ++c2) G[size_t(r)][size_t(c2)] = P(R[size_t(r)], Cl[size_t(c2)]);
                G[size_t(r)][size_t(rho + r)] = coeff_traits<C>::one();
            }
            for (int col = 0; col < rho; ++col) {
                int piv = -1;
                for (int r = col; r < rho; ++r)
                    if (!coeff_traits<C>::is_zero(G[size_t(r)][size_t(col)])) { piv = r; break; }
                if (piv < 0)
                    throw math_error("split_trivial: pivot block is singular between nodes '" +
                                     q.node_id(i) + "' and '" + q.node_id(j) + "'");
                std::swap(G[size_t(piv)], G[size_t(col)]);
                const C dd = G[size_t(col)][size_t(col)];
                for (auto& x : G[size_t(col)]) x = x / dd;
                for (int r = 0; r < rho; ++r) {
                    if (r == col) continue;
                    const C f = G[size_t(r)][size_t(col)];
                    if (coeff_traits<C>::is_zero(f)) continue;
                    for (int cc = 0; cc < 2 * rho; ++cc) G[size_t(r)][size_t(cc)] -= f * G[size_t(col)][size_t(cc)];
                }
            }
            auto p11inv = [&](int r, int c2) { return G[size_t(r)][size_t(rho + c2)]; };

            // rank certificate: the Schur complement must vanish
            for (int r : Rbar)
                for (int c2 : Cbar) {
                    C s{};
                    for (int u = 0; u < rho; ++u)
                        for (int v = 0; v < rho; ++v) s += P(r, Cl[size_t(u)]) * p11inv(u, v) * P(R[size_t(v)], c2);
                    if (P(r, c2) != s)
                        throw math_error("split_trivial: inconsistent pairing rank between nodes '" +
                                         q.node_id(i) + "' and '" + q.node_id(j) + "'");
                }

            std::vector<TruncSeries<C>> imgs = linear.images();
            // alpha on removed rows: alpha_{R[u]} - sum over surviving rows r of
            // (p21 p11^-1)_{r u} alpha_r
            for (int u = 0; u < rho; ++u) {
                TruncSeries<C> im(qptr, N);
                im.mutable_terms(1).push_back({PathKey(A[size_t(R[size_t(u)])]), coeff_traits<C>::one()});
                for (int r : Rbar) {
                    C s{};
                    for (int v = 0; v < rho; ++v) s += P(r, Cl[size_t(v)]) * p11inv(v, u);
                    if (!coeff_traits<C>::is_zero(s))
                        im.mutable_terms(1).push_back({PathKey(A[size_t(r)]), -s});
                }
                im.normalize();
                imgs[size_t(A[size_t(R[size_t(u)])])] = std::move(im);
            }
            // beta on removed columns: p11^-1-combination minus p11^-1 p12 tail
            for (int u = 0; u < rho; ++u) {
                TruncSeries<C> im(qptr, N);
                for (int v = 0; v < rho; ++v) {
                    const C& s = p11inv(u, v);
                    if (!coeff_traits<C>::is_zero(s))
                        im.mutable_terms(1).push_back({PathKey(B[size_t(Cl[size_t(v)])]), s});
                }
                for (int c2 : Cbar) {
                    C s{};
                    for (int v = 0; v < rho; ++v) s += p11inv(u, v) * P(R[size_t(v)], c2);
                    if (!coeff_traits<C>::is_zero(s))
                        im.mutable_terms(1).push_back({PathKey(B[size_t(c2)]), -s});
                }
                im.normalize();
                imgs[size_t(B[size_t(Cl[size_t(u)])])] = std::move(im);
            }
            linear = Endomorphism<C>::from_images(qptr, N, std::move(imgs));
            for (int u = 0; u < rho; ++u)
                pairs.push_back({A[size_t(R[size_t(u)])], B[size_t(Cl[size_t(u)])]});
        }
    }

    // loop blocks: hyperbolic reduction of the zero-diagonal symmetric pairing
    for (int i = 0; i < q.node_count(); ++i) {
        std::vector<int> L;
        for (int a = 0; a < k; ++a)
            if (involved[size_t(a)] && q.src(a) == i && q.tgt(a) == i) L.push_back(a);
        if (L.empty()) continue;
        std::vector<std::vector<C>> S(L.size(), std::vector<C>(L.size(), C{}));
        for (size_t r = 0; r < L.size(); ++r)
            for (size_t c2 = 0; c2 < L.size(); ++c2) S[r][c2] = pairing[size_t(L[r])][size_t(L[c2])];
        std::vector<bool> done(L.size(), false);
        // substitution matrix E over the loop arrows, applied as l -> sum E[l][c] c
        std::vector<std::vector<C>> E(L.size(), std::vector<C>(L.size(), C{}));
        for (size_t r = 0; r < L.size(); ++r) E[r][r] = coeff_traits<C>::one();
        for (size_t yi = 0; yi < L.size(); ++yi) {
            if (done[yi]) continue;
            size_t zi = L.size();
            for (size_t c2 = yi + 1; c2 < L.size(); ++c2)
                if (!done[c2] && !coeff_traits<C>::is_zero(S[yi][c2])) { zi = c2; break; }
            if (zi == L.size()) {
                // all couplings of this loop were eliminated with earlier pairs
                done[yi] = true;
                continue;
            }
            // scale z so the (y,z) coefficient becomes 1
            const C s = S[yi][zi];
            for (size_t r = 0; r < L.size(); ++r) { S[r][zi] = S[r][zi] / s; S[zi][r] = S[zi][r] / s; }
            for (size_t c2 = 0; c2 < L.size(); ++c2) E[zi][c2] = E[zi][c2] / s;
            // l -> l - S[y][l] z - S[z][l] y for the remaining loops
            for (size_t li = 0; li < L.size(); ++li) {
                if (done[li] || li == yi || li == zi) continue;
                const C ay = S[yi][li], az = S[zi][li];
                if (!coeff_traits<C>::is_zero(ay))
                    for (size_t c2 = 0; c2 < L.size(); ++c2) E[li][c2] -= ay * E[zi][c2];
                if (!coeff_traits<C>::is_zero(az))
                    for (size_t c2 = 0; c2 < L.size(); ++c2) E[li][c2] -= az * E[yi][c2];
                // congruence update of S
                for (size_t r = 0; r < L.size(); ++r) {
                    S[r][li] = S[r][li] - ay * S[r][zi] - az * S[r][yi];
                }
                for (size_t c2 = 0; c2 < L.size(); ++c2) {
                    S[li][c2] = S[li][c2] - ay * S[zi][c2] - az * S[yi][c2];
                }
            }
            done[yi] = done[zi] = true;
            pairs.push_back({L[yi], L[zi]});
        }
        std::vector<TruncSeries<C>> imgs = linear.images();
        for (size_t r = 0; r < L.size(); ++r) {
            TruncSeries<C> im(qptr, N);
            for (size_t c2 = 0; c2 < L.size(); ++c2)
                if (!coeff_traits<C>::is_zero(E[r][c2]))
                    im.mutable_terms(1).push_back({PathKey(L[c2]), E[r][c2]});
            im.normalize();
            imgs[size_t(L[r])] = std::move(im);
        }
        linear = Endomorphism<C>::from_images(qptr, N, std::move(imgs));
    }

    std::sort(pairs.begin(), pairs.end());
    auto reducer = linear;
    auto current = reducer.apply(qp.potential);

    // the normalized degree-2 part must be exactly sum y z
    {
        auto expect = detail::TermVec<C>{};
        for (auto [y, z] : pairs)
            expect.push_back({canonical_rotation(q, 2, PathKey(std::uint64_t(y)) * std::uint64_t(k) + std::uint64_t(z)),
                              coeff_traits<C>::one()});
        detail::sort_combine(expect);
        if (current.terms(2) != expect)
            throw math_error("split_trivial: degree-2 normalization failed");
    }

    // eliminate each pair by the iterative separation updates; step d only
    // needs the potential to degree d+1, so the applies run on jets
    for (auto [y, z] : pairs) {
        auto base = current;
        auto H = Endomorphism<C>::identity(qptr, N);
        detail::TermVec<C> fd, gd;
        for (int d = 2; d <= N; ++d) {
            const int M = std::min(N, d + 1);
            auto cur = H.jet(M).apply(base.jet(M));
            split_degree(q, cur, y, z, d, fd, gd);
            if (fd.empty() && gd.empty()) continue;
            TruncSeries<C> dy(qptr, N), dz(qptr, N);
            dy.mutable_terms(d) = gd;
            dz.mutable_terms(d) = fd;
            if (!gd.empty()) H.add_to_image(y, dy);
            if (!fd.empty()) H.add_to_image(z, dz);
        }
        current = H.apply(base);
        reducer = H.compose(reducer);
        // every y/z word other than the exact pair terms must now be gone
        for (int d = 1; d <= N; ++d) {
            for (const auto& [key, c] : current.terms(d)) {
                decode_path(q, d, key, digits);
                bool has = false;
                for (int a : digits)
                    if (a == y || a == z) { has = true; break; }
                if (has && d != 2)
                    throw math_error("split_trivial: separation left a residue at degree " + std::to_string(d));
            }
        }
    }

    // drop the removed arrows
    std::vector<bool> removed(size_t(k), false);
    for (auto [y, z] : pairs) removed[size_t(y)] = removed[size_t(z)] = true;
    std::vector<std::tuple<std::string, std::string, std::string>> arrows;
    std::vector<int> new_index(size_t(k), -1);
    for (int a = 0; a < k; ++a) {
        if (removed[size_t(a)]) continue;
        new_index[size_t(a)] = int(arrows.size());
        arrows.push_back({q.arrow(a).id, q.node_id(q.src(a)), q.node_id(q.tgt(a))});
    }
    auto rq = Quiver::make(q.nodes(), std::move(arrows));
    std::vector<std::tuple<int, PathKey, C>> acc;
    std::vector<int> rew;
    current.for_each([&](int d, PathKey key, const C& c) {
        decode_path(q, d, key, digits);
        bool has = false;
        for (int a : digits)
            if (removed[size_t(a)]) { has = true; break; }
        if (has) {
            if (d != 2) throw math_error("split_trivial: removed arrow survives at degree " + std::to_string(d));
            return; // the exact y z terms
        }
        rew.clear();
        for (int a : digits) rew.push_back(new_index[size_t(a)]);
        acc.emplace_back(d, d == 0 ? key : encode_path(*rq, rew), c);
    });

    SplittingReport<C> rep;
    rep.removed_pairs = pairs;
    rep.reducer = std::move(reducer);
    rep.reduced = {rq, CyclicPotential<C>::from_accum(rq, N, std::move(acc))};
    rep.two_cycles_in_reduced = !two_cycle_pairs(*rq).empty();
    return rep;
}

template <class C>
MutationResult<C> mutate(const QPPair<C>& qp, int node) {
    MutationResult<C> res;
    res.premutated = premutate(qp, node);
    res.split = split_trivial(res.premutated);
    res.two_cycles_in_reduced = res.split.two_cycles_in_reduced;
    return res;
}

template <class C>
ProbeReport nondegeneracy_probe(const QPPair<C>& qp, int depth) {
    const Quiver& q0 = *qp.quiver;
    {
        auto [loops, two] = has_loops_or_two_cycles(q0);
        if (loops || two) throw math_error("nondegeneracy_probe: quiver has loops or 2-cycles");
    }
    ProbeReport rep;
    rep.depth = depth;
    rep.zero_potential_caveat = qp.potential.is_zero();

    struct State {
        QPPair<C> pair;
        std::vector<std::string> seq;
        int last = -1;
    };
    std::deque<State> queue;
    queue.push_back({qp, {}, -1});
    while (!queue.empty()) {
        State st = std::move(queue.front());
        queue.pop_front();
        if (int(st.seq.size()) >= depth) continue;
        const Quiver& q = *st.pair.quiver;
        for (int node = 0; node < q.node_count(); ++node) {
            if (node == st.last) continue;
            bool loop_at = false;
            for (int a = 0; a < q.arrow_count(); ++a)
                if (q.src(a) == node && q.tgt(a) == node) loop_at = true;
            if (loop_at || node_on_two_cycle(q, node)) continue;
            auto seq = st.seq;
            seq.push_back(q.node_id(node));
            try {
                auto res = mutate(st.pair, node);
                if (res.two_cycles_in_reduced) {
                    ProbeHit hit;
                    hit.sequence = seq;
                    for (auto [a, b] : two_cycle_pairs(*res.split.reduced.quiver))
                        hit.two_cycles.push_back({res.split.reduced.quiver->arrow(a).id,
                                                  res.split.reduced.quiver->arrow(b).id});
                    rep.hits.push_back(std::move(hit));
                }
                queue.push_back({std::move(res.split.reduced), std::move(seq), node});
            } catch (const math_error&) {
                ProbeHit hit;
                hit.sequence = seq;
                hit.degenerate_split = true;
                rep.hits.push_back(std::move(hit));
            }
        }
    }
    return rep;
}

template QPPair<Rat> premutate<Rat>(const QPPair<Rat>&, int);
template SplittingReport<Rat> split_trivial<Rat>(const QPPair<Rat>&);
template MutationResult<Rat> mutate<Rat>(const QPPair<Rat>&, int);
template ProbeReport nondegeneracy_probe<Rat>(const QPPair<Rat>&, int);
template QPPair<GaussRat> premutate<GaussRat>(const QPPair<GaussRat>&, int);
template SplittingReport<GaussRat> split_trivial<GaussRat>(const QPPair<GaussRat>&);
template MutationResult<GaussRat> mutate<GaussRat>(const QPPair<GaussRat>&, int);
template ProbeReport nondegeneracy_probe<GaussRat>(const QPPair<GaussRat>&, int);

} // namespace qp
