#pragma once

#include "qp/endo.hpp"
#include "qp/series.hpp"

#include <optional>

namespace qp {

template <class C>
struct QPPair {
    QuiverPtr quiver;
    CyclicPotential<C> potential;

    int trunc() const { return potential.trunc(); }
};

/// Arrow pairs (a: i->j, b: j->i) present in the quiver, i <= j, each pair once.
std::vector<std::pair<int, int>> two_cycle_pairs(const Quiver& q);

/// Arrow surgery at a node: in-arrows and out-arrows are reversed (suffix
/// "*"), every in-out passage gains a composite arrow "[in|out]", and each
/// length-2 passage through the node in each cyclic word is replaced by the
/// composite; the new potential is the rewritten one plus the cycles
/// [in|out] . out* . in*.
///
/// The output truncation equals the input truncation; it is the exact image
/// of the stored jet. When the input potential is itself the truncation of a
/// longer series, output degrees above ceil((N+1)/2) - 1 may be incomplete.
template <class C>
QPPair<C> premutate(const QPPair<C>& qp, int node);

template <class C>
struct SplittingReport {
    std::vector<std::pair<int, int>> removed_pairs; // (y, z) arrow indices on the input quiver
    Endomorphism<C> reducer;                        // on the input quiver; identity linear part on survivors
    QPPair<C> reduced;                              // on the quiver without the removed arrows
    bool two_cycles_in_reduced = false;             // 2-cycles carrying no degree-2 term may survive
};

/// Split off the trivial part: normalize the degree-2 pairing to sum y_i z_i,
/// then eliminate each pair from the higher terms by the iterative
/// automorphism updates H(y) += [d]g, H(z) += [d]f, where f and g come from
/// the rotation-balanced splitting F = y f + g z + u (each cyclic word spread
/// equally over its distinct rotations, x-initial rotations advanced to their
/// first y or z).
template <class C>
SplittingReport<C> split_trivial(const QPPair<C>& qp);

template <class C>
struct MutationResult {
    QPPair<C> premutated;
    SplittingReport<C> split;
    bool two_cycles_in_reduced = false;
};

template <class C>
MutationResult<C> mutate(const QPPair<C>& qp, int node);

struct ProbeHit {
    std::vector<std::string> sequence;                     // node ids mutated, in order
    std::vector<std::pair<std::string, std::string>> two_cycles; // surviving 2-cycle arrow ids
    bool degenerate_split = false;                         // splitting failed instead
};

struct ProbeReport {
    int depth = 0;
    std::vector<ProbeHit> hits;     // empty = nondegenerate up to the probed depth
    bool zero_potential_caveat = false;
};

/// Breadth-first search over mutation sequences of bounded length (skipping
/// immediate back-mutation), recording every sequence whose reduced part
/// retains a 2-cycle or fails to split.
template <class C>
ProbeReport nondegeneracy_probe(const QPPair<C>& qp, int depth);

} // namespace qp
