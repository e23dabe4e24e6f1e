#pragma once

#include "qp/flow.hpp"
#include "qp/jacobi.hpp"
#include "qp/mutation.hpp"
#include "qp/repmod.hpp"
#include "qp/series.hpp"
#include "qp/torus.hpp"

#include <json.hpp>

namespace qp {

using Json = nlohmann::ordered_json;

// quiver: {"nodes":["1","2"], "arrows":[{"id":"a","src":"1","tgt":"2"}]}
Json quiver_to_json(const Quiver& q);
QuiverPtr quiver_from_json(const Json& j);

// coefficients: exact values as strings {"re":"1/2","im":"0"},
// complex floating as numbers {"re":0.5,"im":0.0}
Json coeff_to_json(const Rat& c);
Json coeff_to_json(const GaussRat& c);
Json coeff_to_json(const CD& c);
GaussRat exact_coeff_from_json(const Json& j);
CD cd_coeff_from_json(const Json& j);

// series: {"trunc":N,"terms":[{"path":["a","b"],...coeff...},
//                             {"path":[],"node":"1",...coeff...}]}
template <class C> Json series_to_json(const TruncSeries<C>& s);
template <class C> TruncSeries<C> series_from_json(const Json& j, QuiverPtr q);

// potentials use "cycle" keys, stored canonically
template <class C> Json potential_to_json(const CyclicPotential<C>& p);
template <class C> CyclicPotential<C> potential_from_json(const Json& j, QuiverPtr q);

// {"quiver":Q,"potential":P}
template <class C> Json qppair_to_json(const QPPair<C>& qp);
template <class C> QPPair<C> qppair_from_json(const Json& j);

// {"trunc":N,"images":{"a":SERIES,...}}
template <class C> Json endo_to_json(const Endomorphism<C>& h);
template <class C> Endomorphism<C> endo_from_json(const Json& j, QuiverPtr q);

// module: {"dim":{"1":2},"matrices":{"a":[["0","1"],["0","0"]]}}
Json module_to_json(const MatrixRep<Rat>& rep);
MatrixRep<Rat> module_from_json(const Json& j, QuiverPtr q);
Json module_to_json(const MatrixRep<CD>& rep);
MatrixRep<CD> module_cd_from_json(const Json& j, QuiverPtr q);

// fseries: {"entries":[{"dim":{"1":1},"chi":2,"provenance":"..."}],"rejected":[...]}
Json fseries_to_json(const FSeries& f, const Quiver& q);
FSeries fseries_from_json(const Json& j, const Quiver& q);

// derivation family: {"trunc":N,"fields":{"t":[{"path":["t"],"poly":[[re,im],...]}]}}
DerivationFamily derivation_family_from_json(const Json& j, QuiverPtr q);

// torus elements: {"terms":[{"x":[1,0],"y":[0,1],"coeff":"1"}]}
Json torus_to_json(const TorusElement& u);
TorusElement torus_from_json(const Json& j, TorusCtxPtr ctx);

ClassMap class_map_from_json(const Json& j, int nodes);

Json growth_to_json(const GrowthReport& r);

} // namespace qp
