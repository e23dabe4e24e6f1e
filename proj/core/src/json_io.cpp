#include "qp/json_io.hpp"

namespace qp {

namespace {

[[noreturn]] void bad(const std::string& what) { throw input_error("json schema: " + what); }

const Json& need(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
    return j.at(key);
}

std::vector<int> path_from_json(const Json& j, const Quiver& q) {
    if (!j.is_array()) bad("'path'/'cycle' must be an array of arrow ids");
    std::vector<int> out;
    for (const auto& a : j) out.push_back(q.arrow_index(a.get<std::string>()));
    return out;
}

} // namespace

Json quiver_to_json(const Quiver& q) {
    Json j;
    j["nodes"] = q.nodes();
    j["arrows"] = Json::array();
    for (const auto& a : q.arrows())
        j["arrows"].push_back({{"id", a.id}, {"src", q.node_id(a.src)}, {"tgt", q.node_id(a.tgt)}});
    return j;
}

QuiverPtr quiver_from_json(const Json& j) {
    std::vector<std::string> nodes;
    for (const auto& n : need(j, "nodes")) nodes.push_back(n.get<std::string>());
    std::vector<std::tuple<std::string, std::string, std::string>> arrows;
    for (const auto& a : need(j, "arrows"))
        arrows.push_back({need(a, "id").get<std::string>(), need(a, "src").get<std::string>(),
                          need(a, "tgt").get<std::string>()});
    return Quiver::make(std::move(nodes), std::move(arrows));
}

Json coeff_to_json(const Rat& c) { return Json{{"re", c.str()}, {"im", "0"}}; }
Json coeff_to_json(const GaussRat& c) { return Json{{"re", c.re.str()}, {"im", c.im.str()}}; }
Json coeff_to_json(const CD& c) { return Json{{"re", c.real()}, {"im", c.imag()}}; }

GaussRat exact_coeff_from_json(const Json& j) {
    auto one = [](const Json& v) -> Rat {
        if (v.is_string()) return Rat::parse(v.get<std::string>());
        if (v.is_number_integer()) return Rat(v.get<std::int64_t>());
        bad("exact coefficients must be strings like \"1/2\" or integers");
    };
    Rat re = j.contains("re") ? one(j.at("re")) : Rat(0);
    Rat im = j.contains("im") ? one(j.at("im")) : Rat(0);
    return {re, im};
}

CD cd_coeff_from_json(const Json& j) {
    auto one = [](const Json& v) -> double {
        if (v.is_number()) return v.get<double>();
        if (v.is_string()) return Rat::parse(v.get<std::string>()).to_double();
        bad("complex coefficients must be numbers");
    };
    return {j.contains("re") ? one(j.at("re")) : 0.0, j.contains("im") ? one(j.at("im")) : 0.0};
}

namespace {

template <class C> C coeff_from_json_as(const Json& j);
template <> Rat coeff_from_json_as<Rat>(const Json& j) {
    auto g = exact_coeff_from_json(j);
    if (!g.im.is_zero()) bad("expected a real rational coefficient");
    return g.re;
}
template <> GaussRat coeff_from_json_as<GaussRat>(const Json& j) { return exact_coeff_from_json(j); }
template <> CD coeff_from_json_as<CD>(const Json& j) { return cd_coeff_from_json(j); }

} // namespace

template <class C>
Json series_to_json(const TruncSeries<C>& s) {
    Json j;
    j["trunc"] = s.trunc();
    j["terms"] = Json::array();
    const Quiver& q = *s.quiver();
    std::vector<int> digits;
    s.for_each([&](int d, PathKey k, const C& c) {
        Json t;
        t["path"] = Json::array();
        if (d == 0) {
            t["node"] = q.node_id(int(k));
        } else {
            decode_path(q, d, k, digits);
            for (int a : digits) t["path"].push_back(q.arrow(a).id);
        }
        auto cc = coeff_to_json(c);
        t["re"] = cc["re"];
        t["im"] = cc["im"];
        j["terms"].push_back(std::move(t));
    });
    return j;
}

template <class C>
TruncSeries<C> series_from_json(const Json& j, QuiverPtr q) {
    const int N = need(j, "trunc").get<int>();
    std::vector<std::tuple<int, PathKey, C>> acc;
    for (const auto& t : need(j, "terms")) {
        auto arrows = path_from_json(need(t, "path"), *q);
        const C c = coeff_from_json_as<C>(t);
        if (arrows.empty()) {
            if (!t.contains("node")) bad("degree-0 term needs a 'node'");
            acc.emplace_back(0, PathKey(q->node_index(t.at("node").get<std::string>())), c);
        } else {
            for (size_t i = 0; i + 1 < arrows.size(); ++i)
                if (q->tgt(arrows[i]) != q->src(arrows[i + 1])) bad("non-composable path");
            if (int(arrows.size()) > N) bad("path longer than the truncation degree");
            acc.emplace_back(int(arrows.size()), encode_path(*q, arrows), c);
        }
    }
    return TruncSeries<C>::from_accum(std::move(q), N, std::move(acc));
}

template <class C>
Json potential_to_json(const CyclicPotential<C>& p) {
    Json j;
    j["trunc"] = p.trunc();
    j["terms"] = Json::array();
    const Quiver& q = *p.quiver();
    std::vector<int> digits;
    p.for_each([&](int d, PathKey k, const C& c) {
        Json t;
        t["cycle"] = Json::array();
        if (d == 0) {
            t["node"] = q.node_id(int(k));
        } else {
            decode_path(q, d, k, digits);
            for (int a : digits) t["cycle"].push_back(q.arrow(a).id);
        }
        auto cc = coeff_to_json(c);
        t["re"] = cc["re"];
        t["im"] = cc["im"];
        j["terms"].push_back(std::move(t));
    });
    return j;
}

template <class C>
CyclicPotential<C> potential_from_json(const Json& j, QuiverPtr q) {
    const int N = need(j, "trunc").get<int>();
    std::vector<std::tuple<int, PathKey, C>> acc;
    for (const auto& t : need(j, "terms")) {
        auto arrows = path_from_json(need(t, "cycle"), *q);
        const C c = coeff_from_json_as<C>(t);
        if (arrows.empty()) {
            if (!t.contains("node")) bad("degree-0 term needs a 'node'");
            acc.emplace_back(0, PathKey(q->node_index(t.at("node").get<std::string>())), c);
        } else {
            for (size_t i = 0; i + 1 < arrows.size(); ++i)
                if (q->tgt(arrows[i]) != q->src(arrows[i + 1])) bad("non-composable cycle");
            if (q->tgt(arrows.back()) != q->src(arrows.front())) bad("cycle does not close up");
            if (int(arrows.size()) > N) bad("cycle longer than the truncation degree");
            acc.emplace_back(int(arrows.size()), encode_path(*q, arrows), c);
        }
    }
    return CyclicPotential<C>::from_accum(std::move(q), N, std::move(acc));
}

template <class C>
Json qppair_to_json(const QPPair<C>& qp) {
    Json j;
    j["quiver"] = quiver_to_json(*qp.quiver);
    j["potential"] = potential_to_json(qp.potential);
    return j;
}

template <class C>
QPPair<C> qppair_from_json(const Json& j) {
    auto q = quiver_from_json(need(j, "quiver"));
    auto p = potential_from_json<C>(need(j, "potential"), q);
    return {std::move(q), std::move(p)};
}

template <class C>
Json endo_to_json(const Endomorphism<C>& h) {
    Json j;
    j["trunc"] = h.trunc();
    j["images"] = Json::object();
    for (int a = 0; a < h.quiver()->arrow_count(); ++a)
        j["images"][h.quiver()->arrow(a).id] = series_to_json(h.image(a));
    return j;
}

template <class C>
Endomorphism<C> endo_from_json(const Json& j, QuiverPtr q) {
    const int N = need(j, "trunc").get<int>();
    std::vector<TruncSeries<C>> imgs(size_t(q->arrow_count()), TruncSeries<C>(q, N));
    const auto& images = need(j, "images");
    for (auto it = images.begin(); it != images.end(); ++it)
        imgs[size_t(q->arrow_index(it.key()))] = series_from_json<C>(it.value(), q);
    return Endomorphism<C>::from_images(std::move(q), N, std::move(imgs));
}

namespace {

template <class F>
Json module_to_json_impl(const MatrixRep<F>& rep) {
    Json j;
    j["dim"] = Json::object();
    const Quiver& q = *rep.quiver;
    for (int i = 0; i < q.node_count(); ++i) j["dim"][q.node_id(i)] = rep.dim[i];
    j["matrices"] = Json::object();
    for (int a = 0; a < q.arrow_count(); ++a) {
        Json m = Json::array();
        for (int r = 0; r < rep.mats[size_t(a)].rows; ++r) {
            Json row = Json::array();
            for (int c = 0; c < rep.mats[size_t(a)].cols; ++c) {
                if constexpr (std::is_same_v<F, Rat>) {
                    row.push_back(rep.mats[size_t(a)].at(r, c).str());
                } else {
                    const CD v = rep.mats[size_t(a)].at(r, c);
                    row.push_back(Json{{"re", v.real()}, {"im", v.imag()}});
                }
            }
            m.push_back(std::move(row));
        }
        j["matrices"][q.arrow(a).id] = std::move(m);
    }
    return j;
}

template <class F>
MatrixRep<F> module_from_json_impl(const Json& j, QuiverPtr q) {
    DimVector dim = DimVector::zeros(q->node_count());
    const auto& dj = need(j, "dim");
    for (auto it = dj.begin(); it != dj.end(); ++it) dim[q->node_index(it.key())] = it.value().get<std::int64_t>();
    std::vector<Mat<F>> mats;
    const auto& mj = need(j, "matrices");
    for (int a = 0; a < q->arrow_count(); ++a) {
        const auto& id = q->arrow(a).id;
        const int nrows = int(dim[q->tgt(a)]);
        const int ncols = int(dim[q->src(a)]);
        Mat<F> m(nrows, ncols);
        if (mj.contains(id)) {
            const auto& rows = mj.at(id);
            if (int(rows.size()) != m.rows) bad("matrix row count mismatch for arrow '" + id + "'");
            for (int r = 0; r < m.rows; ++r) {
                if (int(rows[size_t(r)].size()) != m.cols) bad("matrix column count mismatch");
                for (int c = 0; c < m.cols; ++c) {
                    const auto& v = rows[size_t(r)][size_t(c)];
                    if constexpr (std::is_same_v<F, Rat>) {
                        m.at(r, c) = v.is_string() ? Rat::parse(v.get<std::string>())
                                                   : Rat(v.get<std::int64_t>());
                    } else {
                        m.at(r, c) = v.is_object() ? cd_coeff_from_json(v) : CD(v.get<double>(), 0.0);
                    }
                }
            }
        }
        mats.push_back(std::move(m));
    }
    return MatrixRep<F>::make(std::move(q), std::move(dim), std::move(mats));
}

} // namespace

Json module_to_json(const MatrixRep<Rat>& rep) { return module_to_json_impl(rep); }
MatrixRep<Rat> module_from_json(const Json& j, QuiverPtr q) { return module_from_json_impl<Rat>(j, std::move(q)); }
Json module_to_json(const MatrixRep<CD>& rep) { return module_to_json_impl(rep); }
MatrixRep<CD> module_cd_from_json(const Json& j, QuiverPtr q) { return module_from_json_impl<CD>(j, std::move(q)); }

namespace {
const char* provenance_str(FProvenance p) {
    switch (p) {
        case FProvenance::FiniteFieldCount: return "finite-field polynomial count";
        case FProvenance::DirectEnumeration: return "direct enumeration";
        case FProvenance::UserWeight: return "user-supplied weight";
    }
    return "?";
}
FProvenance provenance_parse(const std::string& s) {
    if (s == "finite-field polynomial count") return FProvenance::FiniteFieldCount;
    if (s == "direct enumeration") return FProvenance::DirectEnumeration;
    if (s == "user-supplied weight") return FProvenance::UserWeight;
    bad("unknown provenance '" + s + "'");
}
Json dimvec_to_json(const DimVector& v, const Quiver& q) {
    Json d = Json::object();
    for (int i = 0; i < q.node_count(); ++i) d[q.node_id(i)] = v[i];
    return d;
}
DimVector dimvec_from_json(const Json& j, const Quiver& q) {
    DimVector v = DimVector::zeros(q.node_count());
    for (auto it = j.begin(); it != j.end(); ++it) v[q.node_index(it.key())] = it.value().get<std::int64_t>();
    return v;
}
} // namespace

Json fseries_to_json(const FSeries& f, const Quiver& q) {
    Json j;
    j["entries"] = Json::array();
    for (const auto& [v, e] : f.entries)
        j["entries"].push_back(Json{{"dim", dimvec_to_json(v, q)},
                                    {"chi", e.chi},
                                    {"provenance", provenance_str(e.provenance)}});
    j["rejected"] = Json::array();
    for (const auto& v : f.rejected) j["rejected"].push_back(dimvec_to_json(v, q));
    return j;
}

FSeries fseries_from_json(const Json& j, const Quiver& q) {
    FSeries f;
    f.nodes = q.node_count();
    for (const auto& e : need(j, "entries")) {
        FSeriesEntry entry;
        entry.chi = need(e, "chi").get<std::int64_t>();
        entry.provenance =
            e.contains("provenance") ? provenance_parse(e.at("provenance").get<std::string>())
                                     : FProvenance::UserWeight;
        f.entries[dimvec_from_json(need(e, "dim"), q)] = entry;
    }
    return f;
}

DerivationFamily derivation_family_from_json(const Json& j, QuiverPtr q) {
    const int N = need(j, "trunc").get<int>();
    DerivationFamily f(q, N);
    const auto& fields = need(j, "fields");
    for (auto it = fields.begin(); it != fields.end(); ++it) {
        const int a = q->arrow_index(it.key());
        for (const auto& t : it.value()) {
            auto arrows = path_from_json(need(t, "path"), *q);
            if (arrows.empty()) bad("derivation paths have length >= 1");
            std::vector<CD> coeffs;
            for (const auto& c : need(t, "poly")) {
                if (c.is_array() && c.size() == 2)
                    coeffs.push_back(CD(c[0].get<double>(), c[1].get<double>()));
                else if (c.is_number())
                    coeffs.push_back(CD(c.get<double>(), 0.0));
                else
                    bad("'poly' entries must be numbers or [re,im] pairs");
            }
            f.add_term(a, int(arrows.size()), encode_path(*q, arrows), TimePoly(std::move(coeffs)));
        }
    }
    return f;
}

Json torus_to_json(const TorusElement& u) {
    Json j;
    j["terms"] = Json::array();
    for (const auto& [k, c] : u.terms())
        j["terms"].push_back(Json{{"x", k.x}, {"y", k.y}, {"coeff", c.str()}});
    return j;
}

TorusElement torus_from_json(const Json& j, TorusCtxPtr ctx) {
    TorusElement u(ctx);
    for (const auto& t : need(j, "terms")) {
        ExpKey k;
        for (const auto& v : need(t, "x")) k.x.push_back(v.get<std::int32_t>());
        for (const auto& v : need(t, "y")) k.y.push_back(v.get<std::int32_t>());
        if (int(k.x.size()) != ctx->nodes() || int(k.y.size()) != ctx->nodes())
            bad("torus exponent length mismatch");
        u.add_term(std::move(k), Rat::parse(need(t, "coeff").get<std::string>()));
    }
    return u;
}

ClassMap class_map_from_json(const Json& j, int nodes) {
    ClassMap m;
    auto rows = [&](const char* key) {
        std::vector<std::vector<std::int32_t>> out;
        for (const auto& row : need(j, key)) {
            std::vector<std::int32_t> r;
            for (const auto& v : row) r.push_back(v.get<std::int32_t>());
            if (int(r.size()) != nodes) bad("class map row length mismatch");
            out.push_back(std::move(r));
        }
        if (int(out.size()) != nodes) bad("class map needs one row per generator");
        return out;
    };
    m.x_rows = rows("x_rows");
    m.y_rows = rows("y_rows");
    return m;
}

Json growth_to_json(const GrowthReport& r) {
    Json j;
    j["l1"] = r.l1;
    if (!r.l1_exact.empty()) j["l1_exact"] = r.l1_exact;
    j["roots"] = r.roots;
    j["c_hat"] = r.c_hat;
    j["geometric_up_to_trunc"] = r.geometric_up_to_trunc;
    j["roots_monotone_increasing"] = r.roots_monotone_increasing;
    return j;
}

// explicit instantiations
template Json series_to_json<Rat>(const TruncSeries<Rat>&);
template Json series_to_json<GaussRat>(const TruncSeries<GaussRat>&);
template Json series_to_json<CD>(const TruncSeries<CD>&);
template TruncSeries<Rat> series_from_json<Rat>(const Json&, QuiverPtr);
template TruncSeries<GaussRat> series_from_json<GaussRat>(const Json&, QuiverPtr);
template TruncSeries<CD> series_from_json<CD>(const Json&, QuiverPtr);
template Json potential_to_json<Rat>(const CyclicPotential<Rat>&);
template Json potential_to_json<GaussRat>(const CyclicPotential<GaussRat>&);
template Json potential_to_json<CD>(const CyclicPotential<CD>&);
template CyclicPotential<Rat> potential_from_json<Rat>(const Json&, QuiverPtr);
template CyclicPotential<GaussRat> potential_from_json<GaussRat>(const Json&, QuiverPtr);
template CyclicPotential<CD> potential_from_json<CD>(const Json&, QuiverPtr);
template Json qppair_to_json<Rat>(const QPPair<Rat>&);
template Json qppair_to_json<GaussRat>(const QPPair<GaussRat>&);
template QPPair<Rat> qppair_from_json<Rat>(const Json&);
template QPPair<GaussRat> qppair_from_json<GaussRat>(const Json&);
template Json endo_to_json<Rat>(const Endomorphism<Rat>&);
template Json endo_to_json<GaussRat>(const Endomorphism<GaussRat>&);
template Json endo_to_json<CD>(const Endomorphism<CD>&);
template Endomorphism<Rat> endo_from_json<Rat>(const Json&, QuiverPtr);
template Endomorphism<GaussRat> endo_from_json<GaussRat>(const Json&, QuiverPtr);
template Endomorphism<CD> endo_from_json<CD>(const Json&, QuiverPtr);

} // namespace qp
