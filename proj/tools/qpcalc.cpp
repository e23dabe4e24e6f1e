// qpcalc: batch front end for quiver-with-potential calculus.
//
// Exit codes: 0 success, 1 input/schema error, 2 mathematical infeasibility.

#include "qp/json_io.hpp"
#include "qp/parallel.hpp"
#include "qp/trees.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>

using namespace qp;

namespace {

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw input_error("json parse error in '" + path + "': " + e.what());
    }
}

void emit(const Json& j, bool as_json, const std::string& text) {
    if (as_json)
        std::cout << j.dump(2) << "\n";
    else
        std::cout << text;
}

bool potential_is_real(const QPPair<GaussRat>& qp) {
    bool real = true;
    qp.potential.for_each([&](int, PathKey, const GaussRat& c) {
        if (!c.im.is_zero()) real = false;
    });
    return real;
}

QPPair<Rat> to_real(const QPPair<GaussRat>& qp) {
    std::vector<std::tuple<int, PathKey, Rat>> acc;
    qp.potential.for_each([&](int d, PathKey k, const GaussRat& c) { acc.emplace_back(d, k, c.re); });
    return {qp.quiver, CyclicPotential<Rat>::from_accum(qp.quiver, qp.potential.trunc(), std::move(acc))};
}

std::string describe_quiver(const Quiver& q) {
    std::string s = "quiver: nodes {";
    for (int i = 0; i < q.node_count(); ++i) s += (i ? "," : "") + q.node_id(i);
    s += "}, arrows {";
    for (int a = 0; a < q.arrow_count(); ++a)
        s += (a ? ", " : "") + q.arrow(a).id + ":" + q.node_id(q.src(a)) + "->" + q.node_id(q.tgt(a));
    return s + "}\n";
}

template <class C>
std::string describe_pair(const QPPair<C>& qp) {
    return describe_quiver(*qp.quiver) + "potential: " + qp.potential.str() + "\n";
}

// mutate / reduce / probe share the exact-coefficient dispatch
template <class C>
int run_mutate(const QPPair<C>& qp, int node, bool as_json) {
    auto res = mutate(qp, node);
    Json j;
    j["premutated"] = qppair_to_json(res.premutated);
    j["reduced"] = qppair_to_json(res.split.reduced);
    j["reducer"] = endo_to_json(res.split.reducer);
    j["removed_pairs"] = Json::array();
    for (auto [y, z] : res.split.removed_pairs)
        j["removed_pairs"].push_back(Json::array({res.premutated.quiver->arrow(y).id,
                                                  res.premutated.quiver->arrow(z).id}));
    j["two_cycles_in_reduced"] = res.two_cycles_in_reduced;
    std::string text = describe_pair(res.split.reduced);
    if (res.two_cycles_in_reduced) text += "note: reduced part contains 2-cycles\n";
    emit(j, as_json, text);
    return 0;
}

template <class C>
int run_reduce(const QPPair<C>& qp, bool as_json) {
    auto rep = split_trivial(qp);
    Json j;
    j["reduced"] = qppair_to_json(rep.reduced);
    j["reducer"] = endo_to_json(rep.reducer);
    j["removed_pairs"] = Json::array();
    for (auto [y, z] : rep.removed_pairs)
        j["removed_pairs"].push_back(Json::array({qp.quiver->arrow(y).id, qp.quiver->arrow(z).id}));
    j["two_cycles_in_reduced"] = rep.two_cycles_in_reduced;
    std::string text = describe_pair(rep.reduced);
    for (auto [y, z] : rep.removed_pairs)
        text += "removed pair: (" + qp.quiver->arrow(y).id + ", " + qp.quiver->arrow(z).id + ")\n";
    emit(j, as_json, text);
    return 0;
}

template <class C>
int run_probe(const QPPair<C>& qp, int depth, bool as_json) {
    auto rep = nondegeneracy_probe(qp, depth);
    Json j;
    j["depth"] = rep.depth;
    j["zero_potential_caveat"] = rep.zero_potential_caveat;
    j["hits"] = Json::array();
    for (const auto& h : rep.hits) {
        Json hit;
        hit["sequence"] = h.sequence;
        hit["two_cycles"] = Json::array();
        for (const auto& [a, b] : h.two_cycles) hit["two_cycles"].push_back(Json::array({a, b}));
        hit["degenerate_split"] = h.degenerate_split;
        j["hits"].push_back(std::move(hit));
    }
    std::string text;
    if (rep.hits.empty()) {
        text = "nondegenerate up to depth " + std::to_string(depth) + "\n";
    } else {
        for (const auto& h : rep.hits) {
            text += "2-cycle after sequence:";
            for (const auto& s : h.sequence) text += " " + s;
            if (h.degenerate_split) text += " (degenerate splitting)";
            text += "\n";
        }
    }
    if (rep.zero_potential_caveat)
        text += "note: zero potential, surviving 2-cycles carry no pairing term\n";
    emit(j, as_json, text);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact calculus for quivers with potentials"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string format = "text";
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json"}));
    unsigned seed = 1;
    app.add_option("--seed", seed, "seed for randomized checks");

    // mutate
    auto* cmd_mutate = app.add_subcommand("mutate", "DWZ mutation at a node");
    cmd_mutate->fallthrough();
    std::string mutate_node, mutate_file;
    int mutate_trunc = 6;
    cmd_mutate->add_option("--at", mutate_node, "node id")->required();
    cmd_mutate->add_option("--trunc", mutate_trunc, "truncation degree")->check(CLI::PositiveNumber);
    cmd_mutate->add_option("input", mutate_file, "qp-pair json file")->required();

    // reduce
    auto* cmd_reduce = app.add_subcommand("reduce", "split off the trivial part");
    cmd_reduce->fallthrough();
    std::string reduce_file;
    int reduce_trunc = 6;
    cmd_reduce->add_option("--trunc", reduce_trunc, "truncation degree")->check(CLI::PositiveNumber);
    cmd_reduce->add_option("input", reduce_file, "qp-pair json file")->required();

    // probe
    auto* cmd_probe = app.add_subcommand("probe", "nondegeneracy probe over mutation sequences");
    cmd_probe->fallthrough();
    std::string probe_file;
    int probe_depth = 2, probe_trunc = 6;
    cmd_probe->add_option("--depth", probe_depth, "sequence length bound");
    cmd_probe->add_option("--trunc", probe_trunc, "truncation degree")->check(CLI::PositiveNumber);
    cmd_probe->add_option("input", probe_file, "qp-pair json file")->required();

    // invert
    auto* cmd_invert = app.add_subcommand("invert", "composition inverse of an endomorphism");
    cmd_invert->fallthrough();
    std::string invert_quiver, invert_file;
    bool invert_trees = false;
    cmd_invert->add_option("--quiver", invert_quiver, "quiver json file")->required();
    cmd_invert->add_flag("--trees", invert_trees, "use the plane-binary-tree expansion");
    cmd_invert->add_option("input", invert_file, "endomorphism json file")->required();

    // jacobi
    auto* cmd_jacobi = app.add_subcommand("jacobi", "Jacobi ideal truncation report");
    cmd_jacobi->fallthrough();
    std::string jacobi_file;
    int jacobi_trunc = 6;
    bool jacobi_quasi = false;
    cmd_jacobi->add_option("--trunc", jacobi_trunc, "truncation degree")->check(CLI::PositiveNumber);
    cmd_jacobi->add_flag("--quasi", jacobi_quasi, "also test quasi-homogeneity");
    cmd_jacobi->add_option("input", jacobi_file, "qp-pair json file")->required();

    // flow
    auto* cmd_flow = app.add_subcommand("flow", "integrate a derivation family");
    cmd_flow->fallthrough();
    std::string flow_quiver, flow_field;
    double flow_from = 0.0, flow_to = 1.0;
    int flow_steps = 1000, flow_trunc = 6;
    cmd_flow->add_option("--quiver", flow_quiver, "quiver json file")->required();
    cmd_flow->add_option("--field", flow_field, "derivation family json file")->required();
    cmd_flow->add_option("--from", flow_from, "start time");
    cmd_flow->add_option("--to", flow_to, "end time");
    cmd_flow->add_option("--steps", flow_steps, "fixed step count");
    cmd_flow->add_option("--trunc", flow_trunc, "truncation degree")->check(CLI::PositiveNumber);

    // cs-check
    auto* cmd_cs = app.add_subcommand("cs-check", "trace function and gradient check");
    cmd_cs->fallthrough();
    std::string cs_potential, cs_module, cs_random;
    double cs_h = 1e-5, cs_tol = 1e-6;
    cmd_cs->add_option("--potential", cs_potential, "qp-pair json file")->required();
    cmd_cs->add_option("--module", cs_module, "module json file");
    cmd_cs->add_option("--random-nilpotent", cs_random,
                       "comma-separated dimension vector for a seeded random nilpotent module");
    cmd_cs->add_option("--tol-fd", cs_h, "finite-difference step");
    cmd_cs->add_option("--tol", cs_tol, "gradient vanishing tolerance");

    // fseries
    auto* cmd_fs = app.add_subcommand("fseries", "finite-field F-series of a module");
    cmd_fs->fallthrough();
    std::string fs_module, fs_primes = "2,3,5,7";
    double fs_budget = 1e7;
    cmd_fs->add_option("--module", fs_module, "module json file (with embedded quiver)")->required();
    std::string fs_quiver;
    cmd_fs->add_option("--quiver", fs_quiver, "quiver json file")->required();
    cmd_fs->add_option("--primes", fs_primes, "comma-separated primes");
    cmd_fs->add_option("--budget", fs_budget, "subspace enumeration budget");

    // torus
    auto* cmd_torus = app.add_subcommand("torus", "semiclassical torus operations");
    cmd_torus->fallthrough();
    auto* cmd_exchange = cmd_torus->add_subcommand("exchange", "iterate cluster exchanges");
    cmd_exchange->fallthrough();
    std::string ex_quiver, ex_seq;
    int ex_deg = 6;
    cmd_exchange->add_option("--quiver", ex_quiver, "quiver json file")->required();
    cmd_exchange->add_option("--seq", ex_seq, "comma-separated node ids")->required();
    cmd_exchange->add_option("--deg", ex_deg, "y-degree bound");
    auto* cmd_cc = cmd_torus->add_subcommand("cc", "character assembly from an F-series");
    cmd_cc->fallthrough();
    std::string cc_quiver, cc_g, cc_fseries, cc_classmap;
    int cc_deg = 8;
    cmd_cc->add_option("--quiver", cc_quiver, "quiver json file")->required();
    cmd_cc->add_option("--g", cc_g, "comma-separated x-exponent vector")->required();
    cmd_cc->add_option("--fseries", cc_fseries, "f-series json file")->required();
    cmd_cc->add_option("--class-map", cc_classmap, "class map json file (default: y identity)");
    cmd_cc->add_option("--deg", cc_deg, "y-degree bound");

    // growth
    auto* cmd_growth = app.add_subcommand("growth", "coefficient growth report");
    cmd_growth->fallthrough();
    std::string growth_quiver, growth_series, growth_potential;
    cmd_growth->add_option("--quiver", growth_quiver, "quiver json file");
    cmd_growth->add_option("--series", growth_series, "series json file");
    cmd_growth->add_option("--potential", growth_potential, "qp-pair json file");

    CLI11_PARSE(app, argc, argv);
    const bool as_json = format == "json";

    try {
        if (*cmd_mutate || *cmd_reduce || *cmd_probe) {
            const std::string file = *cmd_mutate ? mutate_file : *cmd_reduce ? reduce_file : probe_file;
            const int trunc = *cmd_mutate ? mutate_trunc : *cmd_reduce ? reduce_trunc : probe_trunc;
            auto qp_g = qppair_from_json<GaussRat>(read_json_file(file));
            if (qp_g.potential.trunc() != trunc)
                qp_g.potential = qp_g.potential.extended(trunc).jet(trunc);
            if (*cmd_mutate && !qp_g.potential.terms(qp_g.potential.trunc()).empty())
                std::cerr << "note: input has terms at the truncation degree; premutation output "
                             "degrees above half the truncation may be incomplete for truncated "
                             "inputs\n";
            const bool real = potential_is_real(qp_g);
            if (*cmd_mutate) {
                const int node = qp_g.quiver->node_index(mutate_node);
                return real ? run_mutate(to_real(qp_g), node, as_json)
                            : run_mutate(qp_g, node, as_json);
            }
            if (*cmd_reduce)
                return real ? run_reduce(to_real(qp_g), as_json) : run_reduce(qp_g, as_json);
            return real ? run_probe(to_real(qp_g), probe_depth, as_json)
                        : run_probe(qp_g, probe_depth, as_json);
        }

        if (*cmd_invert) {
            auto q = quiver_from_json(read_json_file(invert_quiver));
            auto h = endo_from_json<GaussRat>(read_json_file(invert_file), q);
            auto inv = invert_trees ? invert_by_trees(h) : h.invert();
            emit(endo_to_json(inv), as_json, [&] {
                std::string t;
                for (int a = 0; a < q->arrow_count(); ++a)
                    t += q->arrow(a).id + " -> " + inv.image(a).str() + "\n";
                return t;
            }());
            return 0;
        }

        if (*cmd_jacobi) {
            auto qp_g = qppair_from_json<GaussRat>(read_json_file(jacobi_file));
            if (qp_g.potential.trunc() != jacobi_trunc)
                qp_g.potential = qp_g.potential.extended(jacobi_trunc).jet(jacobi_trunc);
            if (qp_g.potential.ord() < 2)
                std::cerr << "warning: potential has order < 2\n";
            auto run = [&](auto qp) {
                auto jt = jacobi_truncation(qp.quiver, qp.potential, jacobi_trunc);
                auto cert = jt.determinacy_bound();
                Json j;
                j["quotient_dims"] = jt.quotient_dims();
                j["total_quotient_dim"] = cert.total_quotient_dim;
                j["dimension_exact"] = cert.dimension_exact;
                if (cert.r) {
                    j["certified_r"] = *cert.r;
                    j["determinacy_bound"] = *cert.determinacy_bound;
                }
                std::string text = "deg  paths  quotient\n";
                for (int d = 0; d <= jt.trunc(); ++d) {
                    char buf[64];
                    std::snprintf(buf, sizeof buf, "%3d  %5lld  %8lld\n", d,
                                  (long long)jt.path_count(d), (long long)jt.quotient_dim(d));
                    text += buf;
                }
                text += "total quotient dimension: " + std::to_string(cert.total_quotient_dim) +
                        (cert.dimension_exact ? "" : " (at truncation)") + "\n";
                if (cert.r)
                    text += "certificate: m^" + std::to_string(*cert.r) +
                            " inside the ideal; potential is " + std::to_string(*cert.determinacy_bound) +
                            "-determined\n";
                else
                    text += "no finiteness certificate within the truncation\n";
                if (jacobi_quasi) {
                    auto rep = quasi_homogeneous_test(jt);
                    j["quasi_homogeneous_at_truncation"] = rep.holds_at_truncation;
                    j["quasi_homogeneous_definitive"] = rep.definitive;
                    text += std::string("quasi-homogeneous at truncation: ") +
                            (rep.holds_at_truncation ? "yes" : "no") +
                            (rep.definitive ? "" : " (truncation-level only)") + "\n";
                }
                emit(j, as_json, text);
            };
            if (potential_is_real(qp_g)) run(to_real(qp_g)); else run(qp_g);
            return 0;
        }

        if (*cmd_flow) {
            auto q = quiver_from_json(read_json_file(flow_quiver));
            auto fam_json = read_json_file(flow_field);
            if (!fam_json.contains("trunc")) fam_json["trunc"] = flow_trunc;
            auto fam = derivation_family_from_json(fam_json, q);
            auto diag = integrate_with_halving(fam, flow_from, flow_to, flow_steps);
            Json j;
            j["endomorphism"] = endo_to_json(diag.state.endo);
            j["t"] = diag.state.t;
            j["step_halving_delta"] = diag.halving_delta;
            std::string text;
            for (int a = 0; a < q->arrow_count(); ++a)
                text += q->arrow(a).id + " -> " + diag.state.endo.image(a).str() + "\n";
            char buf[96];
            std::snprintf(buf, sizeof buf, "step-halving delta: %.3e\n", diag.halving_delta);
            text += buf;
            emit(j, as_json, text);
            return 0;
        }

        if (*cmd_cs) {
            auto qp_g = qppair_from_json<GaussRat>(read_json_file(cs_potential));
            auto phi = cyclic_class(series_cast<CD>(qp_g.potential.representative()));
            MatrixRep<CD> rep;
            if (!cs_module.empty()) {
                rep = module_cd_from_json(read_json_file(cs_module), qp_g.quiver);
            } else if (!cs_random.empty()) {
                DimVector dim = DimVector::zeros(qp_g.quiver->node_count());
                std::stringstream ss(cs_random);
                std::string tok;
                int i = 0;
                while (std::getline(ss, tok, ',')) {
                    if (i >= dim.size()) throw input_error("dimension vector too long");
                    dim[i++] = std::stol(tok);
                }
                std::mt19937_64 rng(seed);
                std::uniform_real_distribution<double> u(-1.0, 1.0);
                std::vector<int> offset(size_t(qp_g.quiver->node_count()) + 1, 0);
                for (int n = 0; n < qp_g.quiver->node_count(); ++n)
                    offset[size_t(n) + 1] = offset[size_t(n)] + int(dim[n]);
                std::vector<Mat<CD>> mats;
                for (int a = 0; a < qp_g.quiver->arrow_count(); ++a) {
                    Mat<CD> m(int(dim[qp_g.quiver->tgt(a)]), int(dim[qp_g.quiver->src(a)]));
                    for (int r = 0; r < m.rows; ++r)
                        for (int c = 0; c < m.cols; ++c)
                            if (offset[size_t(qp_g.quiver->tgt(a))] + r >
                                offset[size_t(qp_g.quiver->src(a))] + c)
                                m.at(r, c) = CD(u(rng), u(rng));
                    mats.push_back(std::move(m));
                }
                rep = MatrixRep<CD>::make(qp_g.quiver, dim, std::move(mats));
            } else {
                throw input_error("cs-check needs --module or --random-nilpotent");
            }
            if (!rep.nilpotent()) std::cerr << "warning: representation is not nilpotent\n";
            auto value = cs_evaluate(phi, rep);
            auto report = critical_point_check(phi, rep, cs_h, cs_tol);
            Json j;
            j["value"] = Json{{"re", value.real()}, {"im", value.imag()}};
            j["max_gradient_discrepancy"] = report.max_gradient_discrepancy;
            j["gradient_norm"] = report.gradient_norm;
            j["critical"] = report.algebraic_gradient_vanishes;
            char buf[256];
            std::snprintf(buf, sizeof buf,
                          "value = %.12g%+.12gi\nmax |fd - algebraic| = %.3e\n|gradient| = %.3e\n"
                          "critical point: %s\n",
                          value.real(), value.imag(), report.max_gradient_discrepancy,
                          report.gradient_norm, report.algebraic_gradient_vanishes ? "yes" : "no");
            emit(j, as_json, buf);
            return 0;
        }

        if (*cmd_fs) {
            auto q = quiver_from_json(read_json_file(fs_quiver));
            auto rep = module_from_json(read_json_file(fs_module), q);
            std::vector<std::int64_t> primes;
            std::stringstream ss(fs_primes);
            std::string tok;
            while (std::getline(ss, tok, ',')) primes.push_back(std::stoll(tok));
            auto fs = fseries(rep, primes, fs_budget);
            std::string text;
            for (const auto& [v, e] : fs.entries) {
                text += "chi(";
                for (int i = 0; i < v.size(); ++i) text += (i ? "," : "") + std::to_string(v[i]);
                text += ") = " + std::to_string(e.chi) + "\n";
            }
            if (!fs.rejected.empty())
                text += std::to_string(fs.rejected.size()) +
                        " dimension vector(s): count not polynomial at tested primes\n";
            emit(fseries_to_json(fs, *q), as_json, text);
            return 0;
        }

        if (*cmd_exchange) {
            auto q = quiver_from_json(read_json_file(ex_quiver));
            {
                auto [loops, two] = has_loops_or_two_cycles(*q);
                if (loops || two) throw math_error("exchange needs a loop-free, 2-cycle-free quiver");
            }
            auto ctx = TorusContext::make(q, ex_deg);
            std::vector<TorusElement> cluster;
            for (int i = 0; i < q->node_count(); ++i) cluster.push_back(TorusElement::x_gen(ctx, i));
            std::stringstream ss(ex_seq);
            std::string tok;
            Json j;
            j["steps"] = Json::array();
            std::string text;
            while (std::getline(ss, tok, ',')) {
                const int k = q->node_index(tok);
                cluster = cluster_exchange(cluster, k);
                Json step;
                step["at"] = tok;
                step["variable"] = torus_to_json(cluster[size_t(k)]);
                j["steps"].push_back(step);
                text += "x[" + tok + "] = " + cluster[size_t(k)].str() + "\n";
            }
            emit(j, as_json, text);
            return 0;
        }

        if (*cmd_cc) {
            auto q = quiver_from_json(read_json_file(cc_quiver));
            auto ctx = TorusContext::make(q, cc_deg);
            auto fs = fseries_from_json(read_json_file(cc_fseries), *q);
            std::vector<std::int32_t> g;
            std::stringstream ss(cc_g);
            std::string tok;
            while (std::getline(ss, tok, ',')) g.push_back(std::int32_t(std::stol(tok)));
            if (int(g.size()) != q->node_count()) throw input_error("--g length mismatch");
            ClassMap cls = cc_classmap.empty()
                               ? ClassMap::y_identity(q->node_count())
                               : class_map_from_json(read_json_file(cc_classmap), q->node_count());
            auto r = cc_character(ctx, std::move(g), fs, cls);
            emit(torus_to_json(r), as_json, r.str() + "\n");
            return 0;
        }

        if (*cmd_growth) {
            GrowthReport rep;
            if (!growth_potential.empty()) {
                auto qp_g = qppair_from_json<GaussRat>(read_json_file(growth_potential));
                rep = growth_report(qp_g.potential);
            } else if (!growth_series.empty() && !growth_quiver.empty()) {
                auto q = quiver_from_json(read_json_file(growth_quiver));
                auto s = series_from_json<GaussRat>(read_json_file(growth_series), q);
                rep = growth_report(s);
            } else {
                throw input_error("growth needs --potential or (--quiver and --series)");
            }
            std::string text = "deg  l1-sum        root\n";
            for (size_t d = 0; d < rep.l1.size(); ++d) {
                char buf[96];
                std::snprintf(buf, sizeof buf, "%3zu  %-12.6g  %.6g\n", d, rep.l1[d], rep.roots[d]);
                text += buf;
            }
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "C-hat = %.6g\ngeometric up to truncation: %s\nroot growth increasing: %s\n",
                          rep.c_hat, rep.geometric_up_to_trunc ? "yes" : "no",
                          rep.roots_monotone_increasing ? "yes" : "no");
            text += buf;
            emit(growth_to_json(rep), as_json, text);
            return 0;
        }

        throw input_error("no subcommand selected");
    } catch (const input_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const overflow_error& e) {
        std::cerr << "overflow: " << e.what() << "\n";
        return 2;
    } catch (const math_error& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
