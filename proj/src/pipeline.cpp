#include "pipeline.hpp"

#include <cmath>

#include "errors.hpp"
#include "gamma.hpp"
#include "measure.hpp"
#include "structure.hpp"
#include "subgroup.hpp"
#include "util.hpp"

namespace gca {

namespace {

json ids_of(const Graph& g, const std::vector<int>& vertices) {
    json a = json::array();
    for (int v : vertices) a.push_back(g.vertex_id(v));
    return a;
}

json input_block(const Graph& g) {
    json b = json::object();
    b["digest"] = g.digest();
    b["vertices"] = g.vertex_count();
    b["arrows"] = g.arrow_count();
    if (g.omega()) {
        json o = json::object();
        o["name"] = g.omega()->name;
        o["witness"] = g.omega()->witness;
        b["omega"] = o;
    } else {
        b["omega"] = nullptr;
    }
    return b;
}

json structure_block(const Graph& g, const StructureReport& s) {
    json b = json::object();
    b["is_cofinal"] = s.is_cofinal;
    b["every_loop_has_exit"] = s.every_loop_has_exit;
    b["is_simple"] = s.is_simple;
    b["nw_vertices"] = ids_of(g, s.nw_vertices);
    b["nw_arrow_count"] = int(s.nw_arrows.size());
    b["nw_hereditary"] = s.nw_hereditary;
    b["sinks"] = ids_of(g, s.sinks);
    b["scc_count"] = int(s.scc_partition.size());
    return b;
}

const char* verdict_name(KmsVerdict v) {
    switch (v) {
        case KmsVerdict::conservative: return "Conservative";
        case KmsVerdict::dissipative: return "Dissipative";
        case KmsVerdict::no_kms_weight_from_nw: return "NoKmsWeightFromNW";
        case KmsVerdict::nw_empty: return "NwEmpty";
    }
    return "?";
}

json classification_block(const Graph& g, const Classification& c) {
    json b = json::object();
    b["verdict"] = verdict_name(c.verdict);
    if (c.verdict != KmsVerdict::nw_empty) {
        b["rho"] = c.rho;
        b["base_vertex"] = g.vertex_id(c.base_vertex);
        b["return_series_terms"] = int(c.partial_sums.size());
        b["return_series_partial_sum"] = c.partial_sums.back();
        if (!c.root_seq.empty()) b["return_series_last_root"] = c.root_seq.back();
        if (c.tail_limit_estimate) b["return_series_tail_limit"] = *c.tail_limit_estimate;
    }
    for (const auto& n : c.notes) b["notes"].push_back(n);
    return b;
}

json harmonic_block(const Graph& g, const HarmonicResult& h) {
    json b = json::object();
    b["beta"] = h.beta;
    b["kind"] = h.kind == HarmonicKind::harmonic ? "harmonic" : "almost-harmonic";
    b["strictly_positive"] = h.strictly_positive;
    b["max_residual"] = h.max_residual;
    json vals = json::object();
    for (int v = 0; v < g.vertex_count(); ++v) vals[g.vertex_id(v)] = h.values[v];
    b["values"] = vals;
    for (const auto& n : h.notes) b["notes"].push_back(n);
    return b;
}

json group_block(const Graph* g, const RealSubgroup& rs) {
    json b = json::object();
    switch (rs.kind) {
        case RealSubgroup::Kind::zero:
            b["kind"] = "Zero";
            break;
        case RealSubgroup::Kind::cyclic: {
            b["kind"] = "Cyclic";
            std::string name = g && g->omega() ? g->omega()->name : "w";
            b["step_exact"] = rs.step->str(name);
            b["step_numeric"] = rs.numeric_step;
            break;
        }
        case RealSubgroup::Kind::dense: {
            b["kind"] = "Dense";
            std::string name = g && g->omega() ? g->omega()->name : "w";
            json w = json::array();
            w.push_back(rs.dense_witness->first.str(name));
            w.push_back(rs.dense_witness->second.str(name));
            b["incommensurable_witness"] = w;
            break;
        }
    }
    return b;
}

json factor_block(const FactorType& t) {
    json b = json::object();
    b["type"] = t.kind == FactorType::Kind::type_iii_one ? "III_1" : "III_lambda";
    b["lambda"] = t.lambda;
    b["label"] = t.label;
    return b;
}

void finish(Report& r, std::vector<std::string> warnings) {
    json w = json::array();
    for (auto& s : warnings) w.push_back(s);
    r.doc["warnings"] = w;
}

// Oracle agreement at the first NW vertex, walk cap 10, beta factored out.
bool oracle_agrees(const Graph& g) {
    std::vector<int> nw = non_wandering(g);
    RealSubgroup lattice = subgroup_closure(cycle_lattice_generators(g), 1.0,
                                            g.omega_witness());
    RealSubgroup walked = closed_walk_oracle(g, nw.front(), 10);
    return groups_equal(lattice, walked);
}

}  // namespace

Report run_check(const Graph& g) {
    Report r = make_report();
    r.doc["input"] = input_block(g);
    r.doc["structure"] = structure_block(g, analyze_structure(g));
    finish(r, {});
    return r;
}

Report run_spectral(const Graph& g, double beta) {
    Report r = make_report();
    r.doc["input"] = input_block(g);
    double rho = nw_rho(g, beta);
    json b = json::object();
    b["beta"] = beta;
    b["rho"] = rho;
    b["nw_blocks"] = int(nw_blocks(g).blocks.size());
    r.doc["spectral"] = b;
    finish(r, {});
    return r;
}

Report run_critical(const Graph& g, const CriticalOptions& opts) {
    Report r = make_report();
    r.doc["input"] = input_block(g);
    CriticalResult c = critical_beta(g, opts);
    json b = json::object();
    b["beta_min"] = opts.beta_min;
    b["beta_max"] = opts.beta_max;
    b["tol"] = opts.tol;
    b["critical_beta"] = c.beta0;
    b["rho_at_critical"] = c.rho_at_beta0;
    b["monotone"] = c.monotone_route;
    b["sign_change_cells"] = c.sign_change_cells;
    r.doc["spectral"] = b;
    finish(r, c.warnings);
    return r;
}

Report run_harmonic(const Graph& g, double beta) {
    Report r = make_report();
    r.doc["input"] = input_block(g);
    r.doc["harmonic"] = harmonic_block(g, harmonic_vector(g, beta));
    finish(r, {});
    return r;
}

Report run_classify(const Graph& g, double beta) {
    Report r = make_report();
    r.doc["input"] = input_block(g);
    Classification c = classify(g, beta);
    json b = classification_block(g, c);
    json out = json::object();
    out["beta"] = beta;
    for (auto it = b.begin(); it != b.end(); ++it) out[it.key()] = it.value();
    r.doc["classification"] = out;
    finish(r, c.gate_warnings);
    return r;
}

Report run_gamma(const Graph& g, std::optional<double> beta, bool verify) {
    Report r = make_report();
    r.doc["input"] = input_block(g);
    std::vector<std::string> warnings;

    double b = 0.0;
    if (beta) {
        b = *beta;
    } else {
        CriticalResult c = critical_beta(g, {});
        b = c.beta0;
        for (auto& w : c.warnings) warnings.push_back(w);
        json sp = json::object();
        sp["critical_beta"] = c.beta0;
        sp["rho_at_critical"] = c.rho_at_beta0;
        r.doc["spectral"] = sp;
    }

    json gb = json::object();
    gb["beta"] = b;
    require_invariant_context(g);
    Classification cls = classify(g, b);
    for (auto& w : cls.gate_warnings) warnings.push_back(w);
    if (cls.verdict == KmsVerdict::dissipative) {
        // Only an upper bound is known for dissipative weights; say so
        // rather than refuse.
        RealSubgroup rs = connes_upper_bound(g, b);
        gb["group"] = group_block(&g, rs);
        gb["bound_only"] = true;
        warnings.push_back(
            "the weight at beta = " + fmt15(b) +
            " is dissipative: the reported group is only an upper bound for the "
            "invariant, whose exact value is not determined here");
        if (rs.kind != RealSubgroup::Kind::zero) gb["factor_bound"] = factor_block(factor_type(rs));
    } else {
        RealSubgroup rs = connes_invariant(g, b);
        gb["group"] = group_block(&g, rs);
        gb["factor"] = factor_block(factor_type(rs));
        if (verify) gb["verified"] = oracle_agrees(g);
    }
    r.doc["gamma"] = gb;
    finish(r, warnings);
    return r;
}

Report run_measure(const Graph& g, double beta, const std::string& path_spec) {
    Report r = make_report();
    r.doc["input"] = input_block(g);
    Path p = parse_path(g, path_spec);
    HarmonicResult h = harmonic_vector(g, beta);
    json b = json::object();
    b["beta"] = beta;
    b["path"] = path_str(g, p);
    b["source"] = g.vertex_id(path_source(g, p));
    b["range"] = g.vertex_id(path_range(g, p));
    PotValue f = path_potential(g, p);
    b["potential_exact"] = f.str(g.omega() ? g.omega()->name : "w");
    b["potential_numeric"] = f.numeric(g.omega_witness());
    b["psi_range"] = h.values[path_range(g, p)];
    b["cylinder_measure"] = cylinder_measure(g, beta, h.values, p);
    r.doc["measure"] = b;
    r.doc["harmonic"] = harmonic_block(g, h);
    finish(r, {});
    return r;
}

Report run_simulate(const Graph& g, double beta, const std::string& vertex_id,
                    int steps, std::int64_t samples, std::uint64_t seed, int workers) {
    Report r = make_report();
    r.doc["input"] = input_block(g);
    int start = g.vertex_index(vertex_id);
    HarmonicResult h = harmonic_vector(g, beta);
    MarkovKernel k = markov_kernel(g, beta, h.values);
    PathSample s = sample_paths(g, k, start, steps, samples, seed, workers);

    json b = json::object();
    b["beta"] = beta;
    b["start"] = vertex_id;
    b["steps"] = steps;
    b["samples"] = samples;
    b["seed"] = std::uint64_t(seed);
    b["workers"] = workers;
    b["return_fraction"] = s.return_fraction;
    b["return_events"] = s.return_events;
    json visits = json::object();
    for (int v = 0; v < g.vertex_count(); ++v) visits[g.vertex_id(v)] = s.visit_counts[v];
    b["visits"] = visits;
    json cyls = json::array();
    for (const auto& [path, count] : s.cylinder_counts) {
        json c = json::object();
        c["path"] = path;
        c["count"] = count;
        c["frequency"] = double(count) / double(s.samples);
        Path cp = parse_path(g, path);
        c["exact_conditional"] = cylinder_measure(g, beta, h.values, cp) / h.values[start];
        cyls.push_back(c);
    }
    b["cylinders"] = cyls;
    r.doc["simulation"] = b;
    finish(r, {});
    return r;
}

Report run_oinf(const SequenceSpec& s, std::optional<double> beta, bool at_critical,
                bool with_gamma) {
    Report r = make_report();
    std::vector<std::string> warnings = s.warnings;
    json b = json::object();
    b["head_terms"] = int(s.head.size());
    if (s.has_tail) {
        json t = json::object();
        t["c"] = s.tail_c.str();
        t["d"] = s.tail_d.str();
        b["tail"] = t;
    } else {
        b["tail"] = "none";
        b["note"] = "finite emitter: equivalent to a one-vertex loop graph";
    }

    double at = 0.0;
    bool have_beta = false;
    if (at_critical) {
        if (!s.has_tail) throw precondition_error(
            "no tail: use the graph pipeline for the finite-emitter case");
        auto c = critical_beta0(s);
        if (!c) {
            b["critical_beta"] = nullptr;
            b["verdict"] = "no KMS states";
            b["note"] = s.tail_c.sign() <= 0
                            ? "the emitted sequence does not diverge: the partition "
                              "function is infinite at every beta"
                            : "Z(beta) never crosses 1 on [1e-06, 50]";
        } else {
            b["critical_beta"] = c->beta0;
            b["z_at_critical"] = c->z_at_beta0;
            for (auto& w : c->warnings) warnings.push_back(w);
            at = c->beta0;
            have_beta = true;
        }
    } else if (beta) {
        at = *beta;
        have_beta = true;
    }

    json gamma_block = json();
    if (have_beta) {
        KmsExistence k = kms_existence(s, at);
        b["beta"] = at;
        if (std::isfinite(k.z)) b["z"] = k.z;
        else b["z"] = json{{"divergent", true}};
        b["exists"] = k.exists;
        b["conservative"] = k.conservative;
        if (!k.exists) b["verdict"] = "no KMS states";
        for (auto& n : k.notes) b["notes"].push_back(n);
        if (with_gamma) {
            auto [group, type] = oinf_connes_group(s, at);
            json gb = json::object();
            gb["group"] = group_block(nullptr, group);
            gb["factor"] = factor_block(type);
            gamma_block = gb;
        }
    }
    r.doc["oinf"] = b;
    if (!gamma_block.is_null()) r.doc["gamma"] = gamma_block;
    finish(r, warnings);
    return r;
}

Report run_full(const Graph& g) {
    Report r = make_report();
    r.doc["input"] = input_block(g);
    std::vector<std::string> warnings;
    auto stop = [&](const std::string& stage, const std::string& why) {
        r.doc["stopped_at"] = stage;
        r.doc["stop_reason"] = why;
        finish(r, warnings);
        return r;
    };

    StructureReport sr = analyze_structure(g);
    r.doc["structure"] = structure_block(g, sr);
    if (sr.nw_vertices.empty())
        return stop("critical",
                    "the non-wandering set is empty: no conservative KMS weight exists; "
                    "all harmonic vectors are dissipative");

    CriticalResult crit;
    try {
        crit = critical_beta(g, {});
    } catch (const precondition_error& e) {
        return stop("critical", e.what());
    }
    for (auto& w : crit.warnings) warnings.push_back(w);
    json sp = json::object();
    sp["critical_beta"] = crit.beta0;
    sp["rho_at_critical"] = crit.rho_at_beta0;
    sp["monotone"] = crit.monotone_route;
    r.doc["spectral"] = sp;

    Classification cls = classify(g, crit.beta0);
    for (auto& w : cls.gate_warnings) warnings.push_back(w);
    json cb = classification_block(g, cls);
    json out = json::object();
    out["beta"] = crit.beta0;
    for (auto it = cb.begin(); it != cb.end(); ++it) out[it.key()] = it.value();
    r.doc["classification"] = out;
    if (cls.verdict != KmsVerdict::conservative)
        return stop("harmonic", "the weight at the reported beta is not conservative");

    HarmonicResult h;
    try {
        h = harmonic_vector(g, crit.beta0);
    } catch (const precondition_error& e) {
        return stop("harmonic", e.what());
    }
    r.doc["harmonic"] = harmonic_block(g, h);

    if (!sr.is_simple) {
        std::string why = sr.is_cofinal ? "a loop without exit" : "a non-cofinal vertex";
        return stop("gamma", "the algebra is not simple (" + why +
                                 "): the invariant theorem does not apply");
    }
    RealSubgroup rs;
    try {
        rs = connes_invariant(g, crit.beta0);
    } catch (const precondition_error& e) {
        return stop("gamma", e.what());
    }
    json gb = json::object();
    gb["beta"] = crit.beta0;
    gb["group"] = group_block(&g, rs);
    gb["verified"] = oracle_agrees(g);
    if (rs.kind == RealSubgroup::Kind::zero)
        return stop("factor", "the invariant group is trivial");
    FactorType t = factor_type(rs);
    gb["factor"] = factor_block(t);
    r.doc["gamma"] = gb;
    finish(r, warnings);
    return r;
}

}  // namespace gca
