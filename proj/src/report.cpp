#include "meroconv/report.hpp"

namespace mero {

Json to_json(const RunConfig& c) {
    Json j;
    j["k_min"] = c.k_min;
    j["k_max"] = c.k_max;
    j["tol"] = c.tol;
    j["seed"] = c.seed;
    j["budget"] = c.budget;
    j["eps"] = c.eps;
    j["chart"] = c.chart;
    j["grid"] = c.grid;
    j["format"] = c.format;
    j["workers"] = c.workers;
    j["d"] = c.d;
    j["order"] = c.order;
    j["k"] = c.k;
    j["radius"] = c.radius;
    return j;
}

Json to_json(const MassReport& m) {
    Json j;
    j["value"] = m.value;
    j["est_error"] = m.est_error;
    j["order"] = m.order;
    j["eps_used"] = m.eps_used;
    j["extrapolated"] = m.extrapolated;
    j["samples"] = m.samples;
    j["min_density"] = m.min_density;
    j["ok"] = m.ok;
    if (!m.note.empty()) j["note"] = m.note;
    return j;
}

Json to_json(const AreaReport& a) {
    Json j;
    j["value"] = a.value;
    j["est_error"] = a.est_error;
    j["boundary_integral"] = a.boundary_integral;
    j["lift_zero_count"] = a.lift_zero_count;
    j["ok"] = a.ok;
    if (!a.note.empty()) j["note"] = a.note;
    return j;
}

Json to_json(const CountReport& c) {
    Json j;
    j["count"] = c.count;
    j["residual"] = c.residual;
    j["min_modulus"] = c.min_modulus;
    j["nodes_used"] = c.nodes_used;
    j["ok"] = c.ok;
    if (!c.error.empty()) j["error"] = c.error;
    return j;
}

Json to_json(const KingReport& k) {
    Json j;
    j["boundary_mass"] = k.boundary_mass;
    j["interior_mass"] = k.interior_mass;
    j["atom"] = k.atom;
    j["atom_int"] = k.atom_int;
    j["atom_residual"] = k.atom_residual;
    j["ok"] = k.ok;
    if (!k.note.empty()) j["note"] = k.note;
    return j;
}

Json to_json(const RashkovskiiReport& r) {
    Json j;
    j["k"] = r.k;
    j["eps"] = r.eps;
    j["monte_carlo"] = to_json(r.mc);
    if (r.exact_atom) j["exact_atom"] = r.exact_atom->str();
    return j;
}

Json to_json(const Verdict& v) {
    Json j;
    j["level"] = level_name(v.level);
    j["narrative"] = v.narrative;
    Json rep;
    rep["ks"] = v.rep.ks;
    rep["metric_series"] = v.rep.metric_series;
    rep["candidate_distance"] = v.rep.candidate_distance;
    rep["cauchy"] = v.rep.cauchy;
    rep["candidate_emitted"] = v.rep.candidate_emitted;
    if (v.rep.limit_tuple) {
        Json comps = Json::array();
        for (const auto& p : v.rep.limit_tuple->comps) comps.push_back(p.str());
        rep["limit_tuple"] = comps;
    }
    if (!v.rep.note.empty()) rep["note"] = v.rep.note;
    j["rep_convergence"] = rep;
    if (v.limit_reducedness_known) {
        j["limit_reduced"] = v.limit_reducedness.reduced;
        if (!v.limit_reducedness.reduced)
            j["limit_common_divisor"] = v.limit_reducedness.common_divisor.str();
    }
    Json counts = Json::array();
    for (const auto& ev : v.divisor_counts) {
        Json e;
        e["hyperplane"] = ev.hyperplane.name;
        e["skipped"] = ev.skipped;
        if (ev.skipped) {
            e["skip_reason"] = ev.skip_reason;
        } else {
            e["ks"] = ev.ks;
            e["counts"] = ev.counts;
            e["bounded"] = ev.bounded;
        }
        if (!ev.notes.empty()) e["notes"] = ev.notes;
        counts.push_back(e);
    }
    j["divisor_counts"] = counts;
    Json masses = Json::array();
    for (const auto& ms : v.mass_series) {
        Json e;
        e["order"] = ms.order;
        e["ks"] = ms.ks;
        e["masses"] = ms.masses;
        e["errors"] = ms.errors;
        e["trend"] = ms.trend;
        if (ms.has_reference) e["limit_mass"] = ms.reference;
        masses.push_back(e);
    }
    j["mass_series"] = masses;
    j["slice_area_series"] = v.slice_area_series;
    return j;
}

Json to_json(const SeparationReport& s) {
    Json j;
    j["ks"] = s.ks;
    Json h = Json::array();
    for (double d : s.hausdorff)
        h.push_back(std::isfinite(d) ? Json(d) : Json("empty-pullback"));
    j["hausdorff"] = h;
    j["infimum"] = s.infimum;
    j["slice_count"] = s.slice_count;
    j["note"] = s.note;
    return j;
}

Json to_json(const BubbleReport& b) {
    Json j;
    Json base = Json::array();
    for (const auto& c : b.base_point) base.push_back({c.real(), c.imag()});
    j["base_point"] = base;
    j["radii"] = b.radii;
    j["ks"] = b.ks;
    Json cls = Json::array();
    for (const auto& cl : b.clusters) {
        Json e;
        Json rep = Json::array();
        for (const auto& c : cl.representative) rep.push_back({c.real(), c.imag()});
        e["representative"] = rep;
        e["hits"] = cl.hits;
        e["min_dist_to_limit_cloud"] = cl.min_dist_to_limit_cloud;
        cls.push_back(e);
    }
    j["clusters"] = cls;
    j["nonempty"] = b.nonempty;
    j["inconclusive"] = b.inconclusive;
    if (!b.note.empty()) j["note"] = b.note;
    return j;
}

Json to_json(const GammaVolumeSeries& g) {
    Json j;
    j["ks"] = g.ks;
    j["eps"] = g.eps;
    j["first_integral"] = g.first_integral;
    j["second_integral"] = g.second_integral;
    j["second_bound"] = g.second_bound;
    j["cross_ks"] = g.cross_ks;
    j["first_general"] = g.first_general;
    j["second_general"] = g.second_general;
    j["method"] = g.method;
    return j;
}

Json make_report(const std::string& command, const RunConfig& cfg, Json results) {
    Json j;
    j["schema_version"] = 1;
    j["tool"] = "meroconv";
    j["command"] = command;
    j["config"] = to_json(cfg);
    j["results"] = std::move(results);
    return j;
}

}  // namespace mero
