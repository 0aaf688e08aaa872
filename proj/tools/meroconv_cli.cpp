#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "meroconv/dynamics.hpp"
#include "meroconv/registry.hpp"
#include "meroconv/report.hpp"

using namespace mero;

namespace {

int emit(const Json& report, const RunConfig& cfg, const std::string& csv = "") {
    std::string payload;
    if (cfg.format == "csv" && !csv.empty())
        payload = csv;
    else
        payload = report.dump(2) + "\n";
    if (cfg.out_path.empty()) {
        std::cout << payload;
    } else {
        std::ofstream os(cfg.out_path, std::ios::binary);
        if (!os) {
            std::cerr << "cannot open output path: " << cfg.out_path << "\n";
            return 2;
        }
        os << payload;
    }
    return 0;
}

ClassifyConfig configure(const ExampleRegistryEntry& entry, const RunConfig& run) {
    ClassifyConfig cfg = entry.config ? entry.config() : ClassifyConfig{};
    cfg.seed = run.seed;
    cfg.workers = run.workers;
    if (run.tol > 0) cfg.rep_tol = run.tol;
    if (run.budget > 0) cfg.mc_samples = run.budget;
    return cfg;
}

MapFamily family_with_range(const ExampleRegistryEntry& entry, const RunConfig& run) {
    MapFamily fam = entry.family();
    if (run.k_max > 0) fam.k_max = run.k_max;
    if (run.k_min > 0) fam.k_min = run.k_min;
    return fam;
}

HomogRep map_of(const ExampleRegistryEntry& entry, const RunConfig& run, bool* ok) {
    *ok = true;
    if (entry.map) return entry.map(run.d);
    if (entry.family) {
        MapFamily fam = entry.family();
        return fam.generator(run.k);
    }
    *ok = false;
    return HomogRep::identity(1);
}

std::string tuple_str(const PolyTuple& t) {
    std::string s = "[";
    for (int i = 0; i < t.size(); ++i) {
        if (i) s += " : ";
        s += t.comps[i].str();
    }
    return s + "]";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"meroconv: convergence classification and geometry of rational map sequences"};
    app.require_subcommand(0, 1);
    app.fallthrough();

    RunConfig run;
    std::string name, point_arg = "0.5,0", lift_arg = "reduced";
    int h0 = 0, h1 = 1, e1 = 1, e2 = 1;

    app.add_option("--kmin", run.k_min, "first index of the family range");
    app.add_option("--kmax", run.k_max, "last index of the family range");
    app.add_option("--k", run.k, "single iterate / family index");
    app.add_option("--tol", run.tol, "rep-convergence tolerance");
    app.add_option("--seed", run.seed, "deterministic seed");
    app.add_option("--budget", run.budget, "Monte Carlo sample budget");
    app.add_option("--eps", run.eps, "epsilon (domain radius or exclusion)");
    app.add_option("--chart", run.chart, "affine chart index");
    app.add_option("--grid", run.grid, "scan grid, e.g. 200x200");
    app.add_option("--out", run.out_path, "output path (default stdout)");
    app.add_option("--format", run.format, "json or csv");
    app.add_option("--workers", run.workers, "worker threads");
    app.add_option("--d", run.d, "degree parameter for deg-d");
    app.add_option("--order", run.order, "Monge-Ampere order (0: all)");
    app.add_option("--radius", run.radius, "disk/ball/sphere radius");

    auto* c_examples = app.add_subcommand("examples", "list the example registry");
    auto* c_reduce = app.add_subcommand("reduce", "reduce a representation");
    c_reduce->add_option("name", name, "example name or @file with a serialized map");
    auto* c_iterate = app.add_subcommand("iterate", "closed-form iterate of a self-map");
    c_iterate->add_option("name", name);
    auto* c_degree = app.add_subcommand("degree", "algebraic and topological degree");
    c_degree->add_option("name", name);
    auto* c_classify = app.add_subcommand("classify", "classify a family's convergence");
    c_classify->add_option("name", name);
    auto* c_area = app.add_subcommand("area", "Fubini-Study area of the standard line lift");
    c_area->add_option("--lift", lift_arg, "reduced [1:z] or nonreduced (z, z^2)");
    auto* c_mass = app.add_subcommand("mass", "mixed Monge-Ampere masses of a family member");
    c_mass->add_option("name", name);
    auto* c_king = app.add_subcommand("king", "boundary/interior residue of a monomial lift");
    c_king->add_option("--e1", e1, "exponent of z1");
    c_king->add_option("--e2", e2, "exponent of z2");
    auto* c_rash = app.add_subcommand("rash", "order-3 mass of the unbounded-volume potential");
    auto* c_scan = app.add_subcommand("fatou-scan", "grid scan of the Fatou basins");
    c_scan->add_option("name", name);
    auto* c_gamma = app.add_subcommand("gamma-volumes", "graph-volume series over the eps-bidisk");
    auto* c_bubble = app.add_subcommand("bubble", "probe the bubble fiber at a chart point");
    c_bubble->add_option("name", name);
    c_bubble->add_option("--point", point_arg, "chart point, comma-separated reals");
    auto* c_sep = app.add_subcommand("separation", "uniform separation of two hyperplanes");
    c_sep->add_option("name", name);
    c_sep->add_option("--h0", h0, "first coordinate hyperplane index");
    c_sep->add_option("--h1", h1, "second coordinate hyperplane index");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(c_examples)) {
            Json entries = Json::array();
            for (const auto& e : example_registry()) {
                Json je;
                je["name"] = e.name;
                je["note"] = e.note;
                je["has_family"] = static_cast<bool>(e.family);
                je["has_map"] = static_cast<bool>(e.map);
                if (!e.expected_verdict.empty()) je["expected_verdict"] = e.expected_verdict;
                entries.push_back(je);
            }
            return emit(make_report("examples", run, entries), run);
        }

        if (app.got_subcommand(c_reduce)) {
            HomogRep rep = HomogRep::identity(1);
            if (!name.empty() && name[0] == '@') {
                std::ifstream is(name.substr(1));
                if (!is) {
                    std::cerr << "cannot read map file\n";
                    return 2;
                }
                std::string text((std::istreambuf_iterator<char>(is)),
                                 std::istreambuf_iterator<char>());
                rep = HomogRep::deserialize(text);
            } else {
                const auto* e = find_example(name);
                if (!e) {
                    std::cerr << "unknown example: " << name << "\n";
                    return 2;
                }
                bool ok = false;
                rep = map_of(*e, run, &ok);
                if (!ok) {
                    std::cerr << "entry has no map\n";
                    return 2;
                }
            }
            auto red = reduce_rep(rep);
            Json res;
            res["input"] = tuple_str(rep.tuple);
            res["content"] = tuple_content(rep.tuple).str();
            res["reduced"] = tuple_str(red.tuple);
            res["serialized"] = red.serialize();
            return emit(make_report("reduce", run, res), run);
        }

        const auto* entry_ptr = name.empty() ? nullptr : find_example(name);
        if ((app.got_subcommand(c_iterate) || app.got_subcommand(c_degree) ||
             app.got_subcommand(c_classify) || app.got_subcommand(c_mass) ||
             app.got_subcommand(c_scan) || app.got_subcommand(c_bubble) ||
             app.got_subcommand(c_sep)) &&
            entry_ptr == nullptr) {
            std::cerr << "unknown or missing example name; available:\n";
            for (const auto& e : example_registry()) std::cerr << "  " << e.name << "\n";
            return 2;
        }

        if (app.got_subcommand(c_iterate)) {
            bool ok = false;
            HomogRep f = map_of(*entry_ptr, run, &ok);
            if (!ok) return 2;
            auto it = iterate_closed(f, run.k);
            Json res;
            res["k"] = run.k;
            res["iterate"] = tuple_str(it.tuple);
            res["algebraic_degree"] = it.algebraic_degree().str();
            res["reduced"] = it.reduced;
            return emit(make_report("iterate", run, res), run);
        }

        if (app.got_subcommand(c_degree)) {
            bool ok = false;
            HomogRep f = map_of(*entry_ptr, run, &ok);
            if (!ok) return 2;
            Json res;
            res["algebraic_degree"] = f.algebraic_degree().str();
            if (f.is_monomial()) {
                auto mm = MonomialMap::from_homog(f, run.chart);
                res["topological_degree"] = topological_degree(mm).str();
            } else {
                res["topological_degree"] = "unsupported (non-monomial map)";
            }
            return emit(make_report("degree", run, res), run);
        }

        if (app.got_subcommand(c_classify)) {
            if (!entry_ptr->family) {
                std::cerr << "entry has no family\n";
                return 2;
            }
            MapFamily fam = family_with_range(*entry_ptr, run);
            ClassifyConfig cfg = configure(*entry_ptr, run);
            auto v = classify(fam, cfg);
            Json res = to_json(v);
            if (!entry_ptr->expected_verdict.empty())
                res["expected_verdict"] = entry_ptr->expected_verdict;
            int rc = emit(make_report("classify", run, res), run);
            if (rc != 0) return rc;
            return v.level == Level::Inconclusive ? 1 : 0;
        }

        if (app.got_subcommand(c_area)) {
            double r = run.radius;
            PolyTuple F =
                (lift_arg == "nonreduced")
                    ? PolyTuple({SparsePoly::variable(1, 0),
                                 SparsePoly::variable(1, 0) * SparsePoly::variable(1, 0)})
                    : PolyTuple({SparsePoly::constant(1, GaussianRational(1)),
                                 SparsePoly::variable(1, 0)});
            auto lift = LiftEvaluator::from_tuple(F);
            ContourSpec c;
            c.radius = r;
            Json res;
            res["lift"] = lift_arg;
            res["radius"] = r;
            res["interior"] = to_json(fs_area_interior(lift, c));
            res["boundary"] = to_json(fs_area_boundary(lift, c, run.seed));
            res["closed_form"] = r * r / (1 + r * r);
            return emit(make_report("area", run, res), run);
        }

        if (app.got_subcommand(c_mass)) {
            if (!entry_ptr->family) {
                std::cerr << "entry has no family\n";
                return 2;
            }
            MapFamily fam = family_with_range(*entry_ptr, run);
            ClassifyConfig cfg = configure(*entry_ptr, run);
            auto rl = rep_limit(fam, cfg);
            auto series = mass_convergence(fam, cfg, rl.limit_tuple);
            Json res = Json::array();
            for (const auto& ms : series) {
                if (run.order > 0 && ms.order != run.order) continue;
                Json e;
                e["order"] = ms.order;
                e["ks"] = ms.ks;
                e["masses"] = ms.masses;
                e["errors"] = ms.errors;
                e["trend"] = ms.trend;
                res.push_back(e);
            }
            return emit(make_report("mass", run, res), run);
        }

        if (app.got_subcommand(c_king)) {
            ExponentVector ea{BigInt(e1), 0}, eb{0, BigInt(e2)};
            PolyTuple F({SparsePoly::monomial(2, ea, GaussianRational(1)),
                         SparsePoly::monomial(2, eb, GaussianRational(1))});
            auto lift = LiftEvaluator::from_tuple(F);
            auto rep = king_residue_check(lift, 0.0, 0.0, run.radius);
            Json res = to_json(rep);
            res["lift"] = "(z1^" + std::to_string(e1) + ", z2^" + std::to_string(e2) + ")";
            int rc = emit(make_report("king", run, res), run);
            if (rc != 0) return rc;
            return rep.ok ? 0 : 1;
        }

        if (app.got_subcommand(c_rash)) {
            BallSpec dom;
            dom.center = {0.0, 0.0, 0.0};
            dom.radius = 0.5;
            dom.samples = run.budget > 0 ? run.budget : 2000000;
            dom.seed = run.seed;
            dom.workers = run.workers;
            auto rep = rashkovskii_mass(run.k, run.eps, dom);
            int rc = emit(make_report("rash", run, to_json(rep)), run);
            if (rc != 0) return rc;
            return rep.mc.ok ? 0 : 1;
        }

        if (app.got_subcommand(c_scan)) {
            bool ok = false;
            HomogRep f = map_of(*entry_ptr, run, &ok);
            if (!ok) return 2;
            FatouScanSpec spec;
            spec.chart = run.chart;
            if (std::sscanf(run.grid.c_str(), "%dx%d", &spec.n1, &spec.n2) != 2) {
                std::cerr << "bad --grid, expected NxM\n";
                return 2;
            }
            if (run.k_max > 0) spec.k = run.k_max;
            auto grid = fatou_scan(f, spec);
            Json res;
            res["cells"] = static_cast<int>(grid.cells.size());
            std::map<std::string, int> counts;
            for (const auto& c : grid.cells) counts[c.label]++;
            Json hist;
            for (const auto& [label, n] : counts) hist[label] = n;
            res["labels"] = hist;
            return emit(make_report("fatou-scan", run, res), run, grid.csv());
        }

        if (app.got_subcommand(c_gamma)) {
            double eps = run.eps > 0 ? run.eps : 0.5;
            int kmax = run.k_max > 0 ? run.k_max : 8;
            auto s = gamma_volume_series(run.k_min, kmax, eps, true);
            return emit(make_report("gamma-volumes", run, to_json(s)), run);
        }

        if (app.got_subcommand(c_bubble)) {
            if (!entry_ptr->family) {
                std::cerr << "entry has no family\n";
                return 2;
            }
            MapFamily fam = family_with_range(*entry_ptr, run);
            ClassifyConfig cfg = configure(*entry_ptr, run);
            std::vector<std::complex<double>> a;
            {
                std::stringstream ss(point_arg);
                std::string tok;
                while (std::getline(ss, tok, ',')) a.push_back(std::stod(tok));
            }
            std::vector<double> radii;
            for (int j = 0; j < 17; ++j) radii.push_back(0.4 * std::pow(10.0, -0.5 * j));
            auto rep = bubble_probe(fam, a, radii, cfg);
            int rc = emit(make_report("bubble", run, to_json(rep)), run);
            if (rc != 0) return rc;
            return rep.inconclusive ? 1 : 0;
        }

        if (app.got_subcommand(c_sep)) {
            if (!entry_ptr->family) {
                std::cerr << "entry has no family\n";
                return 2;
            }
            MapFamily fam = family_with_range(*entry_ptr, run);
            ClassifyConfig cfg = configure(*entry_ptr, run);
            int ncomp = fam.chart_tuple(fam.k_min, cfg.chart).size();
            if (h0 < 0 || h0 >= ncomp || h1 < 0 || h1 >= ncomp || h0 == h1) {
                std::cerr << "hyperplane indices out of range\n";
                return 2;
            }
            auto mk = [&](int j) {
                Hyperplane H;
                H.name = "Z" + std::to_string(j) + "=0";
                H.coeffs.assign(ncomp, GaussianRational(0));
                H.coeffs[j] = GaussianRational(1);
                return H;
            };
            auto rep = uniform_separation(fam, mk(h0), mk(h1), cfg);
            return emit(make_report("separation", run, to_json(rep)), run);
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }

    std::cerr << app.help();
    return 2;
}
