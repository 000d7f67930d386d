#include "cli.hpp"

#include "dendro/arith.hpp"
#include "dendro/decomposition.hpp"
#include "dendro/disjointness.hpp"
#include "dendro/errors.hpp"
#include "dendro/gehman.hpp"
#include "dendro/io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <sstream>

namespace dendro::cli {

namespace {

using nlohmann::json;

std::string num(double x) {
    std::ostringstream ss;
    ss << std::setprecision(17) << x;
    return ss.str();
}

std::string csv_point(const DPoint& p) { return std::to_string(p.vertex) + "," + std::to_string(p.edge) + "," + num(p.t); }

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

// Output sink: --out file when given, the caller's stream otherwise.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) throw ConfigError("cannot write " + path);
            os_ = file_.get();
        }
    }
    std::ostream& operator*() { return *os_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* os_;
};

std::vector<std::int64_t> parse_list(const std::string& s) {
    std::vector<std::int64_t> out;
    if (s.empty()) return out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoll(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("not an integer list: " + s);
        }
    }
    return out;
}

// {"intervals": [[e, lo, hi], ...], "vertices": [...]} or {"hull": [spec, ...]}
Subdendrite parse_subdendrite(const Dendrite& X, const json& j) {
    if (j.contains("hull")) {
        std::vector<DPoint> pts;
        for (const json& p : j["hull"]) pts.push_back(parse_point(X, p.dump()));
        return convex_hull(X, pts);
    }
    SubdendriteBuilder b(X);
    if (j.contains("vertices")) {
        for (const json& v : j["vertices"]) b.add_vertex(v.get<int>());
    }
    if (j.contains("intervals")) {
        for (const json& I : j["intervals"]) {
            if (!I.is_array() || I.size() != 3) throw ConfigError("interval must be [edge, lo, hi]");
            b.add_interval(I[0].get<int>(), I[1].get<double>(), I[2].get<double>());
        }
    }
    return b.build();
}

PeriodicStructure parse_structure(const Dendrite& X, const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("structure: ") + e.what());
    }
    PeriodicStructure S;
    try {
        if (j.contains("base")) S.base = parse_subdendrite(X, j["base"]);
        for (const json& l : j.at("levels")) S.levels.push_back({parse_subdendrite(X, l.at("D")), l.at("n").get<int>()});
    } catch (const json::exception& e) {
        throw ConfigError(std::string("structure: ") + e.what());
    }
    return S;
}

// A map plus an optional structure, either from files or from a Gehman spec.
struct MapSource {
    std::string map_file;
    std::string gehman;
    int depth = 10;
    int levels = 1;
    std::string structure_file;

    void add_options(CLI::App* app, bool with_structure) {
        app->add_option("--map", map_file, "map JSON file");
        app->add_option("--gehman", gehman, "build the Gehman shift map for this subshift instead");
        app->add_option("--depth", depth, "Gehman approximation depth");
        if (with_structure) {
            app->add_option("--structure", structure_file, "structure JSON file");
            app->add_option("--levels", levels, "dyadic levels for --gehman");
        }
    }

    std::optional<GehmanApprox> G;

    DendriteMap map() {
        if (!gehman.empty()) {
            G.emplace(parse_subshift(gehman), depth);
            return shift_map(*G);
        }
        if (map_file.empty()) throw ConfigError("need --map or --gehman");
        return load_map(map_file);
    }

    PeriodicStructure structure(const Dendrite& X) {
        if (!structure_file.empty()) return parse_structure(X, read_text(structure_file));
        if (G) return dyadic_structure(*G, levels);
        throw ConfigError("need --structure or --gehman");
    }

    DPoint point(const Dendrite& X, const std::string& spec) {
        if (!spec.empty() && spec[0] == 'w') {
            if (!G) throw ConfigError("word addresses need --gehman");
            return G->point_of(spec.substr(1));
        }
        return parse_point(X, spec);
    }
};

std::shared_ptr<const Dendrite> dendrite_source(const std::string& file, int random_n, std::uint64_t seed) {
    if (!file.empty()) return load_dendrite(file);
    if (random_n > 0) return std::make_shared<const Dendrite>(random_dendrite(random_n, seed));
    throw ConfigError("need --dendrite or --random");
}

std::uint64_t default_seed() {
    if (const char* s = std::getenv("DENDRO_SEED")) {
        try {
            return std::stoull(s);
        } catch (const std::exception&) {
            throw ConfigError(std::string("DENDRO_SEED is not an integer: ") + s);
        }
    }
    return 1;
}

Observable observable(const std::string& spec, const Dendrite& X, const CellLocator* cells) {
    if (spec == "const") return constant_observable(1.0);
    if (spec.rfind("dist:", 0) == 0) return distance_observable(X, parse_point(X, spec.substr(5)));
    if (spec.rfind("step:", 0) == 0) {
        if (!cells) throw InternalError("step observable without cells");
        int i = 0;
        try {
            i = std::stoi(spec.substr(5));
        } catch (const std::exception&) {
            throw ConfigError("bad cell index in " + spec);
        }
        const StepObservable psi = step_function(*cells, i);
        return Observable{[psi](const DPoint& p) { return psi(p); }, spec, 0.0};
    }
    throw ConfigError("unknown observable '" + spec + "'");
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app("Dendrite dynamics toolkit", "dendro");
    app.require_subcommand(1);
    std::string out_path;
    app.add_option("--out", out_path, "write output here instead of stdout");
    std::uint64_t seed = 0;
    bool seed_given = false;
    app.add_option_function<std::uint64_t>("--seed", [&](std::uint64_t s) { seed = s; seed_given = true; },
                                           "random seed (overrides DENDRO_SEED)");

    // sieve
    auto* sieve = app.add_subcommand("sieve", "Möbius / Liouville / Mertens tables");
    std::int64_t sieve_n = 0;
    std::string emit = "mu";
    sieve->add_option("--n", sieve_n, "table bound")->required();
    sieve->add_option("--emit", emit, "mu, lambda or mertens")->check(CLI::IsMember({"mu", "lambda", "mertens"}));

    // decompose
    auto* dec = app.add_subcommand("decompose", "cells with at most two boundary points");
    std::string dendrite_file, graph_file;
    int random_n = 0;
    double delta = 0.0;
    dec->add_option("--dendrite", dendrite_file, "dendrite JSON file");
    dec->add_option("--random", random_n, "use a random dendrite with this many vertices");
    dec->add_option("--delta", delta, "cell diameter bound")->required();
    dec->add_option("--graph", graph_file, "also write a JSON cell graph here");

    // orbit / omega / entropy share a map and a point
    MapSource src;
    std::string point_spec;
    int orbit_n = 0;
    auto* orb = app.add_subcommand("orbit", "forward orbit");
    src.add_options(orb, false);
    orb->add_option("--point", point_spec, "point-spec [v] or [e,t]")->required();
    orb->add_option("--N", orbit_n, "number of steps")->required();

    auto* om = app.add_subcommand("omega", "omega-limit approximation");
    OmegaOptions oopt;
    src.add_options(om, false);
    om->add_option("--point", point_spec)->required();
    om->add_option("--burn-in", oopt.burn_in);
    om->add_option("--samples", oopt.samples);
    om->add_option("--resolution", oopt.resolution);

    auto* ent = app.add_subcommand("entropy", "separated-set entropy estimate");
    double eps = 0.01, density = 4.0;
    int n_max = 8;
    src.add_options(ent, false);
    ent->add_option("--eps", eps);
    ent->add_option("--n-max", n_max);
    ent->add_option("--grid-density", density);

    // sarnak
    auto* sar = app.add_subcommand("sarnak", "Möbius-weighted orbit averages");
    std::string obs = "const", checkpoints;
    std::int64_t big_n = 0;
    double cell_delta = 0.2;
    src.add_options(sar, false);
    sar->add_option("--point", point_spec)->required();
    sar->add_option("--obs", obs, "const, step:<cell> or dist:<point-spec>");
    sar->add_option("--N", big_n)->required();
    sar->add_option("--checkpoints", checkpoints, "comma-separated N values");
    sar->add_option("--delta", cell_delta, "decomposition scale for step observables");

    // verify-structure
    auto* ver = app.add_subcommand("verify-structure", "check a nested periodic structure");
    double ver_eps = 1e-3;
    src.add_options(ver, true);
    ver->add_option("--point", point_spec, "omega-limit sample start")->required();
    ver->add_option("--eps", ver_eps);

    // bound
    auto* bnd = app.add_subcommand("bound", "slot-wise split of a Sarnak sum");
    int cell = 0, level = 0;
    BoundOptions bopt;
    double slot_tol = 0.01;
    src.add_options(bnd, true);
    bnd->add_option("--point", point_spec)->required();
    bnd->add_option("--delta", cell_delta);
    bnd->add_option("--cell", cell);
    bnd->add_option("--level", level);
    bnd->add_option("--N", big_n)->required();
    bnd->add_option("--horizon", bopt.horizon);
    bnd->add_option("--checkpoints", checkpoints);
    bnd->add_option("--tol", slot_tol, "threshold for periodic-type slots");

    // gehman
    auto* geh = app.add_subcommand("gehman", "subshift realizations on Gehman approximations");
    std::string spec_text = "full", geh_emit = "report";
    int geh_depth = 4;
    geh->add_option("--spec", spec_text, "full, thue-morse, period-doubling, forbid:<w,..>, subst:<w0>,<w1>");
    geh->add_option("--depth", geh_depth);
    geh->add_option("--emit", geh_emit)->check(CLI::IsMember({"dendrite", "map", "report"}));

    // report
    auto* rep = app.add_subcommand("report", "consolidate ndjson results");
    std::vector<std::string> result_files;
    rep->add_option("--results", result_files, "ndjson result files")->required();

    auto error_line = [&](const char* kind, const std::string& msg) {
        err << json{{"error", kind}, {"message", msg}}.dump() << "\n";
    };

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        error_line("usage", e.what());
        err << app.help();
        return kValidation;
    }
    if (!seed_given) seed = default_seed();

    try {
        Sink sink(out_path, out);
        std::ostream& os = *sink;

        if (sieve->parsed()) {
            const SieveTable t(sieve_n);
            if (emit == "mertens") {
                os << "N,M\n";
                std::int64_t m = 0;
                for (std::int64_t n = 1; n <= sieve_n; ++n) os << n << "," << (m += t.mu(n)) << "\n";
            } else {
                os << "n," << emit << "\n";
                for (std::int64_t n = 1; n <= sieve_n; ++n) os << n << "," << (emit == "mu" ? t.mu(n) : t.lambda(n)) << "\n";
            }
            return kOk;
        }

        if (dec->parsed()) {
            const auto X = dendrite_source(dendrite_file, random_n, seed);
            const Decomposition D = decompose(*X, delta);
            os << "cell_id,diameter,boundary_size,boundary_points\n";
            for (std::size_t i = 0; i < D.cells.size(); ++i) {
                const Cell& c = D.cells[i];
                json pts = json::array();
                for (const DPoint& b : c.boundary) pts.push_back(json::parse(point_to_json(b)));
                os << i << "," << num(c.diameter) << "," << c.boundary.size() << "," << quoted(pts.dump()) << "\n";
            }
            if (!graph_file.empty()) {
                json g = json::parse(dendrite_to_json(*X));
                json cells = json::array();
                for (const Cell& c : D.cells) {
                    json iv = json::array();
                    for (const Interval& I : c.body.intervals) iv.push_back(json::array({I.edge, I.lo, I.hi}));
                    cells.push_back(json{{"intervals", iv}, {"vertices", c.body.vertices}});
                }
                g["cells"] = cells;
                g["order_deviations"] = D.order_deviations;
                std::ofstream gf(graph_file, std::ios::binary);
                if (!gf) throw ConfigError("cannot write " + graph_file);
                gf << g.dump() << "\n";
            }
            return kOk;
        }

        if (orb->parsed()) {
            const DendriteMap f = src.map();
            const auto pts = orbit(f, src.point(f.domain(), point_spec), orbit_n);
            os << "n,vertex,edge,t\n";
            for (std::size_t n = 0; n < pts.size(); ++n) os << n << "," << csv_point(pts[n]) << "\n";
            return kOk;
        }

        if (om->parsed()) {
            const DendriteMap f = src.map();
            const OmegaApprox w = omega_limit(f, src.point(f.domain(), point_spec), oopt);
            os << "index,vertex,edge,t\n";
            for (std::size_t i = 0; i < w.points.size(); ++i) os << i << "," << csv_point(w.points[i]) << "\n";
            err << json{{"finite_cycle", w.finite_cycle}, {"period", w.period}, {"preperiod", w.preperiod}}.dump() << "\n";
            return kOk;
        }

        if (ent->parsed()) {
            const DendriteMap f = src.map();
            const EntropyEstimate e = entropy_estimate(f, eps, n_max, density);
            os << "n,separated\n";
            for (std::size_t i = 0; i < e.separated.size(); ++i) os << i + 1 << "," << e.separated[i] << "\n";
            os << "estimate," << num(e.estimate) << "\n";
            return kOk;
        }

        if (sar->parsed()) {
            const DendriteMap f = src.map();
            const Dendrite& X = f.domain();
            std::optional<CellLocator> cells;
            if (obs.rfind("step:", 0) == 0) cells.emplace(X, decompose(X, cell_delta).cells);
            const Observable phi = observable(obs, X, cells ? &*cells : nullptr);
            const SieveTable t(big_n);
            const SumSeries s = sarnak_sum(f, src.point(X, point_spec), phi, t, big_n, parse_list(checkpoints));
            os << "N,S_N\n";
            for (const auto& [n, v] : s.checkpoints) os << n << "," << num(v) << "\n";
            return kOk;
        }

        if (ver->parsed()) {
            const DendriteMap f = src.map();
            const PeriodicStructure S = src.structure(f.domain());
            const OmegaApprox L = omega_limit(f, src.point(f.domain(), point_spec));
            const StructureReport r = verify_structure(f, S, L.points, ver_eps);
            os << "level,alpha,condition,pass,margin,detail\n";
            for (std::size_t k = 0; k < r.levels.size(); ++k) {
                for (std::size_t c = 0; c < 5; ++c) {
                    const ConditionResult& cr = r.levels[k].conditions[c];
                    os << k + 1 << "," << r.levels[k].alpha << "," << c + 1 << "," << (cr.pass ? "pass" : "fail") << ","
                       << num(cr.margin) << "," << quoted(cr.detail) << "\n";
                }
            }
            if (!r.ok()) {
                error_line("diagnostic", "structure verification failed");
                return kFailure;
            }
            return kOk;
        }

        if (bnd->parsed()) {
            const DendriteMap f = src.map();
            const Dendrite& X = f.domain();
            const PeriodicStructure S = src.structure(X);
            if (level < 0 || level >= static_cast<int>(S.levels.size())) throw ConfigError("no structure level " + std::to_string(level));
            const CellLocator cells(X, decompose(X, cell_delta).cells);
            const SieveTable t(big_n);
            bopt.checkpoints = parse_list(checkpoints);
            const BoundReport r = bound_experiment(f, src.point(X, point_spec), cells, cell, S,
                                                   static_cast<std::size_t>(level), t, big_n, bopt);
            const double inv_alpha = 1.0 / static_cast<double>(r.alpha);
            os << "slot,type,A_N,pass,margin\n";
            bool ok = r.boundary_slots <= 2 && r.gaps_ok && r.slot_mismatches == 0;
            for (const SlotReport& s : r.slots) {
                const double lim = s.boundary_type ? inv_alpha : slot_tol;
                const bool pass = std::abs(s.A) <= lim;
                ok = ok && pass;
                os << s.slot << "," << (s.boundary_type ? "boundary" : "periodic") << "," << num(s.A) << ","
                   << (pass ? "pass" : "fail") << "," << num(lim - std::abs(s.A)) << "\n";
            }
            const bool total_ok = r.sum_abs <= r.bound + slot_tol;
            ok = ok && total_ok;
            os << "total,sum_abs," << num(r.sum_abs) << "," << (total_ok ? "pass" : "fail") << ","
               << num(r.bound + slot_tol - r.sum_abs) << "\n";
            err << json{{"n0", r.n0}, {"alpha", r.alpha}, {"boundary_slots", r.boundary_slots},
                        {"splitting_residual", r.splitting_residual}, {"slot_mismatches", r.slot_mismatches}}
                       .dump()
                << "\n";
            if (!ok) {
                error_line("diagnostic", "bound experiment failed");
                return kFailure;
            }
            return kOk;
        }

        if (geh->parsed()) {
            const GehmanApprox G(parse_subshift(spec_text), geh_depth);
            if (geh_emit == "dendrite") {
                os << dendrite_to_json(G.dendrite()) << "\n";
            } else if (geh_emit == "map") {
                os << map_to_json(shift_map(G)) << "\n";
            } else {
                json r{{"spec", G.spec().name}, {"depth", G.depth()}, {"leaves", G.leaves().size()},
                       {"vertices", G.dendrite().vertex_count()}};
                if (G.depth() >= 2) {
                    const ConjugacyReport c = verify_conjugacy(G, shift_map(G));
                    r["conjugacy_checks"] = c.checks;
                    r["conjugacy_failures"] = c.failures;
                    r["image_covers_level"] = c.image_covers_level;
                    r["note"] = "finite-depth truncation: surjectivity is reported as the image of the leaves "
                                "covering the previous level";
                }
                os << r.dump() << "\n";
            }
            return kOk;
        }

        if (rep->parsed()) {
            os << "id,pass,value,bound,margin\n";
            bool all = true;
            for (const std::string& file : result_files) {
                std::ifstream in(file);
                if (!in) {
                    error_line("config", "missing results file " + file);
                    return kValidation;
                }
                std::string line;
                while (std::getline(in, line)) {
                    if (line.empty()) continue;
                    json j;
                    try {
                        j = json::parse(line);
                    } catch (const json::parse_error& e) {
                        throw ConfigError("bad result line in " + file + ": " + e.what());
                    }
                    const bool pass = j.value("pass", false);
                    all = all && pass;
                    auto field = [&](const char* k) { return j.contains(k) && j[k].is_number() ? num(j[k].get<double>()) : ""; };
                    os << j.value("id", "") << "," << (pass ? "pass" : "fail") << "," << field("value") << ","
                       << field("bound") << "," << field("margin") << "\n";
                }
            }
            return all ? kOk : kFailure;
        }
    } catch (const ConfigError& e) {
        error_line("config", e.what());
        return kValidation;
    } catch (const DomainError& e) {
        error_line("domain", e.what());
        return kValidation;
    } catch (const DiagnosticError& e) {
        error_line("diagnostic", e.what());
        return kFailure;
    } catch (const InternalError& e) {
        error_line("internal", e.what());
        return kFailure;
    } catch (const std::exception& e) {
        error_line("failure", e.what());
        return kFailure;
    }
    return kValidation;
}

} // namespace dendro::cli
