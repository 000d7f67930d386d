#include "dendro/io.hpp"

#include "dendro/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace dendro {

using nlohmann::json;

namespace {

json parse_json(const std::string& text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string(what) + ": " + e.what());
    }
}

std::shared_ptr<const Dendrite> dendrite_from(const json& j) {
    if (!j.is_object() || !j.contains("vertices") || !j.contains("edges")) {
        throw ConfigError("dendrite JSON needs \"vertices\" and \"edges\"");
    }
    if (!j["vertices"].is_number_integer()) throw ConfigError("\"vertices\" must be an integer");
    const int n = j["vertices"].get<int>();
    std::vector<Edge> edges;
    if (!j["edges"].is_array()) throw ConfigError("\"edges\" must be an array");
    for (std::size_t i = 0; i < j["edges"].size(); ++i) {
        const json& e = j["edges"][i];
        if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_number_integer() ||
            !e[2].is_number()) {
            throw ConfigError("edge " + std::to_string(i) + " must be [u, v, length]");
        }
        edges.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
    }
    return std::make_shared<const Dendrite>(n, std::move(edges));
}

DPoint point_from(const Dendrite& X, const json& j) {
    DPoint p;
    if (j.is_array() && j.size() == 1 && j[0].is_number_integer()) {
        p = DPoint::at_vertex(j[0].get<int>());
    } else if (j.is_array() && j.size() == 2 && j[0].is_number_integer() && j[1].is_number()) {
        const int e = j[0].get<int>();
        if (e < 0 || e >= X.edge_count()) throw DomainError("point on unknown edge " + std::to_string(e));
        const double t = j[1].get<double>();
        if (!(t >= 0.0 && t <= 1.0)) throw DomainError("edge coordinate must lie in [0, 1]");
        return X.point(e, t);
    } else {
        throw ConfigError("point-spec must be [vertex] or [edge, t], got " + j.dump());
    }
    X.check(p);
    return p;
}

json point_json(const DPoint& p) {
    if (p.is_vertex()) return json::array({p.vertex});
    return json::array({p.edge, p.t});
}

} // namespace

std::string read_text(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::shared_ptr<const Dendrite> parse_dendrite(const std::string& text) {
    return dendrite_from(parse_json(text, "dendrite"));
}

std::shared_ptr<const Dendrite> load_dendrite(const std::filesystem::path& file) {
    return parse_dendrite(read_text(file));
}

std::string dendrite_to_json(const Dendrite& X) {
    json edges = json::array();
    for (const Edge& e : X.edges()) edges.push_back(json::array({e.u, e.v, e.length}));
    return json{{"vertices", X.vertex_count()}, {"edges", edges}}.dump();
}

DendriteMap parse_map(const std::string& text, const std::filesystem::path& base_dir) {
    const json j = parse_json(text, "map");
    if (!j.is_object() || !j.contains("dendrite") || !j.contains("vertex_images")) {
        throw ConfigError("map JSON needs \"dendrite\" and \"vertex_images\"");
    }
    std::shared_ptr<const Dendrite> X;
    if (j["dendrite"].is_string()) {
        std::filesystem::path p = j["dendrite"].get<std::string>();
        if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
        X = load_dendrite(p);
    } else {
        X = dendrite_from(j["dendrite"]);
    }
    const int n = X->vertex_count();
    std::vector<DPoint> images(n);
    std::vector<bool> given(n, false);
    const json& vi = j["vertex_images"];
    auto set_image = [&](int v, const json& spec) {
        if (v < 0 || v >= n) throw DomainError("vertex_images names unknown vertex " + std::to_string(v));
        images[v] = point_from(*X, spec);
        given[v] = true;
    };
    if (vi.is_object()) {
        for (const auto& [key, spec] : vi.items()) {
            int v = 0;
            try {
                std::size_t used = 0;
                v = std::stoi(key, &used);
                if (used != key.size()) throw std::invalid_argument(key);
            } catch (const std::exception&) {
                throw ConfigError("vertex_images key is not a vertex id: " + key);
            }
            set_image(v, spec);
        }
    } else if (vi.is_array()) {
        for (std::size_t v = 0; v < vi.size(); ++v) set_image(static_cast<int>(v), vi[v]);
    } else {
        throw ConfigError("\"vertex_images\" must be an object or array");
    }
    for (int v = 0; v < n; ++v) {
        if (!given[v]) throw DomainError("vertex " + std::to_string(v) + " has no image");
    }
    std::vector<Subdivision> subs;
    if (j.contains("subdivisions")) {
        for (const json& s : j["subdivisions"]) {
            if (!s.is_array() || s.size() != 3 || !s[0].is_number_integer() || !s[1].is_number()) {
                throw ConfigError("subdivision must be [edge, t, point-spec]");
            }
            subs.push_back({s[0].get<int>(), s[1].get<double>(), point_from(*X, s[2])});
        }
    }
    return DendriteMap(std::move(X), std::move(images), std::move(subs));
}

DendriteMap load_map(const std::filesystem::path& file) {
    return parse_map(read_text(file), file.parent_path());
}

std::string map_to_json(const DendriteMap& f) {
    json vi = json::object();
    for (std::size_t v = 0; v < f.vertex_images().size(); ++v) vi[std::to_string(v)] = point_json(f.vertex_images()[v]);
    json subs = json::array();
    for (const auto& s : f.subdivisions()) subs.push_back(json::array({s.edge, s.t, point_json(s.image)}));
    return json{{"dendrite", json::parse(dendrite_to_json(f.domain()))}, {"vertex_images", vi}, {"subdivisions", subs}}
        .dump();
}

DPoint parse_point(const Dendrite& X, const std::string& spec) {
    return point_from(X, parse_json(spec, "point-spec"));
}

std::string point_to_json(const DPoint& p) { return point_json(p).dump(); }

} // namespace dendro
