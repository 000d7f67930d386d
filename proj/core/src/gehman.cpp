#include "dendro/gehman.hpp"

#include "dendro/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

namespace dendro {

namespace {

// Chains longer than this keep an intermediate vertex, so consecutive words
// on one edge stay well above the point tolerance apart.
constexpr int kMaxChain = 24;

bool is_binary(const std::string& w) {
    return std::all_of(w.begin(), w.end(), [](char c) { return c == '0' || c == '1'; });
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

class ForbiddenLanguage {
public:
    explicit ForbiddenLanguage(const std::vector<std::string>& F) : F_(F) {
        for (const auto& f : F_) context_ = std::max(context_, static_cast<int>(f.size()) - 1);
        // Alive contexts: those with an infinite admissible continuation.
        std::vector<std::string> ctx;
        enumerate("", context_, ctx);
        std::set<std::string> alive(ctx.begin(), ctx.end());
        for (bool changed = true; changed;) {
            changed = false;
            for (auto it = alive.begin(); it != alive.end();) {
                if (!has_successor(*it, alive)) {
                    it = alive.erase(it);
                    changed = true;
                } else {
                    ++it;
                }
            }
        }
        alive_ = std::move(alive);
    }

    bool avoids(const std::string& w) const {
        return std::none_of(F_.begin(), F_.end(), [&](const std::string& f) { return w.find(f) != std::string::npos; });
    }

    bool admissible(const std::string& u) const {
        if (!avoids(u)) return false;
        if (static_cast<int>(u.size()) >= context_) return alive_.count(u.substr(u.size() - context_)) > 0;
        for (char s : {'0', '1'}) {
            if (admissible(u + s)) return true;
        }
        return false;
    }

private:
    // Words of length n avoiding F.
    void enumerate(const std::string& prefix, int n, std::vector<std::string>& out) const {
        if (!avoids(prefix)) return;
        if (static_cast<int>(prefix.size()) == n) {
            out.push_back(prefix);
            return;
        }
        enumerate(prefix + '0', n, out);
        enumerate(prefix + '1', n, out);
    }

    bool has_successor(const std::string& c, const std::set<std::string>& alive) const {
        for (char s : {'0', '1'}) {
            const std::string w = c + s;
            if (avoids(w) && alive.count(w.substr(1)) > 0) return true;
        }
        return false;
    }

    std::vector<std::string> F_;
    int context_ = 0;
    std::set<std::string> alive_;
};

void enumerate_admissible(const ForbiddenLanguage& lang, std::string& prefix, int n, std::vector<std::string>& out) {
    if (!lang.avoids(prefix)) return;
    if (static_cast<int>(prefix.size()) == n) {
        if (lang.admissible(prefix)) out.push_back(prefix);
        return;
    }
    for (char s : {'0', '1'}) {
        prefix.push_back(s);
        enumerate_admissible(lang, prefix, n, out);
        prefix.pop_back();
    }
}

std::string substitute(const SubshiftSpec& spec, const std::string& w) {
    std::string out;
    out.reserve(2 * w.size());
    for (char c : w) out += spec.rule[c - '0'];
    return out;
}

} // namespace

SubshiftSpec substitution_spec(const std::string& image0, const std::string& image1, std::string name) {
    if (image0.size() != 2 || image1.size() != 2 || !is_binary(image0) || !is_binary(image1)) {
        throw ConfigError("substitution images must be binary words of length 2");
    }
    // 2x2 incidence matrix; primitive iff its square is positive.
    const int m[2][2] = {{static_cast<int>(std::count(image0.begin(), image0.end(), '0')),
                          static_cast<int>(std::count(image0.begin(), image0.end(), '1'))},
                         {static_cast<int>(std::count(image1.begin(), image1.end(), '0')),
                          static_cast<int>(std::count(image1.begin(), image1.end(), '1'))}};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            if (m[i][0] * m[0][j] + m[i][1] * m[1][j] == 0) {
                throw DomainError("substitution 0->" + image0 + ", 1->" + image1 + " is not primitive");
            }
        }
    }
    SubshiftSpec s;
    s.kind = SubshiftSpec::Kind::substitution;
    s.rule = {image0, image1};
    s.name = name.empty() ? "subst:" + image0 + "," + image1 : std::move(name);
    return s;
}

SubshiftSpec parse_subshift(const std::string& text) {
    if (text == "full") return SubshiftSpec{};
    if (text == "thue-morse") return substitution_spec("01", "10", "thue-morse");
    if (text == "period-doubling") return substitution_spec("01", "00", "period-doubling");
    if (text.rfind("forbid:", 0) == 0) {
        SubshiftSpec s;
        s.kind = SubshiftSpec::Kind::forbidden;
        s.forbidden = split(text.substr(7), ',');
        for (const auto& w : s.forbidden) {
            if (w.empty() || !is_binary(w)) throw ConfigError("forbidden words must be nonempty binary words");
        }
        s.name = text;
        return s;
    }
    if (text.rfind("subst:", 0) == 0) {
        const auto parts = split(text.substr(6), ',');
        if (parts.size() != 2) throw ConfigError("subst needs two images: subst:<w0>,<w1>");
        return substitution_spec(parts[0], parts[1]);
    }
    throw ConfigError("unknown subshift spec '" + text + "'");
}

std::size_t factor_prefix_length(int n) {
    std::size_t p = 1;
    while (p < static_cast<std::size_t>(std::max(n, 1))) p *= 2;
    return std::max<std::size_t>(4096, 64 * p);
}

std::string fixed_point_prefix(const SubshiftSpec& spec, std::size_t length) {
    if (spec.kind != SubshiftSpec::Kind::substitution) throw DomainError("not a substitution subshift");
    std::string s;
    bool squared = false;
    if (spec.rule[0][0] == '0') {
        s = "0";
    } else if (spec.rule[1][0] == '1') {
        s = "1";
    } else {
        s = "0"; // 0 -> 1.. -> 0.. under the square
        squared = true;
    }
    while (s.size() < length) {
        s = substitute(spec, s);
        if (squared) s = substitute(spec, s);
    }
    s.resize(length);
    return s;
}

std::vector<std::string> admissible_words(const SubshiftSpec& spec, int n) {
    if (n < 0) throw DomainError("word length must be >= 0");
    std::vector<std::string> out;
    switch (spec.kind) {
    case SubshiftSpec::Kind::full:
        if (n > 30) throw DomainError("full-shift word length above 30 is not supported");
        for (std::uint64_t w = 0; w < (std::uint64_t{1} << n); ++w) {
            std::string s(n, '0');
            for (int i = 0; i < n; ++i) {
                if ((w >> (n - 1 - i)) & 1u) s[i] = '1';
            }
            out.push_back(std::move(s));
        }
        break;
    case SubshiftSpec::Kind::forbidden: {
        if (n > 30) throw DomainError("forbidden-word length above 30 is not supported");
        const ForbiddenLanguage lang(spec.forbidden);
        std::string prefix;
        enumerate_admissible(lang, prefix, n, out);
        break;
    }
    case SubshiftSpec::Kind::substitution: {
        const std::string p = fixed_point_prefix(spec, factor_prefix_length(n));
        std::unordered_set<std::string> seen;
        for (std::size_t i = 0; i + n <= p.size(); ++i) seen.insert(p.substr(i, n));
        out.assign(seen.begin(), seen.end());
        break;
    }
    }
    if (out.empty()) throw DomainError("subshift " + spec.name + " has no admissible words of length " + std::to_string(n));
    std::sort(out.begin(), out.end());
    return out;
}

GehmanApprox::GehmanApprox(SubshiftSpec spec, int depth) : spec_(std::move(spec)), depth_(depth) {
    if (depth < 1) throw DomainError("Gehman depth must be >= 1");
    const auto leaves = admissible_words(spec_, depth);
    std::set<std::string> all;
    for (const auto& w : leaves) {
        for (int k = 0; k <= depth; ++k) all.insert(w.substr(0, k));
    }
    levels_.assign(depth + 1, {});
    for (const auto& w : all) levels_[w.size()].push_back(w);

    auto children = [&](const std::string& w) {
        std::vector<std::string> out;
        if (static_cast<int>(w.size()) == depth) return out;
        for (char s : {'0', '1'}) {
            if (all.count(w + s)) out.push_back(w + s);
        }
        return out;
    };

    // Decide which words are vertices: root, leaves, branch words, and every
    // kMaxChain-th word of a long chain.
    std::map<std::string, int> id;
    vertex_words_ = {"^", ""};
    id[""] = 1;
    std::map<std::string, int> run; // chain length since the last vertex
    run[""] = 0;
    for (int k = 1; k <= depth; ++k) {
        for (const auto& w : levels_[k]) {
            const std::string parent = w.substr(0, k - 1);
            const int r = id.count(parent) ? 1 : run[parent] + 1;
            const bool keep = k == depth || children(w).size() != 1 || r >= kMaxChain;
            if (keep) {
                id[w] = static_cast<int>(vertex_words_.size());
                vertex_words_.push_back(w);
                run[w] = 0;
            } else {
                run[w] = r;
            }
        }
    }

    struct Pending {
        int u, v;
        std::vector<std::pair<double, std::string>> chain;
    };
    std::vector<Edge> edges{{0, 1, 0.5}};
    std::vector<Pending> pending;
    for (std::size_t vi = 1; vi < vertex_words_.size(); ++vi) {
        const std::string& w = vertex_words_[vi];
        for (const std::string& c : children(w)) {
            std::vector<std::pair<double, std::string>> chain;
            std::string cur = c;
            double len = std::ldexp(1.0, -static_cast<int>(cur.size()));
            while (!id.count(cur)) {
                chain.emplace_back(len, cur);
                cur = children(cur).front();
                len += std::ldexp(1.0, -static_cast<int>(cur.size()));
            }
            for (auto& [t, word] : chain) t /= len;
            edges.push_back({static_cast<int>(vi), id[cur], len});
            pending.push_back({static_cast<int>(vi), id[cur], std::move(chain)});
        }
    }
    X_ = std::make_shared<const Dendrite>(static_cast<int>(vertex_words_.size()), std::move(edges));
    chains_.assign(X_->edge_count(), {});
    for (std::size_t v = 1; v < vertex_words_.size(); ++v) points_[vertex_words_[v]] = DPoint::at_vertex(static_cast<int>(v));
    for (auto& p : pending) {
        int e = -1;
        for (int cand : X_->incident(p.u)) {
            if (X_->other_end(cand, p.u) == p.v) e = cand;
        }
        if (e < 0 || X_->edge(e).u != p.u) throw InternalError("Gehman edge orientation");
        for (const auto& [t, word] : p.chain) points_[word] = DPoint{-1, e, t};
        chains_[e] = std::move(p.chain);
    }
}

DPoint GehmanApprox::point_of(const std::string& w) const {
    auto it = points_.find(w);
    if (it == points_.end()) throw DomainError("word '" + w + "' is not in the approximation");
    return it->second;
}

std::optional<std::string> GehmanApprox::address_of(const DPoint& p) const {
    if (p.is_vertex()) {
        if (p.vertex <= 0 || p.vertex >= static_cast<int>(vertex_words_.size())) return std::nullopt;
        return vertex_words_[p.vertex];
    }
    if (p.edge < 0 || p.edge >= static_cast<int>(chains_.size())) return std::nullopt;
    const auto& ch = chains_[p.edge];
    auto it = std::lower_bound(ch.begin(), ch.end(), p.t, [](const auto& a, double t) { return a.first < t; });
    if (it != ch.end() && it->first == p.t) return it->second;
    return std::nullopt;
}

DendriteMap shift_map(const GehmanApprox& G) {
    if (G.depth() < 2) throw DomainError("shift_map needs depth >= 2");
    const Dendrite& X = G.dendrite();
    auto shifted = [&](const std::string& w) { return G.point_of(w.empty() ? w : w.substr(1)); };
    std::vector<DPoint> images(X.vertex_count());
    images[G.stem_base()] = DPoint::at_vertex(G.root());
    for (int v = 1; v < X.vertex_count(); ++v) images[v] = shifted(*G.address_of(DPoint::at_vertex(v)));
    std::vector<Subdivision> subs;
    for (int e = 0; e < X.edge_count(); ++e) {
        for (const auto& [t, w] : G.chain_words(e)) subs.push_back({e, t, shifted(w)});
    }
    return DendriteMap(G.dendrite_ptr(), std::move(images), std::move(subs));
}

ConjugacyReport verify_conjugacy(const GehmanApprox& G, const DendriteMap& f) {
    ConjugacyReport rep;
    for (int k = 1; k <= G.depth(); ++k) {
        for (const std::string& u : G.words(k)) {
            ++rep.checks;
            const auto addr = G.address_of(f(G.point_of(u)));
            if (!addr || *addr != u.substr(1)) {
                if (rep.failures++ == 0) rep.witness = u;
            }
        }
    }
    std::set<std::string> img;
    for (const std::string& u : G.leaves()) {
        if (auto a = G.address_of(f(G.point_of(u)))) img.insert(*a);
    }
    const auto& level = G.words(G.depth() - 1);
    rep.image_covers_level = img == std::set<std::string>(level.begin(), level.end());
    return rep;
}

EntropyComparison entropy_compare(const SubshiftSpec& spec, int n_max, const MapEntropyParams& params) {
    if (n_max < 4) throw DomainError("entropy_compare needs n_max >= 4");
    EntropyComparison out;
    std::vector<double> logs;
    const int tail = n_max - n_max / 2 + 1;
    for (int n = 1; n <= n_max; ++n) {
        const auto p = static_cast<std::int64_t>(admissible_words(spec, n).size());
        out.complexity.push_back(p);
        if (n >= tail) logs.push_back(std::log(static_cast<double>(p)));
    }
    out.complexity_rate = std::log(static_cast<double>(out.complexity.back())) / n_max;
    out.complexity_slope = std::max(0.0, log_slope(logs, tail));
    const GehmanApprox G(spec, params.depth);
    out.map_side = entropy_estimate(shift_map(G), params.eps, params.n_max, params.grid_density);
    out.gap = std::abs(out.complexity_slope - out.map_side.estimate);
    return out;
}

PeriodicStructure dyadic_structure(const GehmanApprox& G, int k) {
    const SubshiftSpec& spec = G.spec();
    if (spec.kind != SubshiftSpec::Kind::substitution) throw DomainError("dyadic structure needs a substitution");
    if (k < 0) throw DomainError("level count must be >= 0");
    PeriodicStructure S;
    if (k == 0) return S;
    if (k > 12) throw DomainError("level count above 12 is not supported");
    const std::string p = fixed_point_prefix(spec, factor_prefix_length(G.depth()) << k);
    const std::size_t modulus = std::size_t{1} << k;
    std::vector<std::vector<DPoint>> phase_zero(k);
    for (const std::string& w : G.leaves()) {
        std::set<std::size_t> phases;
        for (auto pos = p.find(w); pos != std::string::npos; pos = p.find(w, pos + 1)) phases.insert(pos % modulus);
        if (phases.empty()) throw InternalError("leaf '" + w + "' missing from the fixed point prefix");
        for (int j = 1; j <= k; ++j) {
            std::set<std::size_t> pj;
            for (auto ph : phases) pj.insert(ph % (std::size_t{1} << j));
            if (pj.size() != 1) {
                throw DiagnosticError("leaf '" + w + "' occurs at " + std::to_string(pj.size()) + " phases mod " +
                                      std::to_string(1 << j) + "; try a larger depth");
            }
            if (*pj.begin() == 0) phase_zero[j - 1].push_back(G.point_of(w));
        }
    }
    for (int j = 0; j < k; ++j) {
        if (phase_zero[j].empty()) throw DiagnosticError("no leaf at phase 0 mod " + std::to_string(2 << j));
        S.levels.push_back({convex_hull(G.dendrite(), phase_zero[j]), 2});
    }
    return S;
}

} // namespace dendro
