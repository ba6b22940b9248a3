#include "graph.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <unordered_map>

#include "errors.hpp"
#include "util.hpp"

namespace gca {

namespace {

std::vector<std::string> split_ws(std::string_view line) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        if (i > start) out.emplace_back(line.substr(start, i - start));
    }
    return out;
}

bool valid_identifier(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                  (c >= '0' && c <= '9') || c == '_' || c == '-';
        if (!ok) return false;
    }
    return true;
}

}  // namespace

// F-value literal: <rat>[+<rat><omega-name>], rat = [-]p[/q].
PotValue parse_pot_literal(std::string_view text, const std::optional<OmegaDecl>& omega,
                           int line) {
    std::size_t i = 0;
    auto scan_rat = [&]() -> std::string_view {
        std::size_t start = i;
        if (i < text.size() && text[i] == '-') ++i;
        while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
        if (i < text.size() && text[i] == '/') {
            ++i;
            while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
        }
        return text.substr(start, i - start);
    };
    Rational rat, irr;
    try {
        rat = Rational::parse(scan_rat());
        if (i < text.size()) {
            if (text[i] != '+')
                throw parse_error(0, "expected '+' before omega term in potential literal");
            ++i;
            irr = Rational::parse(scan_rat());
            std::string_view name = text.substr(i);
            if (!omega)
                throw parse_error(0, "omega coefficient used without an omega declaration");
            if (name != omega->name)
                throw parse_error(0, "unknown omega symbol '" + std::string(name) + "'");
            i = text.size();
        }
    } catch (const parse_error& e) {
        throw parse_error(line, e.what());
    }
    return PotValue(rat, irr);
}

Graph Graph::parse(std::string_view text) {
    Graph g;
    std::unordered_map<std::string, int> vmap, amap;
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        auto tok = split_ws(raw);
        if (tok.empty()) continue;
        const std::string& kw = tok[0];
        if (kw == "omega") {
            if (tok.size() != 4 || tok[2] != "=")
                throw parse_error(lineno, "expected 'omega <name> = <decimal>'");
            if (g.omega_) throw parse_error(lineno, "omega declared more than once");
            if (!valid_identifier(tok[1]))
                throw parse_error(lineno, "invalid omega name '" + tok[1] + "'");
            char* end = nullptr;
            double w = std::strtod(tok[3].c_str(), &end);
            if (end == tok[3].c_str() || *end != '\0')
                throw parse_error(lineno, "invalid omega witness '" + tok[3] + "'");
            g.omega_ = OmegaDecl{tok[1], w};
        } else if (kw == "vertex") {
            if (tok.size() != 2) throw parse_error(lineno, "expected 'vertex <id>'");
            if (!valid_identifier(tok[1]))
                throw parse_error(lineno, "invalid vertex id '" + tok[1] + "'");
            if (!vmap.emplace(tok[1], g.vertex_count()).second)
                throw parse_error(lineno, "duplicate vertex id '" + tok[1] + "'");
            g.vertex_ids_.push_back(tok[1]);
        } else if (kw == "arrow") {
            if (tok.size() != 5 || tok[4].rfind("F=", 0) != 0)
                throw parse_error(lineno, "expected 'arrow <id> <src> <dst> F=<value>'");
            if (!valid_identifier(tok[1]))
                throw parse_error(lineno, "invalid arrow id '" + tok[1] + "'");
            if (!amap.emplace(tok[1], g.arrow_count()).second)
                throw parse_error(lineno, "duplicate arrow id '" + tok[1] + "'");
            auto src = vmap.find(tok[2]);
            if (src == vmap.end())
                throw parse_error(lineno, "arrow references undeclared vertex '" + tok[2] + "'");
            auto dst = vmap.find(tok[3]);
            if (dst == vmap.end())
                throw parse_error(lineno, "arrow references undeclared vertex '" + tok[3] + "'");
            PotValue pot = parse_pot_literal(std::string_view(tok[4]).substr(2), g.omega_, lineno);
            g.arrows_.push_back(Arrow{tok[1], src->second, dst->second, pot});
        } else {
            throw parse_error(lineno, "unknown directive '" + kw + "'");
        }
    }
    if (g.vertex_ids_.empty()) throw parse_error(lineno, "graph declares no vertices");
    g.out_.assign(g.vertex_count(), {});
    for (int a = 0; a < g.arrow_count(); ++a) g.out_[g.arrows_[a].src].push_back(a);
    g.digest_ = content_digest(text);
    return g;
}

std::string Graph::serialize() const {
    std::string out;
    if (omega_) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", omega_->witness);
        out += "omega " + omega_->name + " = " + buf + "\n";
    }
    for (const std::string& v : vertex_ids_) out += "vertex " + v + "\n";
    for (const Arrow& a : arrows_) {
        out += "arrow " + a.id + " " + vertex_ids_[a.src] + " " + vertex_ids_[a.dst] +
               " F=" + a.pot.str(omega_ ? omega_->name : "w") + "\n";
    }
    return out;
}

int Graph::vertex_index(std::string_view id) const {
    if (auto v = find_vertex(id)) return *v;
    throw invalid_argument("unknown vertex '" + std::string(id) + "'");
}

int Graph::arrow_index(std::string_view id) const {
    if (auto a = find_arrow(id)) return *a;
    throw invalid_argument("unknown arrow '" + std::string(id) + "'");
}

std::optional<int> Graph::find_vertex(std::string_view id) const {
    for (int i = 0; i < vertex_count(); ++i)
        if (vertex_ids_[i] == id) return i;
    return std::nullopt;
}

std::optional<int> Graph::find_arrow(std::string_view id) const {
    for (int i = 0; i < arrow_count(); ++i)
        if (arrows_[i].id == id) return i;
    return std::nullopt;
}

bool Graph::same_as(const Graph& other) const {
    if (vertex_ids_ != other.vertex_ids_) return false;
    if (arrow_count() != other.arrow_count()) return false;
    for (int i = 0; i < arrow_count(); ++i) {
        const Arrow& a = arrows_[i];
        const Arrow& b = other.arrows_[i];
        if (a.id != b.id || a.src != b.src || a.dst != b.dst || a.pot != b.pot) return false;
    }
    bool oa = omega_.has_value(), ob = other.omega_.has_value();
    if (oa != ob) return false;
    if (oa && (omega_->name != other.omega_->name || omega_->witness != other.omega_->witness))
        return false;
    return true;
}

Path make_path(const Graph& g, const std::vector<std::string>& arrow_ids) {
    Path p;
    for (const std::string& id : arrow_ids) p.arrows.push_back(g.arrow_index(id));
    if (p.arrows.empty()) throw invalid_argument("empty arrow list; use a vertex path instead");
    for (std::size_t i = 0; i + 1 < p.arrows.size(); ++i) {
        const Arrow& cur = g.arrow(p.arrows[i]);
        const Arrow& next = g.arrow(p.arrows[i + 1]);
        if (cur.dst != next.src)
            throw invalid_argument("arrows '" + cur.id + "' and '" + next.id +
                                   "' are not composable");
    }
    return p;
}

Path vertex_path(const Graph& g, std::string_view vertex_id) {
    Path p;
    p.anchor = g.vertex_index(vertex_id);
    return p;
}

Path parse_path(const Graph& g, std::string_view spec) {
    if (!spec.empty() && spec[0] == '@') return vertex_path(g, spec.substr(1));
    std::vector<std::string> ids;
    std::size_t start = 0;
    while (start <= spec.size()) {
        std::size_t dot = spec.find('.', start);
        if (dot == std::string_view::npos) dot = spec.size();
        if (dot > start) ids.emplace_back(spec.substr(start, dot - start));
        start = dot + 1;
    }
    if (ids.empty())
        throw invalid_argument("empty path spec; expected '@vertex' or 'a.b.c' arrow ids");
    return make_path(g, ids);
}

int path_source(const Graph& g, const Path& p) {
    return p.empty() ? p.anchor : g.arrow(p.arrows.front()).src;
}

int path_range(const Graph& g, const Path& p) {
    return p.empty() ? p.anchor : g.arrow(p.arrows.back()).dst;
}

std::string path_str(const Graph& g, const Path& p) {
    if (p.empty()) return "@" + g.vertex_id(p.anchor);
    std::string s;
    for (std::size_t i = 0; i < p.arrows.size(); ++i) {
        if (i) s += '.';
        s += g.arrow(p.arrows[i]).id;
    }
    return s;
}

PotValue path_potential(const Graph& g, const Path& p) {
    if (p.empty()) {
        if (p.anchor < 0 || p.anchor >= g.vertex_count())
            throw invalid_argument("path anchor out of range");
        return PotValue();
    }
    PotValue total;
    for (std::size_t i = 0; i < p.arrows.size(); ++i) {
        if (i > 0 && g.arrow(p.arrows[i - 1]).dst != g.arrow(p.arrows[i]).src)
            throw invalid_argument("non-composable arrow sequence in path");
        total += g.arrow(p.arrows[i]).pot;
    }
    return total;
}

}  // namespace gca
